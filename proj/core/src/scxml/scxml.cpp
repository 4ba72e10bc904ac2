#include "xfd/scxml/scxml.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "xfd/error.hpp"
#include "xfd/semantics.hpp"

namespace xfd::scxml {

namespace {

using xml::Node;

struct DelayValue {
  TimeValue value;
  std::string text;
};

// Bare decimals pass through verbatim; "s"/"ms" suffixes are normalized to
// seconds.
DelayValue parse_delay(const std::string& raw) {
  std::string t = raw;
  const auto b = t.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) throw Error("missing-delay", "empty delay value");
  t = t.substr(b, t.find_last_not_of(" \t\r\n") + 1 - b);

  double scale = 1.0;
  std::string digits = t;
  bool suffixed = false;
  if (t.size() > 2 && t.compare(t.size() - 2, 2, "ms") == 0) {
    scale = 1e-3;
    digits = t.substr(0, t.size() - 2);
    suffixed = true;
  } else if (t.size() > 1 && t.back() == 's') {
    digits = t.substr(0, t.size() - 1);
    suffixed = true;
  }
  double v = 0.0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc() || p != digits.data() + digits.size() || v < 0.0)
    throw Error("bad-delay", "'" + raw + "' is not a delay");
  TimeValue tv(v * scale);
  return {tv, suffixed ? format_time(tv) : digits};
}

struct SendSite {
  const Node* send;
  std::string enclosing_id;  // ../../@id, the literal grandparent rule
};

struct TransitionSite {
  const Node* transition;
  std::string parent_id;  // ../@id
};

void collect(const Node& node, std::vector<const Node*>& ancestry,
             std::vector<SendSite>& sends, std::vector<TransitionSite>& transitions) {
  for (const Node& child : node.children) {
    const std::string name = child.local_name();
    if (name == "send") {
      std::string gp_id;
      if (ancestry.size() >= 1) {
        const Node* grandparent = ancestry.back();
        if (const std::string* id = grandparent->attr("id")) gp_id = *id;
      }
      sends.push_back({&child, gp_id});
    } else if (name == "transition") {
      std::string p_id;
      if (const std::string* id = node.attr("id")) p_id = *id;
      transitions.push_back({&child, p_id});
    }
    ancestry.push_back(&node);
    collect(child, ancestry, sends, transitions);
    ancestry.pop_back();
  }
}

}  // namespace

StateMachineDoc transform_scxml(const Node& scxml_doc) {
  if (scxml_doc.local_name() != "scxml")
    throw Error("kind-mismatch", "expected an <scxml> document, got <" +
                                     scxml_doc.local_name() + ">");

  std::vector<SendSite> sends;
  std::vector<TransitionSite> transitions;
  std::vector<const Node*> ancestry;
  collect(scxml_doc, ancestry, sends, transitions);

  StateMachineDoc sm;

  for (const SendSite& site : sends) {
    const std::string* event = site.send->attr("event");
    if (!event || event->empty())
      throw Error("missing-event", "<send> without an event attribute");
    const std::string* delay = site.send->attr("delay");
    if (!delay)
      throw Error("missing-delay", "<send event=\"" + *event + "\"> has no delay");
    if (site.enclosing_id.empty())
      throw Error("missing-start-state",
                  "<send event=\"" + *event + "\"> is not inside an identified state");

    std::vector<const Node*> matches;
    for (const TransitionSite& t : transitions) {
      const std::string* ev = t.transition->attr("event");
      if (ev && *ev == *event) matches.push_back(t.transition);
    }
    if (matches.empty())
      throw Error("missing-target", "no transition handles event '" + *event + "'");
    if (matches.size() > 1)
      throw Error("ambiguous-target",
                  "event '" + *event + "' matches " + std::to_string(matches.size()) +
                      " transitions");

    DelayValue d = parse_delay(*delay);
    const std::string* target = matches.front()->attr("target");
    sm.internal.push_back(
        {site.enclosing_id, target ? *target : "", d.value, d.text, *event});
  }

  for (const TransitionSite& t : transitions) {
    const std::string* event = t.transition->attr("event");
    if (!event || event->empty()) continue;
    // Events claimed by a send belong to the internal cycle, not here.
    bool shadowed = false;
    for (const SendSite& s : sends) {
      const std::string* sev = s.send->attr("event");
      if (sev && *sev == *event) {
        shadowed = true;
        break;
      }
    }
    if (shadowed) continue;
    const std::string* target = t.transition->attr("target");
    sm.external.push_back({*event, t.parent_id, target ? *target : "", TimeValue(0.0),
                           "0", *event});
  }

  return sm;
}

xml::Node emit_statemachine_xml(const StateMachineDoc& sm) {
  Node root;
  root.name = "statemachine";
  root.set_attr("name", sm.name);
  root.set_attr("host", sm.host);

  if (!sm.internal.empty()) {
    Node& ints = root.add_child("deltint").add_child("transitionsInt");
    for (const IntRec& r : sm.internal) {
      Node& t = ints.add_child("transition");
      t.add_child("startState").set_text(r.start_state);
      t.add_child("nextState").set_text(r.next_state);
      t.add_child("timeout").set_text(r.timeout_text.empty()
                                          ? format_time(r.timeout)
                                          : r.timeout_text);
      t.add_child("outMsg").set_text(r.out_msg);
    }
  }

  Node& exts = root.add_child("deltext").add_child("transitionsExt");
  for (const ExtRec& r : sm.external) {
    Node& te = exts.add_child("transitionExt");
    te.add_child("incomingMsg").set_text(r.incoming_msg);
    Node& t = te.add_child("transition");
    t.add_child("startState").set_text(r.start_state);
    t.add_child("nextState").set_text(r.next_state);
    t.add_child("timeout").set_text(r.timeout_text.empty() ? format_time(r.timeout)
                                                           : r.timeout_text);
    t.add_child("outMsg").set_text(r.out_msg);
  }

  return root;
}

StateMachineDoc parse_statemachine_xml(const Node& doc) {
  if (doc.local_name() != "statemachine")
    throw Error("kind-mismatch", "expected a <statemachine> document");
  StateMachineDoc sm;
  if (const std::string* v = doc.attr("name")) sm.name = *v;
  if (const std::string* v = doc.attr("host")) sm.host = *v;

  auto text_of = [](const Node& n, const char* child) {
    const Node* c = n.child(child);
    return c ? c->trimmed_text() : std::string{};
  };

  if (const Node* deltint = doc.child("deltint"))
    if (const Node* list = deltint->child("transitionsInt"))
      for (const Node* t : list->children_named("transition")) {
        IntRec r;
        r.start_state = text_of(*t, "startState");
        r.next_state = text_of(*t, "nextState");
        r.timeout_text = text_of(*t, "timeout");
        r.timeout = r.timeout_text.empty() ? TimeValue(0.0) : parse_time(r.timeout_text);
        r.out_msg = text_of(*t, "outMsg");
        sm.internal.push_back(std::move(r));
      }

  if (const Node* deltext = doc.child("deltext"))
    if (const Node* list = deltext->child("transitionsExt"))
      for (const Node* te : list->children_named("transitionExt")) {
        ExtRec r;
        r.incoming_msg = text_of(*te, "incomingMsg");
        if (const Node* t = te->child("transition")) {
          r.start_state = text_of(*t, "startState");
          r.next_state = text_of(*t, "nextState");
          r.timeout_text = text_of(*t, "timeout");
          r.timeout = r.timeout_text.empty() ? TimeValue(0.0) : parse_time(r.timeout_text);
          r.out_msg = text_of(*t, "outMsg");
        }
        sm.external.push_back(std::move(r));
      }

  return sm;
}

AtomicSpec lift_statemachine(const StateMachineDoc& sm) {
  if (sm.internal.empty() && sm.external.empty())
    throw Error("empty-machine", "no states can be derived from an empty statemachine");

  AtomicSpec spec;
  spec.name = sm.name;
  spec.host = sm.host;

  auto add_state = [&](const std::string& s, const char* what) {
    if (s.empty())
      throw Error("invalid-state", std::string(what) + " with an empty state name");
    if (!spec.has_state(s)) spec.states.push_back(s);
  };

  for (const IntRec& r : sm.internal) {
    add_state(r.start_state, "internal record");
    add_state(r.next_state, "internal record");
  }
  for (const ExtRec& r : sm.external) {
    add_state(r.start_state, "external record");
    add_state(r.next_state, "external record");
  }
  spec.initial = spec.states.front();

  int int_id = 0;
  for (const IntRec& r : sm.internal) {
    if (const TaEntry* prev = spec.find_ta(r.start_state)) {
      if (prev->timeout != r.timeout)
        throw Error("conflicting-timeouts",
                    "state '" + r.start_state + "' has two different timeouts");
      throw Error("conflicting-internal",
                  "state '" + r.start_state + "' has two internal transitions");
    }
    spec.ta.push_back({r.start_state, r.timeout});
    spec.delt_int.push_back({r.start_state, r.next_state, ++int_id});
    if (!r.out_msg.empty()) {
      if (std::find(spec.outports.begin(), spec.outports.end(), r.out_msg) ==
          spec.outports.end())
        spec.outports.push_back(r.out_msg);
      spec.lambda.push_back({r.start_state, r.out_msg, r.out_msg});
    }
  }

  int ext_id = 0;
  for (const ExtRec& r : sm.external) {
    if (r.incoming_msg.empty())
      throw Error("invalid-state", "external record without an incoming message");
    if (spec.find_ext(r.start_state, r.incoming_msg))
      throw Error("conflicting-ext", "duplicate external transition for ('" +
                                         r.start_state + "', '" + r.incoming_msg + "')");
    if (std::find(spec.inports.begin(), spec.inports.end(), r.incoming_msg) ==
        spec.inports.end())
      spec.inports.push_back(r.incoming_msg);
    // The record's timeout and outMsg have no home in the atomic form.
    spec.delt_ext.push_back({r.start_state, r.incoming_msg, r.next_state, true, ++ext_id});
  }

  auto vs = validate_atomic(spec);
  if (has_errors(vs)) {
    std::string msg = "lifted machine does not validate:";
    for (const auto& v : vs)
      if (v.is_error()) msg += " [" + v.code + ": " + v.message + "]";
    throw Error("invalid-machine", msg);
  }
  return spec;
}

}  // namespace xfd::scxml

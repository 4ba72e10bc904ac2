#include "xfd/xml/devs_xml.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "xfd/error.hpp"
#include "xfd/semantics.hpp"

namespace xfd::devs_xml {

namespace {

using xml::Node;
using xml::ParseError;

// ---------------------------------------------------------------- dialect --

// Element and attribute spellings exclusive to one dialect. Everything else
// ("deltext", "state", "transition", ...) is accepted in both.
const std::set<std::string> kStrictAtomicElems = {"timeAdvance", "timeout", "lamdas",
                                                  "delttext"};
const std::set<std::string> kVariantAtomicElems = {"TimeAdvance", "Timeout", "LamdaSet"};
const std::set<std::string> kStrictCoupledElems = {"coupling", "src", "dest"};
const std::set<std::string> kVariantCoupledElems = {"Coupling", "SrcModel", "DestModel",
                                                    "output", "devs"};

void scan_markers(const Node& n, DocKind kind, bool& strict, bool& variant) {
  const std::string name = n.local_name();
  if (kind == DocKind::Atomic) {
    if (kStrictAtomicElems.count(name)) strict = true;
    if (kVariantAtomicElems.count(name)) variant = true;
    if (name == "InternalTransition" || name == "ExternalTransition") {
      if (n.attr("id")) strict = true;
      if (n.attr("intTransitionID") || n.attr("extTransitionID")) variant = true;
    }
  } else {
    if (kStrictCoupledElems.count(name)) strict = true;
    if (kVariantCoupledElems.count(name)) variant = true;
  }
  for (const Node& c : n.children) scan_markers(c, kind, strict, variant);
}

Dialect detect_dialect(const Node& doc, DocKind kind, std::vector<Violation>* out) {
  bool strict = false, variant = false;
  scan_markers(doc, kind, strict, variant);
  if (strict && variant) {
    if (out)
      out->push_back({codes::DialectMismatch, "/" + doc.local_name(),
                      "document mixes normative and variant spellings"});
    return kind == DocKind::Atomic ? Dialect::AtomicSchema : Dialect::CoupledSchema;
  }
  if (variant)
    return kind == DocKind::Atomic ? Dialect::AtomicVariant : Dialect::CoupledVariant;
  return kind == DocKind::Atomic ? Dialect::AtomicSchema : Dialect::CoupledSchema;
}

[[noreturn]] void throw_violations(const std::string& code,
                                   std::vector<Violation> violations) {
  std::string msg;
  for (const auto& v : violations) {
    if (!msg.empty()) msg += "; ";
    msg += v.code + " at " + v.path + ": " + v.message;
  }
  throw ParseError(code, msg, std::move(violations));
}

void require_dialect_clean(const Node& doc, DocKind kind, Dialect* dialect_out) {
  std::vector<Violation> vs;
  Dialect d = detect_dialect(doc, kind, &vs);
  if (!vs.empty()) throw_violations("dialect-mismatch", std::move(vs));
  if (dialect_out) *dialect_out = d;
}

// ----------------------------------------------------------------- lexical --

bool parse_bool(const std::string& text, bool& out) {
  if (text == "true" || text == "1") { out = true; return true; }
  if (text == "false" || text == "0") { out = false; return true; }
  return false;
}

bool parse_int(const std::string& text, int& out) {
  const char* b = text.data();
  const char* e = b + text.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e;
}

// ------------------------------------------------------------ atomic parse --

int read_transition_id(const Node& n, const char* variant_attr,
                       const std::string& path, std::vector<Violation>& vs) {
  const std::string* raw = n.attr("id");
  if (!raw) raw = n.attr(variant_attr);
  if (!raw) return 0;
  int id = 0;
  if (!parse_int(*raw, id)) {
    vs.push_back({codes::BadNumber, path, "transition id '" + *raw + "' is not an integer"});
    return 0;
  }
  return id;
}

struct TransitionPair {
  StateName from, to;
};

bool read_transition_pair(const Node& holder, const std::string& path,
                          std::vector<Violation>& vs, TransitionPair& out) {
  const Node* tr = holder.child("transition");
  if (!tr) {
    vs.push_back({codes::MissingElement, path, "missing <transition>"});
    return false;
  }
  const Node* from = tr->child("StartState");
  const Node* to = tr->child("NextState");
  if (!from || !to) {
    vs.push_back({codes::MissingElement, path + "/transition",
                  "transition needs StartState and NextState"});
    return false;
  }
  out = {from->trimmed_text(), to->trimmed_text()};
  return true;
}

AtomicSpec build_atomic(const Node& doc, std::vector<Violation>& vs) {
  AtomicSpec spec;
  if (const std::string* v = doc.attr("modelName")) spec.name = *v;
  if (const std::string* v = doc.attr("host")) spec.host = *v;

  for (const Node& section : doc.children) {
    const std::string sec = section.local_name();
    const std::string path = "/Atomic/" + sec;
    if (sec == "inports") {
      for (const Node* p : section.children_named("inport"))
        spec.inports.push_back(p->trimmed_text());
    } else if (sec == "outports") {
      for (const Node* p : section.children_named("outport"))
        spec.outports.push_back(p->trimmed_text());
    } else if (sec == "states") {
      for (const Node* s : section.children_named("state"))
        spec.states.push_back(s->trimmed_text());
    } else if (sec == "deltint") {
      int i = 0;
      for (const Node* t : section.children_named("InternalTransition")) {
        const std::string at = path + "/InternalTransition[" + std::to_string(++i) + "]";
        TransitionPair pair;
        if (!read_transition_pair(*t, at, vs, pair)) continue;
        spec.delt_int.push_back({pair.from, pair.to,
                                 read_transition_id(*t, "intTransitionID", at, vs)});
      }
    } else if (sec == "delttext" || sec == "deltext") {
      int i = 0;
      for (const Node* t : section.children_named("ExternalTransition")) {
        const std::string at = path + "/ExternalTransition[" + std::to_string(++i) + "]";
        const Node* msg = t->child("IncomingMessage");
        if (!msg) {
          vs.push_back({codes::MissingElement, at, "missing <IncomingMessage>"});
          continue;
        }
        TransitionPair pair;
        if (!read_transition_pair(*t, at, vs, pair)) continue;
        bool schedule = true;  // absent indicator defaults to reschedule
        if (const Node* si = t->child("ScheduleIndicator")) {
          if (!parse_bool(si->trimmed_text(), schedule))
            vs.push_back({codes::BadBoolean, at + "/ScheduleIndicator",
                          "'" + si->trimmed_text() + "' is not a boolean"});
        }
        spec.delt_ext.push_back({pair.from, msg->trimmed_text(), pair.to, schedule,
                                 read_transition_id(*t, "extTransitionID", at, vs)});
      }
    } else if (sec == "timeAdvance" || sec == "TimeAdvance") {
      int i = 0;
      for (const Node* t : section.children_named("ta")) {
        const std::string at = path + "/ta[" + std::to_string(++i) + "]";
        const Node* state = t->child("state");
        const Node* timeout = t->child("timeout");
        if (!timeout) timeout = t->child("Timeout");
        if (!state || !timeout) {
          vs.push_back({codes::MissingElement, at, "ta needs state and timeout"});
          continue;
        }
        TimeValue value;
        try {
          value = parse_time(timeout->trimmed_text());
        } catch (const Error&) {
          vs.push_back({codes::BadNumber, at + "/timeout",
                        "'" + timeout->trimmed_text() + "' is not a non-negative decimal"});
          continue;
        }
        if (value.is_infinite()) continue;  // passive states carry no entry
        spec.ta.push_back({state->trimmed_text(), value});
      }
    } else if (sec == "lamdas" || sec == "LamdaSet") {
      int i = 0;
      for (const Node* l : section.children_named("lamda")) {
        const std::string at = path + "/lamda[" + std::to_string(++i) + "]";
        const Node* state = l->child("state");
        const Node* outport = l->child("outport");
        if (!state || !outport) {
          vs.push_back({codes::MissingElement, at, "lamda needs state and outport"});
          continue;
        }
        std::optional<MessageLabel> label;
        if (const Node* lab = l->child("outLabel")) label = lab->trimmed_text();
        spec.lambda.push_back({state->trimmed_text(), outport->trimmed_text(), label});
      }
    }
    // Unknown sections are ignored here; validate_document reports them.
  }

  if (!spec.states.empty()) spec.initial = spec.states.front();
  return spec;
}

// ----------------------------------------------------------- coupled parse --

CoupledSpec build_coupled(const Node& doc, std::vector<Violation>& vs) {
  CoupledSpec spec;
  if (const std::string* v = doc.attr("name")) spec.name = *v;
  if (const std::string* v = doc.attr("host")) spec.host = *v;

  for (const Node& section : doc.children) {
    const std::string sec = section.local_name();
    const std::string path = "/Digraph/" + sec;
    if (sec == "Models") {
      for (const Node* m : section.children_named("Model")) {
        ModelRef ref;
        if (const Node* devs = m->child("devs"))
          ref.child = devs->trimmed_text();
        else
          ref.child = m->trimmed_text();
        if (const std::string* t = m->attr("type")) ref.type_hint = *t;
        if (const std::string* p = m->attr("platform")) ref.platform_hint = *p;
        if (ref.child.empty()) {
          vs.push_back({codes::EmptyName, path, "Model entry without a name"});
          continue;
        }
        spec.models.push_back(std::move(ref));
      }
    } else if (sec == "Couplings") {
      int i = 0;
      for (const Node& c : section.children) {
        const std::string cn = c.local_name();
        if (cn != "coupling" && cn != "Coupling") continue;
        const std::string at = path + "/" + cn + "[" + std::to_string(++i) + "]";
        const Node* src = c.child("src");
        if (!src) src = c.child("SrcModel");
        const Node* dest = c.child("dest");
        if (!dest) dest = c.child("DestModel");
        const Node* outport = c.child("outport");
        if (!outport) outport = c.child("output");
        const Node* inport = c.child("inport");
        if (!src || !dest || !outport || !inport) {
          vs.push_back({codes::MissingElement, at,
                        "coupling needs src, dest, outport and inport"});
          continue;
        }
        spec.couplings.push_back({src->trimmed_text(), dest->trimmed_text(),
                                  outport->trimmed_text(), inport->trimmed_text()});
      }
    } else if (sec == "Inports") {
      for (const Node* p : section.children_named("inport"))
        spec.inports.push_back(p->trimmed_text());
    } else if (sec == "Outports") {
      for (const Node* p : section.children_named("outport"))
        spec.outports.push_back(p->trimmed_text());
    }
  }
  return spec;
}

}  // namespace

std::string to_string(Dialect d) {
  switch (d) {
    case Dialect::AtomicSchema: return "atomic-schema";
    case Dialect::CoupledSchema: return "coupled-schema";
    case Dialect::AtomicVariant: return "atomic-variant";
    case Dialect::CoupledVariant: return "coupled-variant";
  }
  return "?";
}

AtomicSpec parse_atomic_xml(const Node& doc, Dialect* dialect_out) {
  if (doc.local_name() != "Atomic")
    throw_violations("kind-mismatch",
                     {{codes::KindMismatch, "/" + doc.local_name(),
                       "expected an <Atomic> document"}});
  require_dialect_clean(doc, DocKind::Atomic, dialect_out);

  std::vector<Violation> vs;
  AtomicSpec spec = build_atomic(doc, vs);
  if (has_errors(vs)) throw_violations("invalid-document", std::move(vs));

  // A document that yields a non-deterministic or dangling spec is rejected
  // here; completeness rules (MissingInternalTransition) are left to
  // validate_atomic so that callers can diagnose them as model errors.
  std::vector<Violation> model_vs;
  for (auto& v : validate_atomic(spec))
    if (v.code != codes::MissingInternalTransition && v.is_error())
      model_vs.push_back(std::move(v));
  if (!model_vs.empty()) throw_violations("invalid-document", std::move(model_vs));
  return spec;
}

CoupledSpec parse_coupled_xml(const Node& doc, Dialect* dialect_out) {
  if (doc.local_name() != "Digraph")
    throw_violations("kind-mismatch",
                     {{codes::KindMismatch, "/" + doc.local_name(),
                       "expected a <Digraph> document"}});
  require_dialect_clean(doc, DocKind::Coupled, dialect_out);

  std::vector<Violation> vs;
  CoupledSpec spec = build_coupled(doc, vs);
  if (has_errors(vs)) throw_violations("invalid-document", std::move(vs));

  std::vector<Violation> model_vs;
  for (auto& v : validate_coupled(spec))
    if (v.code == codes::DuplicateChild)  // ambiguous references: unusable
      model_vs.push_back(std::move(v));
  if (!model_vs.empty()) throw_violations("invalid-document", std::move(model_vs));
  return spec;
}

xml::Node emit_atomic_xml(const AtomicSpec& spec) {
  auto vs = validate_atomic(spec);
  if (has_errors(vs)) throw_violations("invalid-spec", std::move(vs));

  Node root;
  root.name = "Atomic";
  root.set_attr("modelName", spec.name);
  root.set_attr("host", spec.host);

  Node& inports = root.add_child("inports");
  for (const auto& p : spec.inports) inports.add_child("inport").set_text(p);

  Node& states = root.add_child("states");
  states.add_child("state").set_text(spec.initial);
  for (const auto& s : spec.states)
    if (s != spec.initial) states.add_child("state").set_text(s);

  Node& outports = root.add_child("outports");
  for (const auto& p : spec.outports) outports.add_child("outport").set_text(p);

  Node& deltint = root.add_child("deltint");
  for (const auto& t : spec.delt_int) {
    Node& it = deltint.add_child("InternalTransition");
    it.set_attr("id", std::to_string(t.id));
    Node& tr = it.add_child("transition");
    tr.add_child("StartState").set_text(t.from);
    tr.add_child("NextState").set_text(t.to);
  }

  // The published schema spells this section "delttext"; reproduced verbatim.
  Node& deltext = root.add_child("delttext");
  for (const auto& t : spec.delt_ext) {
    Node& et = deltext.add_child("ExternalTransition");
    et.set_attr("id", std::to_string(t.id));
    et.add_child("IncomingMessage").set_text(t.message);
    Node& tr = et.add_child("transition");
    tr.add_child("StartState").set_text(t.from);
    tr.add_child("NextState").set_text(t.to);
    et.add_child("ScheduleIndicator").set_text(t.schedule ? "true" : "false");
  }

  Node& ta = root.add_child("timeAdvance");
  for (const auto& e : spec.ta) {
    if (e.timeout.is_infinite()) continue;
    Node& entry = ta.add_child("ta");
    entry.add_child("state").set_text(e.state);
    entry.add_child("timeout").set_text(format_decimal(e.timeout.seconds()));
  }

  Node& lamdas = root.add_child("lamdas");
  for (const auto& l : spec.lambda) {
    Node& entry = lamdas.add_child("lamda");
    entry.add_child("state").set_text(l.state);
    entry.add_child("outport").set_text(l.outport);
    if (l.out_label) entry.add_child("outLabel").set_text(*l.out_label);
  }

  return root;
}

xml::Node emit_coupled_xml(const CoupledSpec& spec) {
  auto vs = validate_coupled(spec);
  if (has_errors(vs)) throw_violations("invalid-spec", std::move(vs));

  Node root;
  root.name = "Digraph";
  if (!spec.name.empty()) root.set_attr("name", spec.name);
  if (!spec.host.empty()) root.set_attr("host", spec.host);

  Node& couplings = root.add_child("Couplings");
  for (const auto& c : spec.couplings) {
    Node& n = couplings.add_child("coupling");
    n.add_child("src").set_text(c.src);
    n.add_child("dest").set_text(c.dest);
    n.add_child("outport").set_text(c.outport);
    n.add_child("inport").set_text(c.inport);
  }

  Node& models = root.add_child("Models");
  for (const auto& m : spec.models) {
    Node& n = models.add_child("Model");
    if (m.type_hint) n.set_attr("type", *m.type_hint);
    if (m.platform_hint) n.set_attr("platform", *m.platform_hint);
    n.set_text(m.child);
  }

  Node& inports = root.add_child("Inports");
  for (const auto& p : spec.inports) inports.add_child("inport").set_text(p);
  Node& outports = root.add_child("Outports");
  for (const auto& p : spec.outports) outports.add_child("outport").set_text(p);

  return root;
}

// ------------------------------------------------------ document validation --

namespace {

void check_section_layout(const Node& root, const std::vector<std::string>& expected,
                          bool enforce_order, const std::string& base,
                          std::vector<Violation>& out) {
  std::vector<std::string> seen;
  for (const Node& c : root.children) {
    const std::string n = c.local_name();
    if (std::find(expected.begin(), expected.end(), n) == expected.end())
      out.push_back({codes::UnexpectedElement, base + "/" + n,
                     "element <" + n + "> does not belong here"});
    else if (std::find(seen.begin(), seen.end(), n) != seen.end())
      out.push_back({codes::UnexpectedElement, base + "/" + n,
                     "section <" + n + "> appears more than once"});
    else
      seen.push_back(n);
  }
  for (const auto& e : expected)
    if (std::find(seen.begin(), seen.end(), e) == seen.end())
      out.push_back({codes::MissingElement, base, "missing section <" + e + ">"});
  if (enforce_order) {
    std::vector<std::size_t> idx;
    for (const auto& s : seen)
      idx.push_back(static_cast<std::size_t>(
          std::find(expected.begin(), expected.end(), s) - expected.begin()));
    if (!std::is_sorted(idx.begin(), idx.end()))
      out.push_back({codes::ElementOrder, base, "sections out of schema order"});
  }
}

void check_child_sequence(const Node& parent, const std::vector<std::string>& expected,
                          const std::string& base, std::vector<Violation>& out) {
  std::vector<std::string> actual;
  for (const Node& c : parent.children) actual.push_back(c.local_name());
  for (const auto& e : expected)
    if (std::find(actual.begin(), actual.end(), e) == actual.end()) {
      out.push_back({codes::MissingElement, base, "missing <" + e + ">"});
      return;
    }
  std::vector<std::string> filtered;
  for (const auto& a : actual)
    if (std::find(expected.begin(), expected.end(), a) != expected.end())
      filtered.push_back(a);
  if (filtered != expected)
    out.push_back({codes::ElementOrder, base, "children out of schema order"});
}

void check_timeout_lexical(const Node& ta_entry, const std::string& at,
                           std::vector<Violation>& out) {
  const Node* timeout = ta_entry.child("timeout");
  if (!timeout) timeout = ta_entry.child("Timeout");
  if (!timeout) return;
  try {
    parse_time(timeout->trimmed_text());
  } catch (const Error&) {
    out.push_back({codes::BadNumber, at,
                   "timeout '" + timeout->trimmed_text() +
                       "' is not a non-negative decimal"});
  }
}

void validate_atomic_document(const Node& doc, Dialect dialect,
                              std::vector<Violation>& out) {
  const bool strict = dialect == Dialect::AtomicSchema;
  const std::string base = "/Atomic";

  if (strict) {
    if (!doc.attr("modelName"))
      out.push_back({codes::MissingAttribute, base, "required attribute 'modelName'"});
    if (!doc.attr("host"))
      out.push_back({codes::MissingAttribute, base, "required attribute 'host'"});
    check_section_layout(doc,
                         {"inports", "states", "outports", "deltint", "delttext",
                          "timeAdvance", "lamdas"},
                         /*enforce_order=*/true, base, out);
  } else {
    for (const Node& c : doc.children) {
      static const std::set<std::string> known = {"inports",  "states", "outports",
                                                  "deltint",  "deltext", "delttext",
                                                  "TimeAdvance", "timeAdvance",
                                                  "LamdaSet", "lamdas"};
      if (!known.count(c.local_name()))
        out.push_back({codes::UnexpectedElement, base + "/" + c.local_name(),
                       "element <" + c.local_name() + "> does not belong here"});
    }
  }

  if (const Node* states = doc.child("states")) {
    if (states->children_named("state").empty())
      out.push_back({codes::MissingElement, base + "/states",
                     "at least one <state> is required"});
  }

  if (const Node* deltint = doc.child("deltint")) {
    int i = 0;
    for (const Node* t : deltint->children_named("InternalTransition")) {
      const std::string at = base + "/deltint/InternalTransition[" + std::to_string(++i) + "]";
      if (strict && !t->attr("id"))
        out.push_back({codes::MissingAttribute, at, "required attribute 'id'"});
      check_child_sequence(*t, {"transition"}, at, out);
      if (const Node* tr = t->child("transition"))
        check_child_sequence(*tr, {"StartState", "NextState"}, at + "/transition", out);
    }
  }

  const Node* deltext = doc.child("delttext");
  if (!deltext) deltext = doc.child("deltext");
  if (deltext) {
    int i = 0;
    for (const Node* t : deltext->children_named("ExternalTransition")) {
      const std::string at =
          base + "/" + deltext->local_name() + "/ExternalTransition[" + std::to_string(++i) + "]";
      if (strict && !t->attr("id"))
        out.push_back({codes::MissingAttribute, at, "required attribute 'id'"});
      if (strict)
        check_child_sequence(*t, {"IncomingMessage", "transition", "ScheduleIndicator"},
                             at, out);
      else
        check_child_sequence(*t, {"IncomingMessage", "transition"}, at, out);
      if (const Node* tr = t->child("transition"))
        check_child_sequence(*tr, {"StartState", "NextState"}, at + "/transition", out);
      if (const Node* si = t->child("ScheduleIndicator")) {
        bool b;
        if (!parse_bool(si->trimmed_text(), b))
          out.push_back({codes::BadBoolean, at + "/ScheduleIndicator",
                         "'" + si->trimmed_text() + "' is not a boolean"});
      }
    }
  }

  const Node* ta = doc.child("timeAdvance");
  if (!ta) ta = doc.child("TimeAdvance");
  if (ta) {
    auto entries = ta->children_named("ta");
    if (strict && entries.empty())
      out.push_back({codes::EmptyTimeAdvance, base + "/timeAdvance",
                     "the schema requires at least one ta entry; all-passive models "
                     "deviate here by design",
                     Violation::Severity::Warning});
    int i = 0;
    for (const Node* e : entries) {
      const std::string at = base + "/timeAdvance/ta[" + std::to_string(++i) + "]";
      check_child_sequence(*e, {"state", strict ? "timeout" : "Timeout"}, at, out);
      check_timeout_lexical(*e, at, out);
    }
  }

  const Node* lamdas = doc.child("lamdas");
  if (!lamdas) lamdas = doc.child("LamdaSet");
  if (lamdas) {
    int i = 0;
    for (const Node* l : lamdas->children_named("lamda")) {
      const std::string at = base + "/lamdas/lamda[" + std::to_string(++i) + "]";
      check_child_sequence(*l, {"state", "outport"}, at, out);
    }
  }
}

void validate_coupled_document(const Node& doc, Dialect dialect,
                               std::vector<Violation>& out) {
  const bool strict = dialect == Dialect::CoupledSchema;
  const std::string base = "/Digraph";

  if (strict) {
    // name and host are declared without use="required": absence is only
    // worth a warning.
    if (!doc.attr("name"))
      out.push_back({codes::MissingAttribute, base, "attribute 'name' is absent",
                     Violation::Severity::Warning});
    if (!doc.attr("host"))
      out.push_back({codes::MissingAttribute, base, "attribute 'host' is absent",
                     Violation::Severity::Warning});
    check_section_layout(doc, {"Couplings", "Models", "Inports", "Outports"},
                         /*enforce_order=*/true, base, out);
  } else {
    for (const Node& c : doc.children) {
      static const std::set<std::string> known = {"Couplings", "Models", "Inports",
                                                  "Outports"};
      if (!known.count(c.local_name()))
        out.push_back({codes::UnexpectedElement, base + "/" + c.local_name(),
                       "element <" + c.local_name() + "> does not belong here"});
    }
  }

  if (const Node* couplings = doc.child("Couplings")) {
    int n = 0, i = 0;
    for (const Node& c : couplings->children) {
      const std::string cn = c.local_name();
      if (cn != "coupling" && cn != "Coupling") continue;
      ++n;
      const std::string at = base + "/Couplings/" + cn + "[" + std::to_string(++i) + "]";
      if (strict)
        check_child_sequence(c, {"src", "dest", "outport", "inport"}, at, out);
      else
        check_child_sequence(c, {"SrcModel", "output", "DestModel", "inport"}, at, out);
    }
    if (strict && n == 0)
      out.push_back({codes::EmptyCouplings, base + "/Couplings",
                     "the schema requires at least one coupling; coupling-free "
                     "wrappers deviate here by design",
                     Violation::Severity::Warning});
  }

  if (const Node* models = doc.child("Models")) {
    auto entries = models->children_named("Model");
    if (entries.empty())
      out.push_back({codes::MissingElement, base + "/Models",
                     "at least one <Model> is required"});
    int i = 0;
    for (const Node* m : entries) {
      const std::string at = base + "/Models/Model[" + std::to_string(++i) + "]";
      std::string name = m->trimmed_text();
      if (const Node* devs = m->child("devs")) name = devs->trimmed_text();
      if (name.empty())
        out.push_back({codes::EmptyName, at, "Model entry without a name"});
    }
  }
}

}  // namespace

std::vector<Violation> validate_document(const Node& doc, DocKind kind) {
  std::vector<Violation> out;
  const std::string root = doc.local_name();
  if (kind == DocKind::Atomic && root != "Atomic") {
    out.push_back({codes::KindMismatch, "/" + root, "expected an <Atomic> document"});
    return out;
  }
  if (kind == DocKind::Coupled && root != "Digraph") {
    out.push_back({codes::KindMismatch, "/" + root, "expected a <Digraph> document"});
    return out;
  }
  Dialect dialect = detect_dialect(doc, kind, &out);
  if (kind == DocKind::Atomic)
    validate_atomic_document(doc, dialect, out);
  else
    validate_coupled_document(doc, dialect, out);
  return out;
}

// -------------------------------------------------------------------- files --

namespace {

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in)
    throw Error("file-not-found", "cannot open '" + file.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

AtomicSpec parse_atomic_file(const std::filesystem::path& file) {
  return parse_atomic_xml(xml::parse(read_file(file), file.string()));
}

CoupledSpec parse_coupled_file(const std::filesystem::path& file) {
  return parse_coupled_xml(xml::parse(read_file(file), file.string()));
}

std::string emit_atomic_string(const AtomicSpec& spec) {
  return xml::serialize(emit_atomic_xml(spec));
}

std::string emit_coupled_string(const CoupledSpec& spec) {
  return xml::serialize(emit_coupled_xml(spec));
}

namespace {

class TreeLoader {
public:
  TreeLoader(std::filesystem::path dir) : dir_(std::move(dir)) {}

  // Re-raises parse failures with the file they came from.
  template <typename F>
  static auto with_context(const std::filesystem::path& file, F&& fn) {
    try {
      return fn();
    } catch (const ParseError& e) {
      throw ParseError(e.code(), file.string() + ": " + e.what(), e.violations);
    }
  }

  void load(const std::filesystem::path& file, const std::string& key) {
    if (registry_.contains(key)) return;
    if (!loading_.insert(key).second)
      throw Error("cycle-detected",
                  "model '" + key + "' is referenced while it is being loaded");

    xml::Node doc = xml::parse(read_file(file), file.string());
    const std::string root = doc.local_name();
    if (root == "Digraph") {
      CoupledSpec spec = with_context(file, [&] { return parse_coupled_xml(doc); });
      fix_name(spec.name, key, file);
      for (const auto& ref : spec.models) {
        const std::filesystem::path child_file = dir_ / (ref.child + ".xml");
        if (!std::filesystem::exists(child_file))
          throw Error("file-not-found",
                      "child '" + ref.child + "' of '" + key + "': no such file '" +
                          child_file.string() + "'");
        load(child_file, ref.child);
      }
      registry_.add(std::move(spec));
    } else if (root == "Atomic") {
      AtomicSpec spec = with_context(file, [&] { return parse_atomic_xml(doc); });
      fix_name(spec.name, key, file);
      registry_.add(std::move(spec));
    } else {
      throw ParseError("kind-mismatch",
                       file.string() + ": root element <" + root +
                           "> is neither Atomic nor Digraph",
                       {{codes::KindMismatch, "/" + root, "unknown document kind"}});
    }
    loading_.erase(key);
  }

  ModelRegistry take() { return std::move(registry_); }

private:
  static void fix_name(std::string& name, const std::string& key,
                       const std::filesystem::path& file) {
    if (name.empty()) {
      name = key;
    } else if (name != key) {
      throw ParseError("name-mismatch",
                       file.string() + ": document names the model '" + name +
                           "' but it is referenced as '" + key + "'",
                       {{codes::NameMismatch, file.string(),
                         "'" + name + "' vs '" + key + "'"}});
    }
  }

  std::filesystem::path dir_;
  ModelRegistry registry_;
  std::set<std::string> loading_;
};

}  // namespace

LoadResult load_model_tree(const std::filesystem::path& root_file,
                           const std::filesystem::path& dir) {
  if (!std::filesystem::exists(root_file))
    throw Error("file-not-found", "cannot open '" + root_file.string() + "'");
  const std::string root_key = root_file.stem().string();
  TreeLoader loader(dir);
  loader.load(root_file, root_key);
  ModelRegistry registry = loader.take();

  auto vs = registry.validate();
  if (has_errors(vs)) {
    std::vector<Violation> errors;
    for (auto& v : vs)
      if (v.is_error()) errors.push_back(std::move(v));
    std::string msg = "model tree under '" + root_file.string() + "' does not validate";
    throw ParseError("validation-failed", msg, std::move(errors));
  }
  return {std::move(registry), root_key};
}

}  // namespace xfd::devs_xml

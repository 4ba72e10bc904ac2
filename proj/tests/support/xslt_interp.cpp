#include "xslt_interp.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace xfd::testsupport {

namespace {

using xfd::xml::Node;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") + 1 - b);
}

[[noreturn]] void unsupported(const std::string& what) {
  throw std::runtime_error("xslt subset: unsupported construct: " + what);
}

struct Template {
  std::string match;  // "/scxml" or an element name
  std::string mode;
  const Node* body;
};

class Interpreter {
public:
  Interpreter(const Node& stylesheet, const Node& input) : input_(input) {
    index_parents(input_, nullptr);
    for (const Node& child : stylesheet.children) {
      if (child.local_name() != "template") continue;
      Template t;
      if (const std::string* m = child.attr("match")) t.match = *m;
      if (const std::string* m = child.attr("mode")) t.mode = *m;
      t.body = &child;
      templates_.push_back(t);
    }
  }

  Node run() {
    const Template* root_tpl = nullptr;
    for (const auto& t : templates_)
      if (!t.match.empty() && t.match[0] == '/') root_tpl = &t;
    if (!root_tpl) unsupported("no root template");
    const std::string expected = root_tpl->match.substr(1);
    if (input_.local_name() != expected)
      throw std::runtime_error("input does not match " + root_tpl->match);

    Node holder;
    holder.name = "#result";
    Vars vars;
    instantiate(*root_tpl->body, &input_, vars, holder);
    if (holder.children.size() != 1)
      throw std::runtime_error("expected exactly one result element");
    return holder.children.front();
  }

private:
  using Vars = std::map<std::string, std::string>;

  void index_parents(const Node& n, const Node* parent) {
    parents_[&n] = parent;
    for (const Node& c : n.children) index_parents(c, &n);
  }

  const Node* parent_of(const Node* n) const {
    auto it = parents_.find(n);
    return it == parents_.end() ? nullptr : it->second;
  }

  // ------------------------------------------------------------- XPath-ish

  static bool is_var_ref(const std::string& s) { return !s.empty() && s[0] == '$'; }

  std::string string_value(const std::string& expr, const Node* current,
                           const Vars& vars) const {
    std::string e = trim(expr);
    if (is_var_ref(e)) {
      auto it = vars.find(e.substr(1));
      if (it == vars.end()) unsupported("unbound variable " + e);
      return it->second;
    }
    const Node* ctx = current;
    while (e.rfind("../", 0) == 0) {
      ctx = ctx ? parent_of(ctx) : nullptr;
      e = e.substr(3);
    }
    if (e.rfind('@', 0) == 0) {
      if (!ctx) return "";
      const std::string* v = ctx->attr(e.substr(1));
      return v ? *v : "";
    }
    unsupported("string expression " + expr);
  }

  // Predicates: "@a=$v", "count(@a)>0".
  bool eval_predicate(const std::string& pred, const Node* node, const Vars& vars) const {
    std::string p = trim(pred);
    if (p.rfind("count(", 0) == 0) {
      const auto close = p.find(')');
      const std::string inner = trim(p.substr(6, close - 6));
      const std::string rest = trim(p.substr(close + 1));
      if (inner.rfind('@', 0) != 0) unsupported("count over " + inner);
      const bool has = node->attr(inner.substr(1)) != nullptr;
      if (rest == ">0") return has;
      if (rest == "=0") return !has;
      unsupported("count comparison " + rest);
    }
    const auto eq = p.find('=');
    if (eq == std::string::npos) unsupported("predicate " + p);
    const std::string lhs = trim(p.substr(0, eq));
    const std::string rhs = trim(p.substr(eq + 1));
    if (lhs.rfind('@', 0) != 0) unsupported("predicate lhs " + lhs);
    const std::string* v = node->attr(lhs.substr(1));
    if (!v) return false;
    if (is_var_ref(rhs)) {
      auto it = vars.find(rhs.substr(1));
      return it != vars.end() && *v == it->second;
    }
    if (rhs.size() >= 2 && (rhs.front() == '\'' || rhs.front() == '"'))
      return *v == rhs.substr(1, rhs.size() - 2);
    unsupported("predicate rhs " + rhs);
  }

  // Node-sets: "//name" and "//name[pred]", in document order.
  std::vector<const Node*> node_set(const std::string& expr, const Vars& vars) const {
    std::string e = trim(expr);
    if (e.rfind("//", 0) != 0) unsupported("node-set " + e);
    e = e.substr(2);
    std::string pred;
    const auto bracket = e.find('[');
    if (bracket != std::string::npos) {
      pred = e.substr(bracket + 1, e.rfind(']') - bracket - 1);
      e = e.substr(0, bracket);
    }
    std::vector<const Node*> out;
    walk(input_, e, pred, vars, out);
    return out;
  }

  void walk(const Node& n, const std::string& name, const std::string& pred,
            const Vars& vars, std::vector<const Node*>& out) const {
    for (const Node& c : n.children) {
      if (c.local_name() == name && (pred.empty() || eval_predicate(pred, &c, vars)))
        out.push_back(&c);
      walk(c, name, pred, vars, out);
    }
  }

  bool eval_test(const std::string& test, const Vars& vars) const {
    std::string t = trim(test);
    if (t.rfind("count(", 0) != 0) unsupported("test " + t);
    const auto close = t.rfind(')');
    const std::string inner = t.substr(6, close - 6);
    const std::string rest = trim(t.substr(close + 1));
    const auto n = node_set(inner, vars).size();
    if (rest == ">0") return n > 0;
    if (rest == "=0") return n == 0;
    unsupported("test comparison " + rest);
  }

  // ---------------------------------------------------------- instantiation

  const Template* find_template(const Node* node, const std::string& mode) const {
    for (const auto& t : templates_)
      if (t.mode == mode && t.match == node->local_name()) return &t;
    return nullptr;
  }

  void apply(const std::string& select, const std::string& mode, const Vars& vars,
             Node& out) {
    for (const Node* n : node_set(select, vars)) {
      const Template* t = find_template(n, mode);
      if (!t) continue;  // built-in rules produce nothing we need here
      Vars fresh;
      instantiate(*t->body, n, fresh, out);
    }
  }

  void instantiate(const Node& body, const Node* current, Vars& vars, Node& out) {
    for (const Node& child : body.children) {
      const std::string name = child.name;
      if (name == "xsl:variable") {
        const std::string* var_name = child.attr("name");
        const std::string* select = child.attr("select");
        if (!var_name || !select) unsupported("variable without name/select");
        vars[*var_name] = string_value(*select, current, vars);
      } else if (name == "xsl:value-of") {
        const std::string* select = child.attr("select");
        if (!select) unsupported("value-of without select");
        out.text += string_value(*select, current, vars);
      } else if (name == "xsl:if") {
        const std::string* test = child.attr("test");
        if (!test) unsupported("if without test");
        if (eval_test(*test, vars)) instantiate(child, current, vars, out);
      } else if (name == "xsl:apply-templates") {
        const std::string* select = child.attr("select");
        if (!select) unsupported("apply-templates without select");
        std::string mode;
        if (const std::string* m = child.attr("mode")) mode = *m;
        apply(*select, mode, vars, out);
      } else if (name == "xsl:output" || name == "xsl:text") {
        if (name == "xsl:text") out.text += child.text;
      } else if (name.rfind("xsl:", 0) == 0) {
        unsupported(name);
      } else {
        // Literal result element.
        Node& el = out.add_child(name);
        for (const auto& [k, v] : child.attrs)
          if (k.rfind("xmlns", 0) != 0) el.set_attr(k, v);
        const std::string text = trim(child.text);
        if (!text.empty()) el.text = text;
        Vars scoped = vars;
        instantiate(child, current, scoped, el);
      }
    }
  }

  const Node& input_;
  std::vector<Template> templates_;
  std::map<const Node*, const Node*> parents_;
};

}  // namespace

xfd::xml::Node run_xslt(const Node& stylesheet, const Node& input) {
  return Interpreter(stylesheet, input).run();
}

}  // namespace xfd::testsupport

#ifndef XFD_XML_DOM_HPP
#define XFD_XML_DOM_HPP

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xfd/error.hpp"
#include "xfd/violation.hpp"

namespace xfd::xml {

/// Element tree with ordered attributes and element children. Character data
/// directly inside an element is concatenated into `text`; this covers the
/// dialects handled here (leaf text or element children, never mixed).
struct Node {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<Node> children;
  std::string text;
  int line = 0;

  /// Attribute value, matched on the full qualified name; nullptr if absent.
  const std::string* attr(std::string_view key) const;
  /// First child whose local name (namespace prefix stripped) matches.
  const Node* child(std::string_view local) const;
  std::vector<const Node*> children_named(std::string_view local) const;
  /// Name with any namespace prefix stripped.
  std::string local_name() const;
  /// Text with surrounding whitespace removed.
  std::string trimmed_text() const;

  Node& add_child(std::string child_name);
  Node& set_attr(std::string key, std::string value);
  Node& set_text(std::string t);
};

/// Thrown on unparseable input and on documents that break the structural
/// rules of a dialect; carries the individual findings.
class ParseError : public Error {
public:
  ParseError(std::string code, const std::string& message, std::vector<Violation> vs = {})
      : Error(std::move(code), message), violations(std::move(vs)) {}

  std::vector<Violation> violations;
};

/// Parses one well-formed XML document (UTF-8); returns the root element.
/// Supports declarations, comments, PIs, CDATA, the five predefined
/// entities and numeric character references. Throws ParseError
/// (MalformedXml) otherwise.
Node parse(std::string_view input, const std::string& origin = "");

/// Deterministic serialization: two-space indentation, attributes in stored
/// order, leaf text inline, XML declaration on top.
std::string serialize(const Node& root);

/// Structural equality: local names, attribute sets (order-insensitive) and
/// child sequences match, text compared after trimming.
bool equal(const Node& a, const Node& b);

std::string escape_text(std::string_view s);
std::string escape_attr(std::string_view s);

}  // namespace xfd::xml

#endif

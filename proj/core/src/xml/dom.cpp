#include "xfd/xml/dom.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace xfd::xml {

namespace {

std::string strip_prefix(const std::string& name) {
  auto pos = name.find(':');
  return pos == std::string::npos ? name : name.substr(pos + 1);
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n") + 1;
  return s.substr(b, e - b);
}

class Parser {
public:
  Parser(std::string_view in, std::string origin)
      : in_(in), origin_(std::move(origin)) {}

  Node run() {
    skip_prolog();
    Node root = element();
    skip_misc();
    if (pos_ != in_.size()) fail("trailing content after the document element");
    return root;
  }

private:
  std::string_view in_;
  std::string origin_;
  std::size_t pos_ = 0;
  int line_ = 1;

  [[noreturn]] void fail(const std::string& msg) {
    std::string where = origin_.empty() ? "" : origin_ + ":";
    where += "line " + std::to_string(line_);
    throw ParseError("malformed-xml", where + ": " + msg,
                     {{codes::MalformedXml, where, msg}});
  }

  bool eof() const { return pos_ >= in_.size(); }
  char peek() const { return in_[pos_]; }

  char get() {
    char c = in_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  bool starts_with(std::string_view s) const {
    return in_.compare(pos_, s.size(), s) == 0;
  }

  void expect(std::string_view s) {
    if (!starts_with(s)) fail("expected '" + std::string(s) + "'");
    for (std::size_t i = 0; i < s.size(); ++i) get();
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) get();
  }

  void skip_until(std::string_view terminator) {
    auto found = in_.find(terminator, pos_);
    if (found == std::string_view::npos) fail("unterminated construct");
    while (pos_ < found) get();
    expect(terminator);
  }

  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts_with("<!--")) {
        expect("<!--");
        skip_until("-->");
      } else if (starts_with("<?")) {
        expect("<?");
        skip_until("?>");
      } else {
        return;
      }
    }
  }

  void skip_prolog() {
    skip_ws();
    if (starts_with("<?xml")) {
      expect("<?xml");
      skip_until("?>");
    }
    for (;;) {
      skip_misc();
      if (starts_with("<!DOCTYPE")) {
        expect("<!DOCTYPE");
        skip_until(">");  // internal subsets are out of scope
      } else {
        return;
      }
    }
  }

  std::string name_token() {
    std::size_t start = pos_;
    while (!eof()) {
      char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
          c == '.' || c == ':')
        get();
      else
        break;
    }
    if (pos_ == start) fail("expected a name");
    return std::string(in_.substr(start, pos_ - start));
  }

  std::string decode_entities(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != '&') {
        out += raw[i];
        continue;
      }
      auto semi = raw.find(';', i);
      if (semi == std::string_view::npos) fail("unterminated entity reference");
      std::string_view ent = raw.substr(i + 1, semi - i - 1);
      if (ent == "lt") out += '<';
      else if (ent == "gt") out += '>';
      else if (ent == "amp") out += '&';
      else if (ent == "quot") out += '"';
      else if (ent == "apos") out += '\'';
      else if (!ent.empty() && ent[0] == '#') {
        long code = 0;
        try {
          code = (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X'))
                     ? std::stol(std::string(ent.substr(2)), nullptr, 16)
                     : std::stol(std::string(ent.substr(1)));
        } catch (...) {
          fail("bad character reference '&" + std::string(ent) + ";'");
        }
        append_utf8(out, code);
      } else {
        fail("unknown entity '&" + std::string(ent) + ";'");
      }
      i = semi;
    }
    return out;
  }

  static void append_utf8(std::string& out, long cp) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  Node element() {
    expect("<");
    Node node;
    node.line = line_;
    node.name = name_token();
    for (;;) {
      skip_ws();
      if (eof()) fail("unterminated start tag");
      if (starts_with("/>")) {
        expect("/>");
        return node;
      }
      if (starts_with(">")) {
        expect(">");
        content(node);
        return node;
      }
      std::string key = name_token();
      skip_ws();
      expect("=");
      skip_ws();
      char quote = peek();
      if (quote != '"' && quote != '\'') fail("attribute value must be quoted");
      get();
      std::size_t start = pos_;
      while (!eof() && peek() != quote) {
        if (peek() == '<') fail("'<' in attribute value");
        get();
      }
      if (eof()) fail("unterminated attribute value");
      std::string value = decode_entities(in_.substr(start, pos_ - start));
      get();  // closing quote
      node.attrs.emplace_back(std::move(key), std::move(value));
    }
  }

  void content(Node& node) {
    std::string pending;  // raw character data awaiting entity decoding
    auto flush = [&] {
      node.text += decode_entities(pending);
      pending.clear();
    };
    for (;;) {
      if (eof()) fail("unterminated element <" + node.name + ">");
      if (starts_with("</")) {
        expect("</");
        std::string closing = name_token();
        if (closing != node.name)
          fail("mismatched close tag </" + closing + "> for <" + node.name + ">");
        skip_ws();
        expect(">");
        flush();
        return;
      }
      if (starts_with("<!--")) {
        expect("<!--");
        skip_until("-->");
      } else if (starts_with("<![CDATA[")) {
        expect("<![CDATA[");
        auto end = in_.find("]]>", pos_);
        if (end == std::string_view::npos) fail("unterminated CDATA");
        // CDATA is literal: bypass entity decoding.
        flush();
        node.text += std::string(in_.substr(pos_, end - pos_));
        while (pos_ < end) get();
        expect("]]>");
      } else if (starts_with("<?")) {
        expect("<?");
        skip_until("?>");
      } else if (starts_with("<")) {
        node.children.push_back(element());
      } else {
        pending += get();
      }
    }
  }
};

void write_node(const Node& n, std::string& out, int depth) {
  std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  out += pad;
  out += '<' + n.name;
  for (const auto& [k, v] : n.attrs) out += ' ' + k + "=\"" + escape_attr(v) + '"';
  const std::string body = trim(n.text);
  if (n.children.empty() && body.empty()) {
    out += "/>\n";
    return;
  }
  out += '>';
  if (n.children.empty()) {
    out += escape_text(body) + "</" + n.name + ">\n";
    return;
  }
  out += '\n';
  for (const Node& c : n.children) write_node(c, out, depth + 1);
  out += pad + "</" + n.name + ">\n";
}

}  // namespace

const std::string* Node::attr(std::string_view key) const {
  for (const auto& [k, v] : attrs)
    if (k == key) return &v;
  return nullptr;
}

const Node* Node::child(std::string_view local) const {
  for (const Node& c : children)
    if (c.local_name() == local) return &c;
  return nullptr;
}

std::vector<const Node*> Node::children_named(std::string_view local) const {
  std::vector<const Node*> out;
  for (const Node& c : children)
    if (c.local_name() == local) out.push_back(&c);
  return out;
}

std::string Node::local_name() const { return strip_prefix(name); }

std::string Node::trimmed_text() const { return trim(text); }

Node& Node::add_child(std::string child_name) {
  children.push_back(Node{});
  children.back().name = std::move(child_name);
  return children.back();
}

Node& Node::set_attr(std::string key, std::string value) {
  attrs.emplace_back(std::move(key), std::move(value));
  return *this;
}

Node& Node::set_text(std::string t) {
  text = std::move(t);
  return *this;
}

Node parse(std::string_view input, const std::string& origin) {
  return Parser(input, origin).run();
}

std::string serialize(const Node& root) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  write_node(root, out, 0);
  return out;
}

bool equal(const Node& a, const Node& b) {
  if (a.local_name() != b.local_name()) return false;
  if (a.trimmed_text() != b.trimmed_text()) return false;
  if (a.attrs.size() != b.attrs.size()) return false;
  auto sorted = [](const Node& n) {
    auto v = n.attrs;
    std::sort(v.begin(), v.end());
    return v;
  };
  if (sorted(a) != sorted(b)) return false;
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!equal(a.children[i], b.children[i])) return false;
  return true;
}

std::string escape_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string escape_attr(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      case '\n': out += "&#10;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace xfd::xml

#pragma once

#include <cctype>
#include <string>

namespace cdyn::dot {

// Recursive-descent check of a DOT subset:
//   graph     := ["strict"] ("graph"|"digraph") [id] "{" stmt* "}"
//   stmt      := (node_stmt | edge_stmt | attr_stmt | id "=" id) [";"]
//   node_stmt := id [attrs]
//   edge_stmt := id (edgeop id)+ [attrs]
//   attr_stmt := ("graph"|"node"|"edge") attrs
//   attrs     := "[" (id "=" id [","|";"])* "]"
//   id        := identifier | numeral | quoted string
class Checker {
 public:
  explicit Checker(const std::string& s) : s_(s) {}

  bool valid() {
    try {
      graph();
      ws();
      return p_ == s_.size();
    } catch (const Bad&) {
      return false;
    }
  }

 private:
  struct Bad {};

  void ws() {
    while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
  }
  bool eat(const std::string& t) {
    ws();
    if (s_.compare(p_, t.size(), t) != 0) return false;
    p_ += t.size();
    return true;
  }
  void need(const std::string& t) {
    if (!eat(t)) throw Bad{};
  }
  bool id(std::string* out = nullptr) {
    ws();
    const std::size_t b = p_;
    if (p_ < s_.size() && s_[p_] == '"') {
      for (++p_; p_ < s_.size() && s_[p_] != '"'; ++p_)
        if (s_[p_] == '\\') ++p_;
      if (p_ >= s_.size()) throw Bad{};
      ++p_;
    } else if (p_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[p_])) || s_[p_] == '_')) {
      while (p_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[p_])) || s_[p_] == '_')) ++p_;
    } else if (p_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[p_])) || s_[p_] == '-' || s_[p_] == '.')) {
      if (s_[p_] == '-' && p_ + 1 < s_.size() && (s_[p_ + 1] == '>' || s_[p_ + 1] == '-')) return false;
      ++p_;
      while (p_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[p_])) || s_[p_] == '.')) ++p_;
    } else {
      return false;
    }
    if (out) *out = s_.substr(b, p_ - b);
    return true;
  }
  void attrs() {
    while (eat("[")) {
      while (!eat("]")) {
        if (!id()) throw Bad{};
        need("=");
        if (!id()) throw Bad{};
        if (!eat(",")) eat(";");
      }
    }
  }
  void graph() {
    eat("strict");
    if (eat("digraph"))
      directed_ = true;
    else
      need("graph");
    ws();
    if (p_ < s_.size() && s_[p_] != '{') id();
    need("{");
    while (!eat("}")) {
      std::string head;
      if (!id(&head)) throw Bad{};
      if (head == "graph" || head == "node" || head == "edge") {
        attrs();
      } else if (eat("=")) {
        if (!id()) throw Bad{};
      } else {
        const std::string op = directed_ ? "->" : "--";
        while (eat(op))
          if (!id()) throw Bad{};
        attrs();
      }
      eat(";");
      if (p_ >= s_.size()) throw Bad{};
    }
  }

  const std::string& s_;
  std::size_t p_ = 0;
  bool directed_ = false;
};

inline bool valid(const std::string& text) { return Checker(text).valid(); }

}  // namespace cdyn::dot

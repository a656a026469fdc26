#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cantordyn/synth.hpp"
#include "cantordyn/topology.hpp"

namespace cdyn {

inline constexpr int kFormatVersion = 1;

struct ParseError : std::invalid_argument {
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : std::invalid_argument(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line(line),
        column(column),
        detail(msg) {}
  std::size_t line, column;
  std::string detail;
};

// kind plus ordered fields; keys may repeat
struct Document {
  std::string kind;
  std::vector<std::pair<std::string, std::string>> fields;

  void add(std::string key, std::string value) { fields.emplace_back(std::move(key), std::move(value)); }
  std::optional<std::string> get(const std::string& key) const;
  std::string require(const std::string& key) const;
  std::vector<std::string> all(const std::string& key) const;
  bool operator==(const Document& o) const { return kind == o.kind && fields == o.fields; }
};

// full documents start with "cdyn <version> <kind>"; one-line shorthands such as
// "clopen dyadic {0,10}" are accepted too. Typed kinds are validated on parse.
Document parse_document(const std::string& text);
std::string print_document(const Document& d);
std::string document_to_json(const Document& d);

Signature parse_signature(const std::string& text);
// rejects non-canonical word lists
ClopenSet parse_clopen(const Signature& sig, const std::string& text);
// "{0},{1}" or "[{0},{1}]"
std::vector<ClopenSet> parse_clopen_list(const Signature& sig, const std::string& text);
std::string print_clopen_list(const std::vector<ClopenSet>& sets);
Measure parse_measure(const Signature& sig, const std::string& text);
std::string print_measure(const Measure& mu);
Homeo parse_homeo(const Signature& sig, const std::string& text);
std::string print_homeo(const Homeo& h);

Document to_document(const Signature& sig);
Document to_document(const ClopenSet& a);
Document to_document(const Measure& mu);
Document to_document(const Homeo& h);
Document to_document(const Neighborhood& n);
Document to_document(const Castle& c, std::size_t n, const Rational& eps);

Signature signature_from(const Document& d);
ClopenSet clopen_from(const Document& d);
Measure measure_from(const Document& d);
Homeo homeo_from(const Document& d);
Neighborhood neighborhood_from(const Document& d);

// named shorthands: id, swap, dissipative, odometer[:sig[:k]], truncation:sig:t[:k]
std::optional<Homeo> named_homeo(const std::string& name);

}  // namespace cdyn

#include "momentfix/sequences.hpp"

#include <istream>
#include <ostream>

namespace momentfix {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

RealPrefix to_real(const RationalPrefix& x, Precision bits) {
  std::vector<HPReal> terms;
  terms.reserve(x.size());
  for (const auto& t : x) terms.emplace_back(t, bits);
  return RealPrefix(std::move(terms));
}

std::vector<std::string> read_term_tokens(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    tokens.emplace_back(t);
  }
  return tokens;
}

RationalPrefix parse_rational_prefix(const std::vector<std::string>& tokens) {
  std::vector<ExactRational> terms;
  terms.reserve(tokens.size());
  for (const auto& tok : tokens) terms.push_back(ExactRational::parse(tok));
  return RationalPrefix(std::move(terms));
}

RealPrefix parse_real_prefix(const std::vector<std::string>& tokens, Precision bits) {
  std::vector<HPReal> terms;
  terms.reserve(tokens.size());
  for (const auto& tok : tokens) terms.push_back(HPReal::parse(tok, bits));
  return RealPrefix(std::move(terms));
}

void write_prefix(std::ostream& out, const RationalPrefix& x) {
  for (const auto& t : x) out << t.to_string() << '\n';
}

void write_prefix(std::ostream& out, const RealPrefix& x) {
  for (const auto& t : x) out << t.to_string() << '\n';
}

}  // namespace momentfix

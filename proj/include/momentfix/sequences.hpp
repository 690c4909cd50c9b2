#ifndef MOMENTFIX_SEQUENCES_HPP
#define MOMENTFIX_SEQUENCES_HPP

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "momentfix/numerics.hpp"

namespace momentfix {

/// `value` as a scalar of the same kind (and precision) as `like`.
inline HPReal constant_like(long value, const HPReal& like) { return HPReal(value, like.precision()); }
inline ExactRational constant_like(long value, const ExactRational&) { return ExactRational(value); }

template <class Scalar>
bool in_unit_interval(const Scalar& x) {
  return x.sign() >= 0 && x <= constant_like(1, x);
}

/// Finite prefix (x_1, ..., x_N) of a sequence in [0,1]^N.
///
/// Terms are stored 0-based but addressed 1-based through term(n), matching
/// the usual indexing of the sequences. The tail beyond N is unobserved; any
/// quantity that depends on it is reported as an interval.
template <class Scalar>
class SeqPrefix {
 public:
  using value_type = Scalar;

  explicit SeqPrefix(std::vector<Scalar> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw std::invalid_argument("SeqPrefix: length must be >= 1");
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (!in_unit_interval(terms_[i])) {
        throw std::domain_error("SeqPrefix: term " + std::to_string(i + 1) + " outside [0,1]");
      }
    }
  }

  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  /// 1-based access.
  [[nodiscard]] const Scalar& term(std::size_t n) const { return terms_.at(n - 1); }
  [[nodiscard]] const std::vector<Scalar>& terms() const { return terms_; }
  [[nodiscard]] auto begin() const { return terms_.begin(); }
  [[nodiscard]] auto end() const { return terms_.end(); }

  friend bool operator==(const SeqPrefix&, const SeqPrefix&) = default;

 private:
  std::vector<Scalar> terms_;
};

using RealPrefix = SeqPrefix<HPReal>;
using RationalPrefix = SeqPrefix<ExactRational>;

/// Interval [lo, hi] containing d(a, b) = sum 2^-n |a_n - b_n| for every pair
/// of infinite sequences extending the two prefixes.
template <class Scalar>
struct MetricValue {
  Scalar lo;
  Scalar hi;
  std::size_t prefix_length;
};

RealPrefix to_real(const RationalPrefix& x, Precision bits);

/// (a, a^2, ..., a^N); throws std::domain_error unless 0 <= a <= 1.
template <class Scalar>
SeqPrefix<Scalar> geometric(const Scalar& a, std::size_t n_terms) {
  if (!in_unit_interval(a)) throw std::domain_error("geometric: a must lie in [0,1]");
  if (n_terms == 0) throw std::invalid_argument("geometric: n_terms must be >= 1");
  std::vector<Scalar> terms;
  terms.reserve(n_terms);
  Scalar power = a;
  for (std::size_t n = 1; n <= n_terms; ++n) {
    terms.push_back(power);
    power *= a;
  }
  return SeqPrefix<Scalar>(std::move(terms));
}

/// y_n = 1 / (1 + x_1 + ... + x_n). Partial sums run left to right at the
/// terms' own precision.
template <class Scalar>
SeqPrefix<Scalar> transform(const SeqPrefix<Scalar>& x) {
  std::vector<Scalar> out;
  out.reserve(x.size());
  Scalar partial = constant_like(1, x.term(1));
  for (const Scalar& xn : x) {
    partial += xn;
    out.push_back(constant_like(1, partial) / partial);
  }
  return SeqPrefix<Scalar>(std::move(out));
}

/// lo = sum_{n<=N} 2^-n |a_n - b_n|, hi = lo + 2^-N (clamped to 1).
/// Throws std::invalid_argument on unequal lengths.
template <class Scalar>
MetricValue<Scalar> metric(const SeqPrefix<Scalar>& a, const SeqPrefix<Scalar>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("metric: prefix lengths differ (" + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
  Scalar lo = constant_like(0, a.term(1) + b.term(1));
  for (std::size_t n = 1; n <= a.size(); ++n) {
    lo += ldexp(abs(a.term(n) - b.term(n)), -static_cast<long>(n));
  }
  const Scalar one = constant_like(1, lo);
  Scalar hi = lo + ldexp(one, -static_cast<long>(a.size()));
  if (hi > one) hi = one;
  return {std::move(lo), std::move(hi), a.size()};
}

/// Closed form (1 - a) / (1 - a^(n+1)) of T(a, a^2, ...)_n, for 0 <= a < 1.
template <class Scalar>
Scalar geometric_image_term(const Scalar& a, std::size_t n) {
  if (n == 0) throw std::invalid_argument("geometric_image_term: n must be >= 1");
  if (a.sign() < 0 || a >= constant_like(1, a)) {
    throw std::domain_error("geometric_image_term: a must lie in [0,1)");
  }
  const Scalar one = constant_like(1, a);
  return (one - a) / (one - pow(a, static_cast<unsigned long>(n + 1)));
}

// Plain-text prefix format: one term per line, decimal or "p/q"; blank lines
// and lines starting with '#' are skipped.

/// Raw term tokens from a text stream.
std::vector<std::string> read_term_tokens(std::istream& in);
RationalPrefix parse_rational_prefix(const std::vector<std::string>& tokens);
RealPrefix parse_real_prefix(const std::vector<std::string>& tokens, Precision bits);

void write_prefix(std::ostream& out, const RationalPrefix& x);
/// Terms are written with decimal_digits_for(precision) digits.
void write_prefix(std::ostream& out, const RealPrefix& x);

}  // namespace momentfix

#endif  // MOMENTFIX_SEQUENCES_HPP

#ifndef MOMENTFIX_MOMENTS_HPP
#define MOMENTFIX_MOMENTS_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "momentfix/numerics.hpp"
#include "momentfix/sequences.hpp"

namespace momentfix {

template <class Scalar>
inline constexpr bool kIsExact = std::is_same_v<Scalar, ExactRational>;

template <class Scalar>
struct Atom {
  Scalar position;
  Scalar weight;
};

/// Probability measure sum_i w_i delta_{t_i} on [0,1].
///
/// Rational measures must sum to 1 exactly; real ones to within
/// 2^(-precision/2) of the weight sum.
template <class Scalar>
class DiscreteMeasure {
 public:
  explicit DiscreteMeasure(std::vector<Atom<Scalar>> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw std::invalid_argument("DiscreteMeasure: no atoms");
    Scalar total = constant_like(0, atoms_.front().weight);
    for (const auto& atom : atoms_) {
      if (!in_unit_interval(atom.position)) throw std::domain_error("DiscreteMeasure: atom outside [0,1]");
      if (atom.weight.sign() <= 0) throw std::domain_error("DiscreteMeasure: weights must be positive");
      total += atom.weight;
    }
    if constexpr (kIsExact<Scalar>) {
      if (total != ExactRational(1)) throw std::domain_error("DiscreteMeasure: weights do not sum to 1");
    } else {
      const HPReal slack = exp2i(-static_cast<long>(total.precision() / 2), total.precision());
      if (abs(total - 1L) > slack) throw std::domain_error("DiscreteMeasure: weights do not sum to 1");
    }
  }

  static DiscreteMeasure dirac(const Scalar& position) {
    return DiscreteMeasure({{position, constant_like(1, position)}});
  }

  [[nodiscard]] const std::vector<Atom<Scalar>>& atoms() const { return atoms_; }

  /// True when all mass sits at `position`.
  [[nodiscard]] bool is_dirac_at(long position) const {
    for (const auto& atom : atoms_) {
      if (!(atom.position == constant_like(position, atom.position))) return false;
    }
    return true;
  }

 private:
  std::vector<Atom<Scalar>> atoms_;
};

/// Normalized moment sequence (a_1, ..., a_N) with the implicit a_0 = 1.
template <class Scalar>
class MomentSeq {
 public:
  MomentSeq(SeqPrefix<Scalar> terms, std::string provenance)
      : terms_(std::move(terms)), provenance_(std::move(provenance)) {
    for (std::size_t n = 2; n <= terms_.size(); ++n) {
      if (terms_.term(n) > terms_.term(n - 1)) throw std::domain_error("MomentSeq: terms must be non-increasing");
    }
  }

  [[nodiscard]] Scalar a0() const { return constant_like(1, terms_.term(1)); }
  [[nodiscard]] const SeqPrefix<Scalar>& terms() const { return terms_; }
  [[nodiscard]] const std::string& provenance() const { return provenance_; }
  /// (a_0, a_1, ..., a_N)
  [[nodiscard]] std::vector<Scalar> with_zeroth() const {
    std::vector<Scalar> v;
    v.reserve(terms_.size() + 1);
    v.push_back(a0());
    v.insert(v.end(), terms_.begin(), terms_.end());
    return v;
  }

 private:
  SeqPrefix<Scalar> terms_;
  std::string provenance_;
};

/// a_n = sum_i w_i t_i^n for n = 1..N; exact for rational atoms.
template <class Scalar>
MomentSeq<Scalar> moments_from_measure(const DiscreteMeasure<Scalar>& mu, std::size_t n_terms,
                                       std::string provenance = "discrete measure") {
  if (n_terms == 0) throw std::invalid_argument("moments_from_measure: n_terms must be >= 1");
  const Scalar zero = constant_like(0, mu.atoms().front().weight);
  std::vector<Scalar> moments(n_terms, zero);
  for (const auto& atom : mu.atoms()) {
    Scalar power = atom.position;
    for (std::size_t n = 0; n < n_terms; ++n) {
      moments[n] += atom.weight * power;
      power *= atom.position;
    }
  }
  // Weighted sums of values in [0,1] can overshoot 1 by an ulp in floating point.
  if constexpr (!kIsExact<Scalar>) {
    for (auto& m : moments) {
      if (m > 1L) m = constant_like(1, m);
      if (m.sign() < 0) m = constant_like(0, m);
    }
  }
  return MomentSeq<Scalar>(SeqPrefix<Scalar>(std::move(moments)), std::move(provenance));
}

/// Triangular table D[m][n] = sum_k (-1)^k C(m,k) a_{n+k}, m + n <= depth,
/// built with D[m][n] = D[m-1][n] - D[m-1][n+1].
template <class Scalar>
class DiffTable {
 public:
  /// `values` holds a_0, a_1, ...; at least depth + 1 of them are used.
  DiffTable(const std::vector<Scalar>& values, std::size_t depth) : depth_(depth) {
    if (values.size() < depth + 1) throw std::invalid_argument("DiffTable: not enough terms for depth");
    rows_.reserve(depth + 1);
    rows_.emplace_back(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(depth + 1));
    for (std::size_t m = 1; m <= depth; ++m) {
      const auto& prev = rows_.back();
      std::vector<Scalar> row;
      row.reserve(depth - m + 1);
      for (std::size_t n = 0; n + m <= depth; ++n) row.push_back(prev[n] - prev[n + 1]);
      rows_.push_back(std::move(row));
    }
  }

  [[nodiscard]] std::size_t depth() const { return depth_; }
  [[nodiscard]] static constexpr bool exact() { return kIsExact<Scalar>; }
  [[nodiscard]] const Scalar& at(std::size_t m, std::size_t n) const { return rows_.at(m).at(n); }
  /// Row m holds D[m][0], ..., D[m][depth - m].
  [[nodiscard]] const std::vector<Scalar>& row(std::size_t m) const { return rows_.at(m); }

 private:
  std::size_t depth_;
  std::vector<std::vector<Scalar>> rows_;
};

enum class CMVerdict { certified, refuted, inconclusive };

std::string_view to_string(CMVerdict verdict);

template <class Scalar>
struct CMResult {
  CMVerdict verdict;
  DiffTable<Scalar> table;
  struct Worst {
    std::size_t m;
    std::size_t n;
    Scalar value;
  } worst;
};

/// Complete-monotonicity check of (a_0, a_1, ..., a_depth).
///
/// Exact tables are certified iff every entry is >= 0. Approximate tables use
/// scale = max |a_n|: certified when every entry is >= -tol*scale, refuted
/// when some D[m][n] < -tol*scale*2^m, inconclusive otherwise.
template <class Scalar>
CMResult<Scalar> cm_check_sequence(const std::vector<Scalar>& values_from_zero, std::size_t depth,
                                   const PrecisionContext& ctx) {
  if (depth == 0) throw std::invalid_argument("cm_check: depth must be >= 1");
  if (values_from_zero.size() < depth + 1) {
    throw std::invalid_argument("cm_check: depth " + std::to_string(depth) + " needs " + std::to_string(depth + 1) +
                                " terms including a_0");
  }
  DiffTable<Scalar> table(values_from_zero, depth);

  std::size_t worst_m = 0;
  std::size_t worst_n = 0;
  for (std::size_t m = 0; m <= depth; ++m) {
    for (std::size_t n = 0; n + m <= depth; ++n) {
      if (table.at(m, n) < table.at(worst_m, worst_n)) {
        worst_m = m;
        worst_n = n;
      }
    }
  }
  Scalar worst_value = table.at(worst_m, worst_n);

  CMVerdict verdict = CMVerdict::certified;
  if constexpr (kIsExact<Scalar>) {
    (void)ctx;
    if (worst_value.sign() < 0) verdict = CMVerdict::refuted;
  } else {
    HPReal scale(0L, ctx.precision_bits());
    for (std::size_t n = 0; n <= depth; ++n) scale = max(scale, abs(values_from_zero[n]));
    const HPReal slack = ctx.tol() * scale;
    if (worst_value < -slack) {
      verdict = CMVerdict::inconclusive;
      for (std::size_t m = 0; m <= depth && verdict != CMVerdict::refuted; ++m) {
        const HPReal amplified = -ldexp(slack, static_cast<long>(m));
        for (std::size_t n = 0; n + m <= depth; ++n) {
          if (table.at(m, n) < amplified) {
            verdict = CMVerdict::refuted;
            break;
          }
        }
      }
    }
  }
  return {verdict, std::move(table), {worst_m, worst_n, std::move(worst_value)}};
}

/// cm_check_sequence on (1, a_1, ..., a_N) for an arbitrary [0,1] prefix.
template <class Scalar>
CMResult<Scalar> cm_check(const SeqPrefix<Scalar>& terms, std::size_t depth, const PrecisionContext& ctx) {
  std::vector<Scalar> values;
  values.reserve(terms.size() + 1);
  values.push_back(constant_like(1, terms.term(1)));
  values.insert(values.end(), terms.begin(), terms.end());
  return cm_check_sequence(values, depth, ctx);
}

template <class Scalar>
CMResult<Scalar> cm_check(const MomentSeq<Scalar>& seq, std::size_t depth, const PrecisionContext& ctx) {
  return cm_check_sequence(seq.with_zeroth(), depth, ctx);
}

template <class Scalar>
struct Theorem11Report {
  CMVerdict verdict;
  /// b_0, ..., b_N with b_n = 1 / (a_0 + ... + a_n)
  std::vector<Scalar> b;
  CMResult<Scalar> cm;
};

/// Maps the moments of `mu` to b_n = 1/(a_0 + ... + a_n), n = 0..N, and
/// checks that the image is completely monotonic to `depth`.
template <class Scalar>
Theorem11Report<Scalar> theorem11_check(const DiscreteMeasure<Scalar>& mu, std::size_t n_terms, std::size_t depth,
                                        const PrecisionContext& ctx) {
  const auto a = moments_from_measure(mu, n_terms).with_zeroth();
  std::vector<Scalar> b;
  b.reserve(a.size());
  Scalar partial = constant_like(0, a.front());
  for (const auto& an : a) {
    partial += an;
    b.push_back(constant_like(1, partial) / partial);
  }
  auto cm = cm_check_sequence(b, depth, ctx);
  const CMVerdict verdict = cm.verdict;
  return {verdict, std::move(b), std::move(cm)};
}

/// For mu = delta_1 the associated measure is Lebesgue measure, and the
/// identity reduces to (z+1) * 1/(z+1) = 1. Returns |product - 1| for each z;
/// throws std::domain_error for z < 0 and NumericalFault if a residual
/// exceeds tol.
std::vector<HPReal> assoc_measure_identity_delta1(const std::vector<HPReal>& z_values, const PrecisionContext& ctx);

/// Random probability measure with 1..max_atoms atoms at positions p/q
/// (1 <= q <= max_denominator) and positive integer weights, normalized.
DiscreteMeasure<ExactRational> random_rational_measure(Rng& rng, std::size_t max_atoms, long max_denominator);

struct DiameterReport {
  std::size_t pairs = 0;
  /// pairs {delta_0, delta_1}, checked separately for lo == 1 - 2^-N
  std::size_t extremal_pairs = 0;
  HPReal max_lo_nondegenerate;
  bool all_hi_at_most_one = true;
  bool all_nondegenerate_strict = true;
  bool extremal_pairs_exact = true;
  /// every sampled moment sequence certified completely monotonic to depth
  bool all_sequences_cm = true;
};

/// Samples pairs of moment sequences of random rational measures (with
/// occasional delta_0 / delta_1 draws) and records exact metric bounds.
DiameterReport diameter_probe(std::size_t n_samples, std::size_t n_terms, std::size_t depth, std::uint64_t seed,
                              const PrecisionContext& ctx);

}  // namespace momentfix

#endif  // MOMENTFIX_MOMENTS_HPP

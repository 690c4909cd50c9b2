#ifndef MOMENTFIX_HARMONIC_SPECTRAL_HPP
#define MOMENTFIX_HARMONIC_SPECTRAL_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "momentfix/numerics.hpp"

namespace momentfix {

/// H_n = 1 + 1/2 + ... + 1/n, exactly. Throws std::invalid_argument for n = 0.
ExactRational harmonic(std::size_t n);

/// Even-index Bernoulli number B_{2k}, exact. Values are memoized.
ExactRational bernoulli_even(std::size_t k);

// Digamma and trigamma on the real line. The argument is shifted upward with
// Psi(x+1) = Psi(x) + 1/x (resp. Psi'(x+1) = Psi'(x) - 1/x^2) until it clears
// a precision-dependent threshold, where the asymptotic Bernoulli series is
// summed. Negative non-integer arguments go through the same shift. Both
// throw PoleError within 2^(-bits/2) of a non-positive integer.

HPReal digamma(const HPReal& x, const PrecisionContext& ctx);
HPReal trigamma(const HPReal& x, const PrecisionContext& ctx);

/// Root of Psi(1+x) = -gamma in (-p-1, -p); 0 for p = 0.
///
/// Bisection on an inset bracket, then Newton polish once the bracket is
/// below 2^(-bits/4). Throws NumericalFault if no sign change is found or the
/// final residual exceeds tol.
HPReal xi_root(std::size_t p, const PrecisionContext& ctx);

/// 1 / Psi'(1 + xi_p).
HPReal alpha_weight(std::size_t p, const PrecisionContext& ctx);

struct SpectralTerm {
  std::size_t p;
  HPReal xi;
  HPReal alpha;
  /// |Psi(1 + xi) + gamma|
  HPReal residual;
};

SpectralTerm spectral_term(std::size_t p, const PrecisionContext& ctx);
/// Terms p = 0..max_p.
std::vector<SpectralTerm> spectral_table(std::size_t max_p, const PrecisionContext& ctx);

/// S(n, P) = sum_{p<=P} alpha_p / (n + 1 - xi_p), using the first P+1 entries
/// of `table`.
HPReal spectral_partial_sum(std::size_t n, std::size_t max_p, std::span<const SpectralTerm> table);
HPReal spectral_partial_sum(std::size_t n, std::size_t max_p, const PrecisionContext& ctx);

}  // namespace momentfix

#endif  // MOMENTFIX_HARMONIC_SPECTRAL_HPP

#ifndef MOMENTFIX_FIXED_POINT_HPP
#define MOMENTFIX_FIXED_POINT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "momentfix/numerics.hpp"
#include "momentfix/sequences.hpp"

namespace momentfix {

/// Prefix (m_1, ..., m_N) of the fixed point of T together with the defects
/// residual_n = (1 + m_1 + ... + m_n) m_n - 1.
struct FixedPointPrefix {
  RealPrefix terms;
  std::vector<HPReal> residuals;

  [[nodiscard]] HPReal max_abs_residual() const;
};

/// Fixed point of T from m_0 = 1 and m_{n+1} = 2 / (1/m_n + sqrt(1/m_n^2 + 4)),
/// the positive root of t^2 + t/m_n - 1 = 0 written without cancellation.
/// Terms are computed with guard bits and rounded to the context precision.
FixedPointPrefix fixed_point_terms(std::size_t n_terms, const PrecisionContext& ctx);

/// Orbit T^1(x0), ..., T^K(x0) with interval distances to the fixed point
/// prefix of the same length.
struct Trajectory {
  RealPrefix start;
  std::vector<RealPrefix> iterates;
  std::vector<MetricValue<HPReal>> distances_to_fixed_point;
};

Trajectory iterate(const RealPrefix& x0, std::size_t k_steps, const PrecisionContext& ctx);

struct RatioReport {
  std::pair<RealPrefix, RealPrefix> pair;
  /// metric(Ta, Tb).lo / metric(a, b).lo
  HPReal ratio;
  /// 2 / ((1 + a_1)(1 + b_1)); at most 8/9 when both prefixes start at >= 1/2.
  HPReal bound_used;
  bool both_in_c = false;
};

/// Throws std::invalid_argument for unequal lengths or metric(a,b).lo <= tol.
RatioReport contraction_ratio(const RealPrefix& a, const RealPrefix& b, const PrecisionContext& ctx);

struct ScanPoint {
  HPReal a;
  HPReal ratio;
};

/// d(T(0), T(a)) / d(0, a) over the geometric family a = (a, a^2, ...), via
/// d(0, a) = a/(2-a) and T(a)_n = (1-a)/(1-a^(n+1)) summed over n <= N.
/// Requires every a in (0, 1] and N >= 32.
std::vector<ScanPoint> lipschitz_lower_scan(const std::vector<HPReal>& a_values, std::size_t n_terms,
                                            const PrecisionContext& ctx);

/// Prefix with i.i.d. uniform dyadic terms in [0,1). With `in_c` the first
/// term is drawn from [1/2, 1) instead.
RealPrefix random_prefix(Rng& rng, std::size_t n_terms, Precision bits, bool in_c);

struct RandomRatioSummary {
  std::size_t samples = 0;
  std::size_t skipped = 0;  // pairs closer than tol
  HPReal max_ratio;
  /// bound_used of the pair attaining max_ratio
  HPReal bound_at_max;
  /// Largest ratio - bound_used over all pairs.
  HPReal max_excess_over_bound;
};

/// contraction_ratio over `samples` seeded random pairs.
RandomRatioSummary random_ratio_scan(std::size_t samples, std::size_t n_terms, std::uint64_t seed, bool in_c,
                                     const PrecisionContext& ctx);

}  // namespace momentfix

#endif  // MOMENTFIX_FIXED_POINT_HPP

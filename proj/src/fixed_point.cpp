#include "momentfix/fixed_point.hpp"

#include <stdexcept>

namespace momentfix {

namespace {

constexpr Precision kGuardBits = 32;

RealPrefix at_precision(const RealPrefix& x, Precision bits) {
  std::vector<HPReal> terms;
  terms.reserve(x.size());
  for (const auto& t : x) terms.push_back(t.rounded(bits));
  return RealPrefix(std::move(terms));
}

}  // namespace

HPReal FixedPointPrefix::max_abs_residual() const {
  HPReal worst(0L, residuals.empty() ? kMinPrecisionBits : residuals.front().precision());
  for (const auto& r : residuals) worst = max(worst, abs(r));
  return worst;
}

FixedPointPrefix fixed_point_terms(std::size_t n_terms, const PrecisionContext& ctx) {
  if (n_terms == 0) throw std::invalid_argument("fixed_point_terms: n_terms must be >= 1");
  const Precision bits = ctx.precision_bits();
  const Precision work = bits + kGuardBits;

  std::vector<HPReal> terms;
  terms.reserve(n_terms);
  HPReal m(1L, work);  // m_0
  for (std::size_t n = 1; n <= n_terms; ++n) {
    const HPReal inv = 1L / m;
    m = 2L / (inv + sqrt(inv * inv + 4L));
    terms.push_back(m.rounded(bits));
  }

  std::vector<HPReal> residuals;
  residuals.reserve(n_terms);
  HPReal partial(1L, work);
  for (const auto& t : terms) {
    partial += t;
    residuals.push_back((partial * t - 1L).rounded(bits));
  }
  return {RealPrefix(std::move(terms)), std::move(residuals)};
}

Trajectory iterate(const RealPrefix& x0, std::size_t k_steps, const PrecisionContext& ctx) {
  if (k_steps == 0) throw std::invalid_argument("iterate: k_steps must be >= 1");
  const Precision bits = ctx.precision_bits();
  const RealPrefix fixed = fixed_point_terms(x0.size(), ctx).terms;

  Trajectory traj{at_precision(x0, bits), {}, {}};
  traj.iterates.reserve(k_steps);
  traj.distances_to_fixed_point.reserve(k_steps);
  for (std::size_t k = 1; k <= k_steps; ++k) {
    traj.iterates.push_back(transform(k == 1 ? traj.start : traj.iterates.back()));
    traj.distances_to_fixed_point.push_back(metric(traj.iterates.back(), fixed));
  }
  return traj;
}

RatioReport contraction_ratio(const RealPrefix& a, const RealPrefix& b, const PrecisionContext& ctx) {
  const auto before = metric(a, b);
  if (before.lo <= ctx.tol()) {
    throw std::invalid_argument("contraction_ratio: metric(a,b) below tolerance; ratio undefined");
  }
  const auto after = metric(transform(a), transform(b));
  HPReal ratio = after.lo / before.lo;
  const HPReal one = ctx.real(1);
  HPReal bound = 2L / ((one + a.term(1)) * (one + b.term(1)));
  const HPReal half = ldexp(one, -1);
  const bool in_c = a.term(1) >= half && b.term(1) >= half;
  return {{a, b}, std::move(ratio), std::move(bound), in_c};
}

std::vector<ScanPoint> lipschitz_lower_scan(const std::vector<HPReal>& a_values, std::size_t n_terms,
                                            const PrecisionContext& ctx) {
  if (n_terms < 32) throw std::invalid_argument("lipschitz_lower_scan: n_terms must be >= 32");
  const Precision bits = ctx.precision_bits();
  std::vector<ScanPoint> out;
  out.reserve(a_values.size());
  for (const auto& a_in : a_values) {
    if (a_in.sign() <= 0 || a_in > 1L) throw std::domain_error("lipschitz_lower_scan: a must lie in (0, 1]");
    const HPReal a = a_in.rounded(bits);
    HPReal sum(0L, bits);
    if (a == 1L) {
      // T(1,1,...)_n = 1/(n+1): |1 - 1/(n+1)| = n/(n+1), and d(0, 1) = 1.
      for (std::size_t n = 1; n <= n_terms; ++n) {
        sum += ldexp(HPReal(static_cast<long>(n), bits) / static_cast<long>(n + 1), -static_cast<long>(n));
      }
      out.push_back({a, std::move(sum)});
      continue;
    }
    HPReal power = a;  // a^n
    for (std::size_t n = 1; n <= n_terms; ++n) {
      const HPReal next = power * a;
      sum += ldexp((1L - power) / (1L - next), -static_cast<long>(n));
      power = next;
    }
    // d(T0, Ta) = a * sum, d(0, a) = a / (2 - a)
    out.push_back({a, (2L - a) * sum});
  }
  return out;
}

RealPrefix random_prefix(Rng& rng, std::size_t n_terms, Precision bits, bool in_c) {
  if (n_terms == 0) throw std::invalid_argument("random_prefix: n_terms must be >= 1");
  std::vector<HPReal> terms;
  terms.reserve(n_terms);
  for (std::size_t n = 1; n <= n_terms; ++n) {
    HPReal u = rng.uniform_real(bits);
    if (n == 1 && in_c) u = ldexp(u + 1L, -1);
    terms.push_back(std::move(u));
  }
  return RealPrefix(std::move(terms));
}

RandomRatioSummary random_ratio_scan(std::size_t samples, std::size_t n_terms, std::uint64_t seed, bool in_c,
                                     const PrecisionContext& ctx) {
  if (samples == 0) throw std::invalid_argument("random_ratio_scan: samples must be >= 1");
  const Precision bits = ctx.precision_bits();
  Rng rng(seed);
  RandomRatioSummary summary;
  summary.max_ratio = ctx.real(0);
  summary.bound_at_max = ctx.real(0);
  std::optional<HPReal> excess;
  for (std::size_t s = 0; s < samples; ++s) {
    const RealPrefix a = random_prefix(rng, n_terms, bits, in_c);
    const RealPrefix b = random_prefix(rng, n_terms, bits, in_c);
    if (metric(a, b).lo <= ctx.tol()) {
      ++summary.skipped;
      continue;
    }
    const RatioReport report = contraction_ratio(a, b, ctx);
    ++summary.samples;
    if (report.ratio > summary.max_ratio) {
      summary.max_ratio = report.ratio;
      summary.bound_at_max = report.bound_used;
    }
    HPReal e = report.ratio - report.bound_used;
    if (!excess || e > *excess) excess = std::move(e);
  }
  summary.max_excess_over_bound = excess ? *excess : ctx.real(0);
  return summary;
}

}  // namespace momentfix

#include "momentfix/moments.hpp"

namespace momentfix {

std::string_view to_string(CMVerdict verdict) {
  switch (verdict) {
    case CMVerdict::certified:
      return "certified";
    case CMVerdict::refuted:
      return "refuted";
    case CMVerdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

std::vector<HPReal> assoc_measure_identity_delta1(const std::vector<HPReal>& z_values, const PrecisionContext& ctx) {
  std::vector<HPReal> residuals;
  residuals.reserve(z_values.size());
  for (const auto& z_in : z_values) {
    if (z_in.sign() < 0) throw std::domain_error("assoc_measure_identity_delta1: z must be >= 0");
    const HPReal z = z_in.rounded(ctx.precision_bits());
    // int (1 - t^(z+1))/(1 - t) d delta_1(t) is the limit t -> 1, i.e. z + 1;
    // int t^z dt over [0,1] is 1/(z+1).
    const HPReal first = z + 1L;
    const HPReal second = 1L / (z + 1L);
    HPReal residual = abs(first * second - 1L);
    if (residual > ctx.tol()) {
      throw NumericalFault("assoc_measure_identity_delta1: residual above tolerance at z = " + z.to_string());
    }
    residuals.push_back(std::move(residual));
  }
  return residuals;
}

DiscreteMeasure<ExactRational> random_rational_measure(Rng& rng, std::size_t max_atoms, long max_denominator) {
  if (max_atoms == 0 || max_denominator < 1) throw std::invalid_argument("random_rational_measure: bad limits");
  const auto count = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(max_atoms)));
  std::vector<long> raw_weights;
  std::vector<ExactRational> positions;
  long total = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const long q = rng.uniform_int(1, max_denominator);
    const long p = rng.uniform_int(0, q);
    positions.emplace_back(p, q);
    raw_weights.push_back(rng.uniform_int(1, max_denominator));
    total += raw_weights.back();
  }
  std::vector<Atom<ExactRational>> atoms;
  atoms.reserve(count);
  for (std::size_t i = 0; i < count; ++i) atoms.push_back({positions[i], ExactRational(raw_weights[i], total)});
  return DiscreteMeasure<ExactRational>(std::move(atoms));
}

namespace {

DiscreteMeasure<ExactRational> probe_measure(Rng& rng) {
  // 1 in 20 draws each is delta_0 or delta_1 so the extremal pair shows up.
  const auto kind = rng.uniform_int(0, 19);
  if (kind == 0) return DiscreteMeasure<ExactRational>::dirac(ExactRational(0));
  if (kind == 1) return DiscreteMeasure<ExactRational>::dirac(ExactRational(1));
  return random_rational_measure(rng, 4, 16);
}

}  // namespace

DiameterReport diameter_probe(std::size_t n_samples, std::size_t n_terms, std::size_t depth, std::uint64_t seed,
                              const PrecisionContext& ctx) {
  if (n_samples == 0) throw std::invalid_argument("diameter_probe: n_samples must be >= 1");
  if (depth > n_terms) throw std::invalid_argument("diameter_probe: depth exceeds n_terms");
  Rng rng(seed);
  DiameterReport report;
  const ExactRational one(1);
  const ExactRational extremal = one - ldexp(one, -static_cast<long>(n_terms));
  ExactRational max_lo(0);

  for (std::size_t s = 0; s < n_samples; ++s) {
    const auto mu = probe_measure(rng);
    const auto nu = probe_measure(rng);
    const auto a = moments_from_measure(mu, n_terms);
    const auto b = moments_from_measure(nu, n_terms);
    if (depth > 0) {
      report.all_sequences_cm = report.all_sequences_cm && cm_check(a, depth, ctx).verdict == CMVerdict::certified &&
                                cm_check(b, depth, ctx).verdict == CMVerdict::certified;
    }
    const auto d = metric(a.terms(), b.terms());
    ++report.pairs;
    if (d.hi > one) report.all_hi_at_most_one = false;

    const bool is_extremal =
        (mu.is_dirac_at(0) && nu.is_dirac_at(1)) || (mu.is_dirac_at(1) && nu.is_dirac_at(0));
    if (is_extremal) {
      ++report.extremal_pairs;
      if (d.lo != extremal || d.hi != one) report.extremal_pairs_exact = false;
      continue;
    }
    if (!(d.lo < extremal)) report.all_nondegenerate_strict = false;
    max_lo = max(max_lo, d.lo);
  }
  report.max_lo_nondegenerate = ctx.real(max_lo);
  return report;
}

}  // namespace momentfix

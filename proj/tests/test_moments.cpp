#include <doctest.h>

#include <stdexcept>

#include "momentfix/fixed_point.hpp"
#include "momentfix/moments.hpp"

using namespace momentfix;

namespace {

using Q = ExactRational;
using QMeasure = DiscreteMeasure<Q>;

Q factorial(long n) {
  Q f(1);
  for (long k = 2; k <= n; ++k) f *= Q(k);
  return f;
}

Q binomial(long m, long k) { return factorial(m) / (factorial(k) * factorial(m - k)); }

// Direct alternating binomial sum, independent of the table recurrence.
Q direct_difference(const std::vector<Q>& a, long m, long n) {
  Q sum(0);
  for (long k = 0; k <= m; ++k) {
    const Q term = binomial(m, k) * a[static_cast<std::size_t>(n + k)];
    sum += (k % 2 == 0) ? term : -term;
  }
  return sum;
}

std::vector<Q> reciprocals_from_zero(long count) {
  std::vector<Q> v;
  for (long n = 0; n < count; ++n) v.emplace_back(1, n + 1);
  return v;
}

}  // namespace

TEST_CASE("DiscreteMeasure validation") {
  CHECK_THROWS_AS(QMeasure(std::vector<Atom<Q>>{}), std::invalid_argument);
  CHECK_THROWS_AS(QMeasure({{Q(3, 2), Q(1)}}), std::domain_error);
  CHECK_THROWS_AS(QMeasure({{Q(1, 2), Q(1, 2)}}), std::domain_error);
  CHECK_THROWS_AS(QMeasure({{Q(1, 2), Q(3, 2)}, {Q(0), Q(-1, 2)}}), std::domain_error);
  const auto half = QMeasure({{Q(0), Q(1, 2)}, {Q(1), Q(1, 2)}});
  CHECK_FALSE(half.is_dirac_at(0));
  CHECK(QMeasure::dirac(Q(1)).is_dirac_at(1));

  const Precision bits = 64;
  CHECK_NOTHROW(DiscreteMeasure<HPReal>({{HPReal(0L, bits), HPReal::parse("1/3", bits)},
                                         {HPReal(1L, bits), HPReal::parse("2/3", bits)}}));
}

TEST_CASE("moments_from_measure") {
  const auto ones = moments_from_measure(QMeasure::dirac(Q(1)), 6);
  for (const auto& t : ones.terms()) CHECK(t == Q(1));
  const auto zeros = moments_from_measure(QMeasure::dirac(Q(0)), 6);
  for (const auto& t : zeros.terms()) CHECK(t == Q(0));
  const auto half = moments_from_measure(QMeasure({{Q(0), Q(1, 2)}, {Q(1), Q(1, 2)}}), 6);
  for (const auto& t : half.terms()) CHECK(t == Q(1, 2));
  CHECK(half.a0() == Q(1));
  CHECK(half.with_zeroth().size() == 7);
  CHECK(half.provenance() == "discrete measure");

  const auto quarter = moments_from_measure(QMeasure::dirac(Q(1, 4)), 3, "delta(1/4)");
  CHECK(quarter.terms() == geometric(Q(1, 4), 3));
  CHECK(quarter.provenance() == "delta(1/4)");

  CHECK_THROWS_AS(MomentSeq<Q>(RationalPrefix(std::vector<Q>{Q(1, 3), Q(1, 2)}), "x"), std::domain_error);
  CHECK_THROWS_AS(moments_from_measure(QMeasure::dirac(Q(1)), 0), std::invalid_argument);
}

TEST_CASE("DiffTable of 1/(n+1) equals the Beta integral m! n! / (m+n+1)!") {
  const std::size_t depth = 12;
  const DiffTable<Q> table(reciprocals_from_zero(depth + 1), depth);
  CHECK(DiffTable<Q>::exact());
  for (std::size_t m = 0; m <= depth; ++m) {
    CHECK(table.row(m).size() == depth - m + 1);
    for (std::size_t n = 0; n + m <= depth; ++n) {
      const long mm = static_cast<long>(m);
      const long nn = static_cast<long>(n);
      CHECK(table.at(m, n) == factorial(mm) * factorial(nn) / factorial(mm + nn + 1));
    }
  }
  CHECK_THROWS_AS(DiffTable<Q>(reciprocals_from_zero(5), 5), std::invalid_argument);
}

TEST_CASE("DiffTable recurrence matches the direct binomial sum (property)") {
  Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const auto depth = static_cast<std::size_t>(rng.uniform_int(1, 14));
    std::vector<Q> a;
    for (std::size_t i = 0; i <= depth; ++i) a.emplace_back(rng.uniform_int(-50, 50), rng.uniform_int(1, 30));
    const DiffTable<Q> table(a, depth);
    for (std::size_t m = 0; m <= depth; ++m) {
      for (std::size_t n = 0; n + m <= depth; ++n) {
        CHECK(table.at(m, n) == direct_difference(a, static_cast<long>(m), static_cast<long>(n)));
      }
    }
  }
}

TEST_CASE("cm_check verdicts") {
  const auto ctx = make_context(128);
  SUBCASE("1/(n+1) is certified") {
    const auto r = cm_check_sequence(reciprocals_from_zero(13), 12, ctx);
    CHECK(r.verdict == CMVerdict::certified);
  }
  SUBCASE("constant sequence") {
    const auto r = cm_check(geometric(Q(1), 10), 10, ctx);
    CHECK(r.verdict == CMVerdict::certified);
    CHECK(r.worst.value == Q(0));
  }
  SUBCASE("(1, 0.9, 0.7) is refuted at the second difference") {
    const RationalPrefix x(std::vector<Q>{Q(9, 10), Q(7, 10)});
    const auto r = cm_check(x, 2, ctx);
    CHECK(r.verdict == CMVerdict::refuted);
    CHECK(r.worst.m == 2);
    CHECK(r.worst.n == 0);
    CHECK(r.worst.value == Q(-1, 10));
    CHECK(to_string(r.verdict) == "refuted");
  }
  SUBCASE("increasing input is refuted rather than rejected") {
    const RationalPrefix x(std::vector<Q>{Q(1, 2), Q(3, 4)});
    CHECK(cm_check(x, 2, ctx).verdict == CMVerdict::refuted);
  }
  SUBCASE("approximate data near the boundary is inconclusive") {
    // D[1][0] = -1.5 tol: past the certification slack (tol), inside the
    // first-difference refutation slack (2 tol).
    const HPReal tol = ctx.tol();
    const std::vector<HPReal> t{ctx.real(1) - 3L * ldexp(tol, -1), ctx.real(1)};
    const auto r = cm_check_sequence(t, 1, ctx);
    CHECK(r.verdict == CMVerdict::inconclusive);
    CHECK(to_string(r.verdict) == "inconclusive");
    const std::vector<HPReal> far{ctx.real(1) - ctx.real(1) / 2L, ctx.real(1)};
    CHECK(cm_check_sequence(far, 1, ctx).verdict == CMVerdict::refuted);
  }
  CHECK_THROWS_AS(cm_check(geometric(Q(1), 3), 0, ctx), std::invalid_argument);
  CHECK_THROWS_AS(cm_check(geometric(Q(1), 3), 4, ctx), std::invalid_argument);
}

TEST_CASE("fixed point prefix is completely monotonic") {
  const auto ctx = make_context(256);
  const auto m = fixed_point_terms(24, ctx).terms;
  const auto r = cm_check(m, 12, ctx);
  CHECK(r.verdict == CMVerdict::certified);
}

TEST_CASE("moments of random rational measures are certified (property)") {
  const auto ctx = make_context(64);
  Rng rng(33);
  for (int trial = 0; trial < 60; ++trial) {
    const auto mu = random_rational_measure(rng, 5, 20);
    const auto seq = moments_from_measure(mu, 12);
    CHECK(cm_check(seq, 12, ctx).verdict == CMVerdict::certified);
  }
}

TEST_CASE("theorem11_check") {
  const auto ctx = make_context(128);
  SUBCASE("delta_1 gives 1/(n+1)") {
    const auto r = theorem11_check(QMeasure::dirac(Q(1)), 12, 10, ctx);
    CHECK(r.verdict == CMVerdict::certified);
    REQUIRE(r.b.size() == 13);
    for (std::size_t n = 0; n < r.b.size(); ++n) CHECK(r.b[n] == Q(1, static_cast<long>(n) + 1));
  }
  SUBCASE("delta_0 gives the constant 1") {
    const auto r = theorem11_check(QMeasure::dirac(Q(0)), 12, 10, ctx);
    CHECK(r.verdict == CMVerdict::certified);
    for (const auto& bn : r.b) CHECK(bn == Q(1));
  }
  SUBCASE("half-half mixture gives 2/(n+2)") {
    const auto r = theorem11_check(QMeasure({{Q(0), Q(1, 2)}, {Q(1), Q(1, 2)}}), 12, 10, ctx);
    CHECK(r.verdict == CMVerdict::certified);
    for (std::size_t n = 0; n < r.b.size(); ++n) CHECK(r.b[n] == Q(2, static_cast<long>(n) + 2));
  }
  SUBCASE("random measures; b_1 in [1/2, 1]") {
    Rng rng(4);
    for (int trial = 0; trial < 40; ++trial) {
      const auto r = theorem11_check(random_rational_measure(rng, 4, 12), 10, 10, ctx);
      CHECK(r.verdict == CMVerdict::certified);
      CHECK(r.b[0] == Q(1));
      CHECK(r.b[1] >= Q(1, 2));
      CHECK(r.b[1] <= Q(1));
    }
  }
  SUBCASE("real measure") {
    const Precision bits = 128;
    const DiscreteMeasure<HPReal> mu({{HPReal::parse("0.3", bits), HPReal::parse("0.25", bits)},
                                      {HPReal::parse("0.8", bits), HPReal::parse("0.75", bits)}});
    CHECK(theorem11_check(mu, 12, 8, ctx).verdict == CMVerdict::certified);
  }
}

TEST_CASE("associated-measure identity for delta_1") {
  const auto ctx = make_context(128);
  std::vector<HPReal> zs{ctx.real(0), HPReal::parse("0.5", 128), ctx.real(3), HPReal::parse("1e6", 128)};
  Rng rng(12);
  for (int i = 0; i < 50; ++i) zs.push_back(rng.uniform_real(128) * 100L);
  const auto residuals = assoc_measure_identity_delta1(zs, ctx);
  REQUIRE(residuals.size() == zs.size());
  for (const auto& r : residuals) CHECK(r <= ctx.tol());
  CHECK_THROWS_AS(assoc_measure_identity_delta1({ctx.real(-1)}, ctx), std::domain_error);
}

TEST_CASE("diameter_probe") {
  const auto ctx = make_context(64);
  const auto report = diameter_probe(300, 32, 6, 2, ctx);
  CHECK(report.pairs == 300);
  CHECK(report.extremal_pairs > 0);
  CHECK(report.extremal_pairs_exact);
  CHECK(report.all_hi_at_most_one);
  CHECK(report.all_nondegenerate_strict);
  CHECK(report.all_sequences_cm);
  CHECK(report.max_lo_nondegenerate < 1L);

  const auto again = diameter_probe(300, 32, 6, 2, ctx);
  CHECK(again.max_lo_nondegenerate == report.max_lo_nondegenerate);
  CHECK_THROWS_AS(diameter_probe(0, 32, 6, 2, ctx), std::invalid_argument);
}

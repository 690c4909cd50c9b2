#include "momentfix/harmonic_spectral.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

namespace momentfix {

namespace {

// Guard bits for digamma/trigamma internals; the upward shift of a negative
// argument sums terms up to 1/dist(x, pole), so the guard has to cover that.
constexpr Precision kSpecialGuard = 64;
// Extra bits carried by the root finder on top of the context precision.
constexpr Precision kRootGuard = 32;

long shift_threshold(Precision work) {
  // The asymptotic series' smallest term is about exp(-2 pi x); a threshold of
  // 0.2 * work + 8 keeps it far below 2^-work.
  return static_cast<long>(0.2 * static_cast<double>(work)) + 8;
}

void check_pole(const HPReal& x, Precision bits, const char* who) {
  if (x.sign() > 0) return;
  const HPReal nearest = floor(ldexp(2L * x + 1L, -1));
  if (nearest > 0L) return;
  if (abs(x - nearest) < exp2i(-static_cast<long>(bits / 2), x.precision())) {
    throw PoleError(std::string(who) + ": argument " + x.to_string(20) + " is at or near a pole");
  }
}

std::mutex& bernoulli_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

ExactRational harmonic(std::size_t n) {
  if (n == 0) throw std::invalid_argument("harmonic: n must be >= 1");
  ExactRational h(0);
  for (std::size_t k = 1; k <= n; ++k) h += ExactRational(1, static_cast<long>(k));
  return h;
}

ExactRational bernoulli_even(std::size_t k) {
  // B_m = -1/(m+1) sum_{j<m} C(m+1, j) B_j, memoized over all indices.
  static std::vector<ExactRational> cache{ExactRational(1), ExactRational(-1, 2)};
  const std::lock_guard<std::mutex> lock(bernoulli_mutex());
  const std::size_t target = 2 * k;
  while (cache.size() <= target) {
    const std::size_t m = cache.size();
    if (m % 2 == 1) {
      cache.emplace_back(0);
      continue;
    }
    mpq_class sum = 0;
    mpz_class binom;
    for (std::size_t j = 0; j < m; ++j) {
      if (j > 1 && j % 2 == 1) continue;
      mpz_bin_uiui(binom.get_mpz_t(), m + 1, j);
      sum += mpq_class(binom) * cache[j].raw();
    }
    cache.emplace_back(mpq_class(-sum / static_cast<unsigned long>(m + 1)));
  }
  return cache[target];
}

HPReal digamma(const HPReal& x, const PrecisionContext& ctx) {
  const Precision bits = ctx.precision_bits();
  const Precision work = bits + kSpecialGuard;
  check_pole(x, bits, "digamma");

  HPReal y = x.rounded(work);
  HPReal shift(0L, work);
  const long threshold = shift_threshold(work);
  while (y < threshold) {
    shift += 1L / y;
    y += 1L;
  }

  // Psi(y) ~ log y - 1/(2y) - sum_k B_{2k} / (2k y^{2k})
  HPReal result = log(y) - 1L / (2L * y);
  const HPReal inv_sq = 1L / (y * y);
  const HPReal eps = exp2i(-static_cast<long>(work), work);
  HPReal power = inv_sq;
  for (std::size_t k = 1;; ++k) {
    if (k > 4 * static_cast<std::size_t>(threshold)) throw NumericalFault("digamma: asymptotic series did not settle");
    const HPReal term = HPReal(bernoulli_even(k), work) / static_cast<long>(2 * k) * power;
    result -= term;
    if (abs(term) < eps) break;
    power *= inv_sq;
  }
  return (result - shift).rounded(bits);
}

HPReal trigamma(const HPReal& x, const PrecisionContext& ctx) {
  const Precision bits = ctx.precision_bits();
  const Precision work = bits + kSpecialGuard;
  check_pole(x, bits, "trigamma");

  HPReal y = x.rounded(work);
  HPReal shift(0L, work);
  const long threshold = shift_threshold(work);
  while (y < threshold) {
    shift += 1L / (y * y);
    y += 1L;
  }

  // Psi'(y) ~ 1/y + 1/(2y^2) + sum_k B_{2k} / y^{2k+1}
  const HPReal inv = 1L / y;
  const HPReal inv_sq = inv * inv;
  HPReal result = inv + ldexp(inv_sq, -1);
  const HPReal eps = exp2i(-static_cast<long>(work), work);
  HPReal power = inv_sq * inv;
  for (std::size_t k = 1;; ++k) {
    if (k > 4 * static_cast<std::size_t>(threshold)) throw NumericalFault("trigamma: asymptotic series did not settle");
    const HPReal term = HPReal(bernoulli_even(k), work) * power;
    result += term;
    if (abs(term) < eps) break;
    power *= inv_sq;
  }
  return (result + shift).rounded(bits);
}

HPReal xi_root(std::size_t p, const PrecisionContext& ctx) {
  const Precision bits = ctx.precision_bits();
  if (p == 0) return HPReal(0L, bits);

  const Precision work = bits + kRootGuard;
  const PrecisionContext wctx = make_context(work);
  const HPReal gamma = euler_gamma(wctx);
  auto f = [&](const HPReal& x) { return digamma(x + 1L, wctx) + gamma; };

  const HPReal left(-static_cast<long>(p) - 1, work);
  const HPReal right(-static_cast<long>(p), work);
  // Psi(1+x) increases from -inf to +inf across the interval; the ends are
  // inset by eps, halved toward the pole while the sign is still wrong.
  const HPReal eps_floor = exp2i(-static_cast<long>(bits / 2) + 2, work);
  HPReal eps = exp2i(-8, work);
  HPReal lo = left + eps;
  while (f(lo).sign() >= 0) {
    eps = ldexp(eps, -1);
    if (eps < eps_floor) throw NumericalFault("xi_root: no sign change near left pole for p = " + std::to_string(p));
    lo = left + eps;
  }
  eps = exp2i(-8, work);
  HPReal hi = right - eps;
  while (f(hi).sign() <= 0) {
    eps = ldexp(eps, -1);
    if (eps < eps_floor) throw NumericalFault("xi_root: no sign change near right pole for p = " + std::to_string(p));
    hi = right - eps;
  }

  const HPReal polish_width = exp2i(-static_cast<long>(bits / 4), work);
  while (hi - lo > polish_width) {
    HPReal mid = ldexp(lo + hi, -1);
    if (f(mid).sign() < 0) {
      lo = std::move(mid);
    } else {
      hi = std::move(mid);
    }
  }

  const HPReal step_floor = exp2i(-static_cast<long>(bits) - 8, work);
  HPReal x = ldexp(lo + hi, -1);
  bool converged = false;
  for (int iter = 0; iter < 64 && !converged; ++iter) {
    const HPReal fx = f(x);
    if (fx.is_zero()) break;
    if (fx.sign() < 0) {
      lo = x;
    } else {
      hi = x;
    }
    const HPReal step = fx / trigamma(x + 1L, wctx);
    HPReal next = x - step;
    converged = abs(step) < step_floor;
    if (next <= lo || next >= hi) {
      // a converged step can round onto the bracket edge; keep x then
      if (converged) break;
      next = ldexp(lo + hi, -1);
    }
    x = std::move(next);
  }

  HPReal root = x.rounded(bits);
  if (!(root > left && root < right)) throw NumericalFault("xi_root: root escaped its bracket");
  const HPReal residual = abs(digamma(root + 1L, ctx) + euler_gamma(ctx));
  if (residual > ctx.tol()) {
    throw NumericalFault("xi_root: residual " + residual.to_string(10) + " above tolerance for p = " +
                         std::to_string(p));
  }
  return root;
}

SpectralTerm spectral_term(std::size_t p, const PrecisionContext& ctx) {
  HPReal xi = xi_root(p, ctx);
  const HPReal slope = trigamma(xi + 1L, ctx);
  HPReal alpha = 1L / slope;
  if (alpha.sign() <= 0) throw NumericalFault("alpha_weight: non-positive weight for p = " + std::to_string(p));
  HPReal residual = abs(digamma(xi + 1L, ctx) + euler_gamma(ctx));
  return {p, std::move(xi), std::move(alpha), std::move(residual)};
}

HPReal alpha_weight(std::size_t p, const PrecisionContext& ctx) { return spectral_term(p, ctx).alpha; }

std::vector<SpectralTerm> spectral_table(std::size_t max_p, const PrecisionContext& ctx) {
  std::vector<SpectralTerm> table;
  table.reserve(max_p + 1);
  for (std::size_t p = 0; p <= max_p; ++p) table.push_back(spectral_term(p, ctx));
  return table;
}

HPReal spectral_partial_sum(std::size_t n, std::size_t max_p, std::span<const SpectralTerm> table) {
  if (table.size() <= max_p) throw std::invalid_argument("spectral_partial_sum: table shorter than max_p + 1");
  const Precision bits = table.front().alpha.precision();
  HPReal sum(0L, bits);
  for (std::size_t p = 0; p <= max_p; ++p) {
    sum += table[p].alpha / (static_cast<long>(n) + 1L - table[p].xi);
  }
  return sum;
}

HPReal spectral_partial_sum(std::size_t n, std::size_t max_p, const PrecisionContext& ctx) {
  const auto table = spectral_table(max_p, ctx);
  return spectral_partial_sum(n, max_p, table);
}

}  // namespace momentfix

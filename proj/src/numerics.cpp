#include "momentfix/numerics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace momentfix {

namespace {

constexpr mpfr_rnd_t kRound = MPFR_RNDN;

Precision wider(const HPReal& a, const HPReal& b) {
  return std::max(a.precision(), b.precision());
}

void require_precision(Precision bits) {
  if (bits < MPFR_PREC_MIN || bits > MPFR_PREC_MAX) {
    throw std::invalid_argument("HPReal: precision out of range");
  }
}

bool all_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

}  // namespace

// ---------------------------------------------------------------------------
// HPReal

HPReal::HPReal() : HPReal(0L, kMinPrecisionBits) {}

HPReal::HPReal(long value, Precision bits) {
  require_precision(bits);
  mpfr_init2(value_, static_cast<mpfr_prec_t>(bits));
  mpfr_set_si(value_, value, kRound);
}

HPReal::HPReal(const ExactRational& value, Precision bits) {
  require_precision(bits);
  mpfr_init2(value_, static_cast<mpfr_prec_t>(bits));
  mpfr_set_q(value_, value.raw().get_mpq_t(), kRound);
}

HPReal HPReal::from_double(double value, Precision bits) {
  if (!std::isfinite(value)) throw std::domain_error("HPReal: non-finite double");
  HPReal r(0L, bits);
  mpfr_set_d(r.value_, value, kRound);
  return r;
}

HPReal HPReal::parse(std::string_view text, Precision bits) {
  if (text.find('/') != std::string_view::npos) {
    return HPReal(ExactRational::parse(text), bits);
  }
  const std::string buf(text);
  if (buf.empty()) throw std::invalid_argument("HPReal: empty number");
  HPReal r(0L, bits);
  char* end = nullptr;
  mpfr_strtofr(r.value_, buf.c_str(), &end, 10, kRound);
  if (end != buf.c_str() + buf.size() || !mpfr_number_p(r.value_)) {
    throw std::invalid_argument("HPReal: malformed number '" + buf + "'");
  }
  return r;
}

HPReal::HPReal(const HPReal& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, kRound);
}

HPReal::HPReal(HPReal&& other) noexcept {
  mpfr_init2(value_, kMinPrecisionBits);
  mpfr_set_zero(value_, 1);
  mpfr_swap(value_, other.value_);
}

HPReal& HPReal::operator=(const HPReal& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, kRound);
  }
  return *this;
}

HPReal& HPReal::operator=(HPReal&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

HPReal::~HPReal() { mpfr_clear(value_); }

Precision HPReal::precision() const { return static_cast<Precision>(mpfr_get_prec(value_)); }

HPReal HPReal::rounded(Precision bits) const {
  HPReal r(0L, bits);
  mpfr_set(r.value_, value_, kRound);
  return r;
}

void HPReal::check_finite(const char* what) const {
  if (!mpfr_number_p(value_)) throw std::domain_error(std::string("HPReal: non-finite result in ") + what);
}

#define MOMENTFIX_COMPOUND(op, fn, name)                                  \
  HPReal& HPReal::operator op(const HPReal& rhs) {                        \
    if (rhs.precision() > precision()) mpfr_prec_round(value_, mpfr_get_prec(rhs.value_), kRound); \
    fn(value_, value_, rhs.value_, kRound);                               \
    check_finite(name);                                                   \
    return *this;                                                         \
  }
MOMENTFIX_COMPOUND(+=, mpfr_add, "+")
MOMENTFIX_COMPOUND(-=, mpfr_sub, "-")
MOMENTFIX_COMPOUND(*=, mpfr_mul, "*")
MOMENTFIX_COMPOUND(/=, mpfr_div, "/")
#undef MOMENTFIX_COMPOUND

HPReal& HPReal::operator+=(long rhs) { mpfr_add_si(value_, value_, rhs, kRound); return *this; }
HPReal& HPReal::operator-=(long rhs) { mpfr_sub_si(value_, value_, rhs, kRound); return *this; }
HPReal& HPReal::operator*=(long rhs) { mpfr_mul_si(value_, value_, rhs, kRound); return *this; }
HPReal& HPReal::operator/=(long rhs) {
  mpfr_div_si(value_, value_, rhs, kRound);
  check_finite("/");
  return *this;
}

#define MOMENTFIX_BINARY(op, fn, name)                                    \
  HPReal operator op(const HPReal& a, const HPReal& b) {                  \
    HPReal r(0L, wider(a, b));                                            \
    fn(r.value_, a.value_, b.value_, kRound);                             \
    r.check_finite(name);                                                 \
    return r;                                                             \
  }
MOMENTFIX_BINARY(+, mpfr_add, "+")
MOMENTFIX_BINARY(-, mpfr_sub, "-")
MOMENTFIX_BINARY(*, mpfr_mul, "*")
MOMENTFIX_BINARY(/, mpfr_div, "/")
#undef MOMENTFIX_BINARY

HPReal operator+(const HPReal& a, long b) { HPReal r(a); return r += b; }
HPReal operator-(const HPReal& a, long b) { HPReal r(a); return r -= b; }
HPReal operator*(const HPReal& a, long b) { HPReal r(a); return r *= b; }
HPReal operator/(const HPReal& a, long b) { HPReal r(a); return r /= b; }
HPReal operator+(long a, const HPReal& b) { return b + a; }
HPReal operator*(long a, const HPReal& b) { return b * a; }

HPReal operator-(long a, const HPReal& b) {
  HPReal r(0L, b.precision());
  mpfr_si_sub(r.value_, a, b.value_, kRound);
  return r;
}

HPReal operator/(long a, const HPReal& b) {
  HPReal r(0L, b.precision());
  mpfr_si_div(r.value_, a, b.value_, kRound);
  r.check_finite("/");
  return r;
}

HPReal HPReal::operator-() const {
  HPReal r(*this);
  mpfr_neg(r.value_, r.value_, kRound);
  return r;
}

bool operator==(const HPReal& a, const HPReal& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }

std::weak_ordering operator<=>(const HPReal& a, const HPReal& b) {
  const int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::weak_ordering::less;
  if (c > 0) return std::weak_ordering::greater;
  return std::weak_ordering::equivalent;
}

bool operator==(const HPReal& a, long b) { return mpfr_cmp_si(a.value_, b) == 0; }

std::weak_ordering operator<=>(const HPReal& a, long b) {
  const int c = mpfr_cmp_si(a.value_, b);
  if (c < 0) return std::weak_ordering::less;
  if (c > 0) return std::weak_ordering::greater;
  return std::weak_ordering::equivalent;
}

int HPReal::sign() const { return mpfr_sgn(value_); }
bool HPReal::is_zero() const { return mpfr_zero_p(value_) != 0; }
bool HPReal::is_integer() const { return mpfr_integer_p(value_) != 0; }
double HPReal::to_double() const { return mpfr_get_d(value_, kRound); }

std::string HPReal::to_string(int significant_digits) const {
  if (is_zero()) return "0";
  significant_digits = std::max(significant_digits, 1);
  mpfr_exp_t exp10 = 0;
  char* raw_digits = mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(significant_digits), value_, kRound);
  std::string digits(raw_digits);
  mpfr_free_str(raw_digits);

  std::string sign;
  if (!digits.empty() && digits.front() == '-') {
    sign = "-";
    digits.erase(0, 1);
  }
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();

  // value = 0.<digits> * 10^exp10
  const long sci = static_cast<long>(exp10) - 1;
  const long k = static_cast<long>(digits.size());
  std::string out;
  if (sci >= -5 && sci < significant_digits) {
    if (exp10 <= 0) {
      out = "0." + std::string(static_cast<size_t>(-exp10), '0') + digits;
    } else if (exp10 >= k) {
      out = digits + std::string(static_cast<size_t>(exp10 - k), '0');
    } else {
      out = digits.substr(0, static_cast<size_t>(exp10)) + "." + digits.substr(static_cast<size_t>(exp10));
    }
  } else {
    out = digits.substr(0, 1);
    if (k > 1) out += "." + digits.substr(1);
    out += "e" + std::to_string(sci);
  }
  return sign + out;
}

std::string HPReal::to_string() const { return to_string(decimal_digits_for(precision())); }

HPReal abs(const HPReal& x) {
  HPReal r(x);
  mpfr_abs(r.raw_mut(), r.raw(), kRound);
  return r;
}

HPReal sqrt(const HPReal& x) {
  if (x.sign() < 0) throw std::domain_error("sqrt of negative HPReal");
  HPReal r(0L, x.precision());
  mpfr_sqrt(r.raw_mut(), x.raw(), kRound);
  return r;
}

HPReal log(const HPReal& x) {
  if (x.sign() <= 0) throw std::domain_error("log of non-positive HPReal");
  HPReal r(0L, x.precision());
  mpfr_log(r.raw_mut(), x.raw(), kRound);
  return r;
}

HPReal pow(const HPReal& x, unsigned long exponent) {
  HPReal r(0L, x.precision());
  mpfr_pow_ui(r.raw_mut(), x.raw(), exponent, kRound);
  if (!mpfr_number_p(r.raw())) throw std::domain_error("pow overflow");
  return r;
}

HPReal ldexp(const HPReal& x, long exponent) {
  HPReal r(x);
  mpfr_mul_2si(r.raw_mut(), r.raw(), exponent, kRound);
  return r;
}

HPReal floor(const HPReal& x) {
  HPReal r(0L, x.precision());
  mpfr_floor(r.raw_mut(), x.raw());
  return r;
}

const HPReal& min(const HPReal& a, const HPReal& b) { return b < a ? b : a; }
const HPReal& max(const HPReal& a, const HPReal& b) { return a < b ? b : a; }

HPReal exp2i(long exponent, Precision bits) { return ldexp(HPReal(1L, bits), exponent); }

HPReal pi(Precision bits) {
  HPReal r(0L, bits);
  mpfr_const_pi(r.raw_mut(), kRound);
  return r;
}

int decimal_digits_for(Precision bits) {
  return static_cast<int>(std::ceil(static_cast<double>(bits) * 0.30102999566398120)) + 2;
}

// ---------------------------------------------------------------------------
// ExactRational

ExactRational::ExactRational(long value) : value_(value) {}

ExactRational::ExactRational(long numerator, long denominator) {
  if (denominator == 0) throw std::invalid_argument("ExactRational: zero denominator");
  value_ = mpq_class(mpz_class(numerator), mpz_class(denominator));
  value_.canonicalize();
}

ExactRational::ExactRational(mpq_class value) : value_(std::move(value)) {
  if (value_.get_den() == 0) throw std::invalid_argument("ExactRational: zero denominator");
  value_.canonicalize();
}

ExactRational ExactRational::parse(std::string_view text) {
  auto fail = [&] { return std::invalid_argument("ExactRational: malformed number '" + std::string(text) + "'"); };
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = s.substr(0, slash);
    const auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw fail();
    mpz_class d(std::string(den), 10);
    if (d == 0) throw std::invalid_argument("ExactRational: zero denominator");
    mpz_class n(std::string(num), 10);
    if (negative) n = -n;
    return ExactRational(mpq_class(n, d));
  }

  // decimal: digits [. digits] [e [sign] digits]
  std::string_view mantissa = s;
  long exponent = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = s.substr(0, e);
    std::string_view ex = s.substr(e + 1);
    bool ex_negative = false;
    if (!ex.empty() && (ex.front() == '+' || ex.front() == '-')) {
      ex_negative = ex.front() == '-';
      ex.remove_prefix(1);
    }
    if (!all_digits(ex) || ex.size() > 6) throw fail();
    exponent = std::stol(std::string(ex));
    if (ex_negative) exponent = -exponent;
  }
  std::string_view int_part = mantissa;
  std::string_view frac_part;
  if (const auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    int_part = mantissa.substr(0, dot);
    frac_part = mantissa.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) throw fail();
  if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part))) throw fail();

  mpz_class n(std::string(int_part) + std::string(frac_part), 10);
  if (negative) n = -n;
  exponent -= static_cast<long>(frac_part.size());
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  if (exponent >= 0) return ExactRational(mpq_class(mpz_class(n * scale), mpz_class(1)));
  return ExactRational(mpq_class(n, scale));
}

ExactRational& ExactRational::operator+=(const ExactRational& rhs) { value_ += rhs.value_; return *this; }
ExactRational& ExactRational::operator-=(const ExactRational& rhs) { value_ -= rhs.value_; return *this; }
ExactRational& ExactRational::operator*=(const ExactRational& rhs) { value_ *= rhs.value_; return *this; }
ExactRational& ExactRational::operator/=(const ExactRational& rhs) {
  if (rhs.is_zero()) throw std::domain_error("ExactRational: division by zero");
  value_ /= rhs.value_;
  return *this;
}

ExactRational ExactRational::operator-() const { return ExactRational(mpq_class(-value_)); }

bool operator==(const ExactRational& a, const ExactRational& b) { return a.value_ == b.value_; }

std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b) {
  const int c = cmp(a.value_, b.value_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

int ExactRational::sign() const { return sgn(value_); }
std::string ExactRational::numerator() const { return value_.get_num().get_str(); }
std::string ExactRational::denominator() const { return value_.get_den().get_str(); }
std::string ExactRational::to_string() const { return value_.get_str(); }

ExactRational abs(const ExactRational& x) { return ExactRational(mpq_class(::abs(x.raw()))); }

ExactRational pow(const ExactRational& x, unsigned long exponent) {
  mpz_class num;
  mpz_class den;
  mpz_pow_ui(num.get_mpz_t(), x.raw().get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), x.raw().get_den_mpz_t(), exponent);
  return ExactRational(mpq_class(num, den));
}

ExactRational ldexp(const ExactRational& x, long exponent) {
  mpq_class r;
  if (exponent >= 0) {
    mpq_mul_2exp(r.get_mpq_t(), x.raw().get_mpq_t(), static_cast<mp_bitcnt_t>(exponent));
  } else {
    mpq_div_2exp(r.get_mpq_t(), x.raw().get_mpq_t(), static_cast<mp_bitcnt_t>(-exponent));
  }
  return ExactRational(std::move(r));
}

const ExactRational& min(const ExactRational& a, const ExactRational& b) { return b < a ? b : a; }
const ExactRational& max(const ExactRational& a, const ExactRational& b) { return a < b ? b : a; }

// ---------------------------------------------------------------------------
// PrecisionContext

PrecisionContext make_context(Precision bits, std::optional<HPReal> tol) {
  if (bits < kMinPrecisionBits) {
    throw std::invalid_argument("precision_bits must be >= 53 (got " + std::to_string(bits) + ")");
  }
  if (!tol) {
    tol = exp2i(-static_cast<long>(bits / 2), bits);
  } else {
    if (tol->sign() <= 0 || *tol >= 1L) throw std::invalid_argument("tol must lie in (0, 1)");
    tol = tol->rounded(bits);
  }
  return PrecisionContext(bits, std::move(*tol));
}

PrecisionContext make_context(Precision bits, double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("tol must lie in (0, 1)");
  return make_context(bits, HPReal::from_double(tol, std::max(bits, kMinPrecisionBits)));
}

HPReal euler_gamma(const PrecisionContext& ctx) {
  // Brent-McMillan: gamma = U/V - log n + O(exp(-4n)), with
  //   B_k = B_{k-1} n^2 / k^2,  A_k = (A_{k-1} n^2 / k + B_k) / k.
  const Precision bits = ctx.precision_bits();
  const long n = static_cast<long>(std::ceil(static_cast<double>(bits + 8) * std::log(2.0) / 4.0)) + 1;
  const Precision work = bits + 32 + static_cast<Precision>(std::ceil(std::log2(static_cast<double>(n))));
  const long n_sq = n * n;

  HPReal a = -log(HPReal(n, work));
  HPReal b(1L, work);
  HPReal u = a;
  HPReal v = b;
  const HPReal eps = exp2i(-static_cast<long>(work), work);
  for (long k = 1;; ++k) {
    b *= n_sq;
    b /= k * k;
    a *= n_sq;
    a /= k;
    a += b;
    a /= k;
    u += a;
    v += b;
    if (k > n && b < eps * v && abs(a) < eps * abs(u)) break;
  }
  return (u / v).rounded(bits);
}

// ---------------------------------------------------------------------------
// Rng

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("Rng::uniform_int: empty range");
  const std::uint64_t range = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1U;
  if (range == 0) return static_cast<std::int64_t>(next_u64());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x = next_u64();
  while (x >= limit) x = next_u64();
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + x % range);
}

ExactRational Rng::uniform_dyadic() {
  const auto k = static_cast<long>(next_u64() >> 11);
  return ldexp(ExactRational(k), -53);
}

HPReal Rng::uniform_real(Precision bits) {
  const auto k = static_cast<long>(next_u64() >> 11);
  return ldexp(HPReal(k, std::max(bits, kMinPrecisionBits)), -53).rounded(bits);
}

}  // namespace momentfix

#ifndef MOMENTFIX_NUMERICS_HPP
#define MOMENTFIX_NUMERICS_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>
#include <mpfr.h>

namespace momentfix {

/// Raised when a numerical routine cannot deliver a result it is guaranteed
/// to have (e.g. a root bracket that never changes sign).
class NumericalFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument too close to a pole of a special function.
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

using Precision = unsigned;

/// Smallest working precision accepted anywhere in the library.
inline constexpr Precision kMinPrecisionBits = 53;

class ExactRational;

/// Arbitrary-precision binary floating-point real.
///
/// Every value owns its precision. Binary operations produce a result at the
/// larger of the operand precisions, rounded to nearest. Operations that would
/// produce an infinity or NaN throw std::domain_error, so an HPReal is always
/// finite.
class HPReal {
 public:
  HPReal();
  HPReal(long value, Precision bits);
  HPReal(const ExactRational& value, Precision bits);
  static HPReal from_double(double value, Precision bits);
  /// Parses a decimal literal ("0.25", "-1e-6") or a rational "p/q".
  static HPReal parse(std::string_view text, Precision bits);

  HPReal(const HPReal& other);
  HPReal(HPReal&& other) noexcept;
  HPReal& operator=(const HPReal& other);
  HPReal& operator=(HPReal&& other) noexcept;
  ~HPReal();

  [[nodiscard]] Precision precision() const;
  /// Copy rounded to `bits` of precision.
  [[nodiscard]] HPReal rounded(Precision bits) const;

  HPReal& operator+=(const HPReal& rhs);
  HPReal& operator-=(const HPReal& rhs);
  HPReal& operator*=(const HPReal& rhs);
  HPReal& operator/=(const HPReal& rhs);
  HPReal& operator+=(long rhs);
  HPReal& operator-=(long rhs);
  HPReal& operator*=(long rhs);
  HPReal& operator/=(long rhs);

  friend HPReal operator+(const HPReal& a, const HPReal& b);
  friend HPReal operator-(const HPReal& a, const HPReal& b);
  friend HPReal operator*(const HPReal& a, const HPReal& b);
  friend HPReal operator/(const HPReal& a, const HPReal& b);
  friend HPReal operator+(const HPReal& a, long b);
  friend HPReal operator-(const HPReal& a, long b);
  friend HPReal operator*(const HPReal& a, long b);
  friend HPReal operator/(const HPReal& a, long b);
  friend HPReal operator+(long a, const HPReal& b);
  friend HPReal operator-(long a, const HPReal& b);
  friend HPReal operator*(long a, const HPReal& b);
  friend HPReal operator/(long a, const HPReal& b);
  HPReal operator-() const;

  friend bool operator==(const HPReal& a, const HPReal& b);
  friend std::weak_ordering operator<=>(const HPReal& a, const HPReal& b);
  friend bool operator==(const HPReal& a, long b);
  friend std::weak_ordering operator<=>(const HPReal& a, long b);

  [[nodiscard]] int sign() const;
  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] bool is_integer() const;
  [[nodiscard]] double to_double() const;

  /// Decimal rendering with `significant_digits` digits; trailing zeros are
  /// dropped. Plain notation for decimal exponents in [-5, digits], otherwise
  /// scientific.
  [[nodiscard]] std::string to_string(int significant_digits) const;
  /// Rendering with enough digits to round-trip at this value's precision.
  [[nodiscard]] std::string to_string() const;

  [[nodiscard]] mpfr_srcptr raw() const { return value_; }
  /// Mutable access for wrappers over MPFR routines; the caller must leave
  /// the value finite.
  [[nodiscard]] mpfr_ptr raw_mut() { return value_; }

 private:
  void check_finite(const char* what) const;

  mpfr_t value_;
};

HPReal abs(const HPReal& x);
HPReal sqrt(const HPReal& x);
HPReal log(const HPReal& x);
HPReal pow(const HPReal& x, unsigned long exponent);
/// x * 2^exponent (exact).
HPReal ldexp(const HPReal& x, long exponent);
HPReal floor(const HPReal& x);
const HPReal& min(const HPReal& a, const HPReal& b);
const HPReal& max(const HPReal& a, const HPReal& b);
/// 2^exponent at the given precision.
HPReal exp2i(long exponent, Precision bits);
HPReal pi(Precision bits);

/// Number of decimal digits used to serialize a value of `bits` precision:
/// ceil(bits * log10(2)) + 2.
int decimal_digits_for(Precision bits);

/// Exact rational number in lowest terms with positive denominator.
class ExactRational {
 public:
  ExactRational() = default;
  ExactRational(long value);  // NOLINT(google-explicit-constructor)
  ExactRational(long numerator, long denominator);
  explicit ExactRational(mpq_class value);
  /// Accepts "p/q", integers and decimal literals such as "0.9" or "-1.5e-3";
  /// decimals are converted exactly (0.9 is 9/10).
  static ExactRational parse(std::string_view text);

  ExactRational& operator+=(const ExactRational& rhs);
  ExactRational& operator-=(const ExactRational& rhs);
  ExactRational& operator*=(const ExactRational& rhs);
  ExactRational& operator/=(const ExactRational& rhs);

  friend ExactRational operator+(ExactRational a, const ExactRational& b) { return a += b; }
  friend ExactRational operator-(ExactRational a, const ExactRational& b) { return a -= b; }
  friend ExactRational operator*(ExactRational a, const ExactRational& b) { return a *= b; }
  friend ExactRational operator/(ExactRational a, const ExactRational& b) { return a /= b; }
  ExactRational operator-() const;

  friend bool operator==(const ExactRational& a, const ExactRational& b);
  friend std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b);

  [[nodiscard]] int sign() const;
  [[nodiscard]] bool is_zero() const { return sign() == 0; }
  [[nodiscard]] std::string numerator() const;
  [[nodiscard]] std::string denominator() const;
  /// "p/q", or "p" when the denominator is 1.
  [[nodiscard]] std::string to_string() const;
  [[nodiscard]] const mpq_class& raw() const { return value_; }

 private:
  mpq_class value_;
};

ExactRational abs(const ExactRational& x);
ExactRational pow(const ExactRational& x, unsigned long exponent);
/// x * 2^exponent.
ExactRational ldexp(const ExactRational& x, long exponent);
const ExactRational& min(const ExactRational& a, const ExactRational& b);
const ExactRational& max(const ExactRational& a, const ExactRational& b);

class PrecisionContext;

/// Builds a context; tol defaults to 2^(-bits/2). Throws std::invalid_argument
/// for bits < 53 or tol outside (0, 1).
PrecisionContext make_context(Precision bits, std::optional<HPReal> tol = std::nullopt);
PrecisionContext make_context(Precision bits, double tol);

/// Working precision and the tolerance used by equality-style checks.
class PrecisionContext {
 public:
  [[nodiscard]] Precision precision_bits() const { return bits_; }
  [[nodiscard]] const HPReal& tol() const { return tol_; }
  /// Integer constant at the working precision.
  [[nodiscard]] HPReal real(long value) const { return HPReal(value, bits_); }
  [[nodiscard]] HPReal real(const ExactRational& value) const { return HPReal(value, bits_); }
  [[nodiscard]] HPReal parse(std::string_view text) const { return HPReal::parse(text, bits_); }

 private:
  friend PrecisionContext make_context(Precision, std::optional<HPReal>);
  PrecisionContext(Precision bits, HPReal tol) : bits_(bits), tol_(std::move(tol)) {}

  Precision bits_;
  HPReal tol_;
};

/// Euler's constant, computed with the Brent-McMillan series. Accurate to
/// 2^(-bits+4).
HPReal euler_gamma(const PrecisionContext& ctx);

/// Seedable generator with a platform-independent output stream.
///
/// The engine is std::mt19937_64, whose sequence is fixed by the C++
/// standard; every derived quantity is computed from raw 64-bit draws by
/// explicit integer arithmetic (no std:: distributions, whose algorithms are
/// implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform integer in [lo, hi] by rejection sampling.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  /// Uniform dyadic k / 2^53, k in [0, 2^53), as an exact rational.
  ExactRational uniform_dyadic();
  /// Uniform dyadic in [0, 1) stored at `bits` (exact for bits >= 53).
  HPReal uniform_real(Precision bits);

 private:
  std::mt19937_64 engine_;
};

}  // namespace momentfix

#endif  // MOMENTFIX_NUMERICS_HPP

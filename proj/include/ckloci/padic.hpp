#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "ckloci/errors.hpp"

namespace ckloci {

using Prime = std::uint32_t;

/// Returns p^k as a reference into a per-thread table. k must be >= 0.
const mpz_class& prime_power(Prime p, int k);

/// v_p(n) for a nonzero integer n.
int valuation_of(Prime p, const mpz_class& n);
int valuation_of(Prime p, long n);

bool is_prime(std::uint64_t n);

/// Working precision requested by a caller together with the ceiling used
/// when a computation has to be retried because of a PrecisionError.
struct PrecisionPolicy {
  int precision = 10;
  int max_precision = 40;
  int step = 10;

  PrecisionPolicy() = default;
  PrecisionPolicy(int n, int n_max, int step_ = 10);

  /// Next precision to try after a failure at `current`, or 0 when the
  /// ceiling has been reached.
  int escalate(int current) const;
};

/// An element of Q_p known to absolute precision O(p^N).
///
/// A nonzero value is stored as p^v * u + O(p^N) with gcd(u, p) = 1 and
/// 0 < u < p^(N - v). A value that is indistinguishable from zero at the
/// available precision carries only the envelope O(p^N).
///
/// Values are immutable after construction; every operation returns a new
/// value whose precision follows the usual propagation rules (sum: minimum of
/// absolute precisions, product: min(v_x + N_y, v_y + N_x)).
class PadicNumber {
 public:
  PadicNumber() = default;

  static PadicNumber zero(Prime p, int precision);
  static PadicNumber from_integer(Prime p, const mpz_class& n, int precision);
  static PadicNumber from_integer(Prime p, long n, int precision);
  static PadicNumber from_rational(Prime p, const mpq_class& r, int precision);
  /// p^valuation * unit + O(p^precision); unit may contain factors of p.
  static PadicNumber from_parts(Prime p, int valuation, mpz_class unit, int precision);
  /// Digits d_0, d_1, ... of d_0 p^v + d_1 p^(v+1) + ... + O(p^precision).
  static PadicNumber from_digits(Prime p, const std::vector<unsigned>& digits, int valuation,
                                 int precision);

  /// Parses `d0 + d1*p + d2*p^2 + ... + O(p^N)` (the printer's format).
  static PadicNumber parse(std::string_view text);

  Prime prime() const { return p_; }
  int precision() const { return prec_; }
  bool is_zero() const { return zero_; }
  /// Valuation of a nonzero value; for a zero-flagged value this is the
  /// precision (the best known lower bound).
  int valuation() const { return zero_ ? prec_ : val_; }
  int relative_precision() const { return zero_ ? 0 : prec_ - val_; }
  const mpz_class& unit() const { return unit_; }
  bool is_unit() const { return !zero_ && val_ == 0; }
  bool valid() const { return p_ != 0; }

  /// Integer representative in [0, p^N) of a value with valuation >= 0.
  mpz_class lift() const;
  /// Representative in (-p^N/2, p^N/2].
  mpz_class balanced_lift() const;
  /// Residue mod p of a value with valuation >= 0.
  unsigned residue() const;
  /// Base-p digits starting at p^0 (valuation >= 0) up to p^(N-1).
  std::vector<unsigned> digits() const;

  /// Same value with precision lowered to min(precision(), n).
  PadicNumber with_precision(int n) const;

  PadicNumber operator-() const;
  friend PadicNumber operator+(const PadicNumber& x, const PadicNumber& y);
  friend PadicNumber operator-(const PadicNumber& x, const PadicNumber& y);
  friend PadicNumber operator*(const PadicNumber& x, const PadicNumber& y);
  friend PadicNumber operator/(const PadicNumber& x, const PadicNumber& y);
  PadicNumber& operator+=(const PadicNumber& y) { return *this = *this + y; }
  PadicNumber& operator-=(const PadicNumber& y) { return *this = *this - y; }
  PadicNumber& operator*=(const PadicNumber& y) { return *this = *this * y; }
  PadicNumber& operator/=(const PadicNumber& y) { return *this = *this / y; }

  /// Exact scaling by an integer (no precision is lost beyond v_p(k)).
  PadicNumber mul_int(long k) const;
  PadicNumber div_int(long k) const;
  /// Exact multiplication by p^e.
  PadicNumber shift(int e) const;
  PadicNumber pow(unsigned e) const;
  PadicNumber inverse() const;

  /// True when x - y is zero at the common precision.
  bool indistinguishable_from(const PadicNumber& y) const;

  /// Representation equality (same value, same precision).
  friend bool operator==(const PadicNumber& x, const PadicNumber& y);

  std::string to_string() const;

 private:
  PadicNumber(Prime p, bool zero, int val, mpz_class unit, int prec)
      : p_(p), zero_(zero), val_(val), prec_(prec), unit_(std::move(unit)) {}

  static PadicNumber normalized(Prime p, int val, mpz_class unit, int prec);

  Prime p_ = 0;
  bool zero_ = true;
  int val_ = 0;
  int prec_ = 0;
  mpz_class unit_;
};

std::ostream& operator<<(std::ostream& os, const PadicNumber& x);

/// The (p-1)-st root of unity congruent to a mod p, to precision N.
PadicNumber teichmuller(Prime p, unsigned a, int precision);

/// The p-adic logarithm of a unit x, computed as log(x^(p-1)) / (p-1).
/// The result precision is capped at `precision`.
PadicNumber padic_log(const PadicNumber& x, int precision);
PadicNumber padic_log(const PadicNumber& x);

}  // namespace ckloci

#include "ckloci/padic.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <ostream>
#include <sstream>

#include "ckloci/polylog.hpp"

namespace ckloci {

namespace {

struct PowerTable {
  Prime p = 0;
  std::vector<mpz_class> powers;
};

thread_local PowerTable tls_powers;

void require_same_prime(const PadicNumber& x, const PadicNumber& y) {
  if (x.prime() != y.prime()) {
    throw DomainError("p-adic operands over different primes (" + std::to_string(x.prime()) +
                      " vs " + std::to_string(y.prime()) + ")");
  }
}

mpz_class mod_inverse(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw DomainError("element is not invertible modulo p^k");
  }
  return r;
}

std::string power_text(Prime p, int e) {
  if (e == 1) return std::to_string(p);
  return std::to_string(p) + "^" + std::to_string(e);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

long parse_long(std::string_view s, std::string_view context) {
  s = trim(s);
  long value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError("cannot parse integer '" + std::string(s) + "' in '" + std::string(context) +
                     "'");
  }
  return value;
}

// Parses "p" or "p^e" and returns e.
int parse_power(std::string_view s, Prime p, std::string_view context) {
  s = trim(s);
  auto caret = s.find('^');
  long base = parse_long(s.substr(0, caret), context);
  if (base != static_cast<long>(p)) {
    throw ParseError("term base " + std::to_string(base) + " does not match prime " +
                     std::to_string(p));
  }
  if (caret == std::string_view::npos) return 1;
  return static_cast<int>(parse_long(s.substr(caret + 1), context));
}

}  // namespace

const mpz_class& prime_power(Prime p, int k) {
  if (k < 0) throw DomainError("negative exponent in prime_power");
  auto& t = tls_powers;
  if (t.p != p) {
    t.p = p;
    t.powers.clear();
    t.powers.emplace_back(1);
  }
  while (static_cast<int>(t.powers.size()) <= k) {
    t.powers.push_back(t.powers.back() * p);
  }
  return t.powers[static_cast<std::size_t>(k)];
}

int valuation_of(Prime p, const mpz_class& n) {
  if (n == 0) throw DomainError("valuation of zero");
  mpz_class tmp = n;
  mpz_class pp = p;
  return static_cast<int>(mpz_remove(tmp.get_mpz_t(), tmp.get_mpz_t(), pp.get_mpz_t()));
}

int valuation_of(Prime p, long n) {
  if (n == 0) throw DomainError("valuation of zero");
  int v = 0;
  while (n % static_cast<long>(p) == 0) {
    n /= static_cast<long>(p);
    ++v;
  }
  return v;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

PrecisionPolicy::PrecisionPolicy(int n, int n_max, int step_)
    : precision(n), max_precision(n_max), step(step_) {
  if (n <= 0) throw std::invalid_argument("precision must be positive");
  if (n > n_max) throw std::invalid_argument("precision exceeds the retry ceiling");
  if (step_ <= 0) throw std::invalid_argument("escalation step must be positive");
}

int PrecisionPolicy::escalate(int current) const {
  if (current >= max_precision) return 0;
  return std::min(max_precision, current + step);
}

// ---------------------------------------------------------------------------
// Construction

PadicNumber PadicNumber::normalized(Prime p, int val, mpz_class unit, int prec) {
  if (prec <= val) return zero(p, prec);
  const mpz_class& modulus = prime_power(p, prec - val);
  mpz_fdiv_r(unit.get_mpz_t(), unit.get_mpz_t(), modulus.get_mpz_t());
  if (unit == 0) return zero(p, prec);
  mpz_class pp = p;
  val += static_cast<int>(mpz_remove(unit.get_mpz_t(), unit.get_mpz_t(), pp.get_mpz_t()));
  if (val >= prec) return zero(p, prec);
  return PadicNumber(p, false, val, std::move(unit), prec);
}

PadicNumber PadicNumber::zero(Prime p, int precision) {
  if (p < 2) throw DomainError("p-adic numbers need a prime p >= 2");
  return PadicNumber(p, true, 0, mpz_class(0), precision);
}

PadicNumber PadicNumber::from_integer(Prime p, const mpz_class& n, int precision) {
  if (p < 2) throw DomainError("p-adic numbers need a prime p >= 2");
  return normalized(p, 0, n, precision);
}

PadicNumber PadicNumber::from_integer(Prime p, long n, int precision) {
  return from_integer(p, mpz_class(n), precision);
}

PadicNumber PadicNumber::from_rational(Prime p, const mpq_class& r, int precision) {
  if (p < 2) throw DomainError("p-adic numbers need a prime p >= 2");
  if (r == 0) return zero(p, precision);
  mpz_class num = r.get_num();
  mpz_class den = r.get_den();
  mpz_class pp = p;
  int vnum = static_cast<int>(mpz_remove(num.get_mpz_t(), num.get_mpz_t(), pp.get_mpz_t()));
  int vden = static_cast<int>(mpz_remove(den.get_mpz_t(), den.get_mpz_t(), pp.get_mpz_t()));
  int val = vnum - vden;
  if (precision <= val) return zero(p, precision);
  const mpz_class& modulus = prime_power(p, precision - val);
  mpz_class unit = num * mod_inverse(den, modulus);
  return normalized(p, val, std::move(unit), precision);
}

PadicNumber PadicNumber::from_parts(Prime p, int valuation, mpz_class unit, int precision) {
  if (p < 2) throw DomainError("p-adic numbers need a prime p >= 2");
  return normalized(p, valuation, std::move(unit), precision);
}

PadicNumber PadicNumber::from_digits(Prime p, const std::vector<unsigned>& digits, int valuation,
                                     int precision) {
  mpz_class unit = 0;
  for (std::size_t i = digits.size(); i-- > 0;) {
    unit = unit * p + digits[i];
  }
  return from_parts(p, valuation, std::move(unit), precision);
}

PadicNumber PadicNumber::parse(std::string_view text) {
  std::string_view s = trim(text);
  // Split on '+' at the top level.
  std::vector<std::string_view> terms;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == '+') {
      terms.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (terms.empty() || terms.back().size() < 4 || terms.back().substr(0, 2) != "O(" ||
      terms.back().back() != ')') {
    throw ParseError("p-adic expansion must end with an O(p^N) term: '" + std::string(text) + "'");
  }
  std::string_view big_o = terms.back();
  big_o = big_o.substr(2, big_o.size() - 3);
  auto caret = big_o.find('^');
  long prime_value = parse_long(big_o.substr(0, caret), text);
  if (prime_value < 2 || !is_prime(static_cast<std::uint64_t>(prime_value))) {
    throw ParseError("O-term base is not a prime: '" + std::string(text) + "'");
  }
  const Prime p = static_cast<Prime>(prime_value);
  const int precision =
      caret == std::string_view::npos ? 1 : static_cast<int>(parse_long(big_o.substr(caret + 1), text));
  terms.pop_back();

  PadicNumber result = zero(p, precision);
  for (std::string_view term : terms) {
    if (term.empty()) throw ParseError("empty term in '" + std::string(text) + "'");
    long coefficient = 1;
    int exponent = 0;
    auto star = term.find('*');
    if (star != std::string_view::npos) {
      coefficient = parse_long(term.substr(0, star), text);
      exponent = parse_power(term.substr(star + 1), p, text);
    } else if (term.find('^') != std::string_view::npos) {
      exponent = parse_power(term, p, text);
    } else {
      coefficient = parse_long(term, text);
      // A bare "p" denotes p^1 rather than the digit p at p^0.
      if (coefficient == static_cast<long>(p)) {
        coefficient = 1;
        exponent = 1;
      }
    }
    if (coefficient < 0) throw ParseError("negative digit in '" + std::string(text) + "'");
    result = result + from_parts(p, exponent, mpz_class(coefficient), precision);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Accessors

mpz_class PadicNumber::lift() const {
  if (zero_) return 0;
  if (val_ < 0) throw DomainError("lift of a p-adic number with negative valuation");
  return unit_ * prime_power(p_, val_);
}

mpz_class PadicNumber::balanced_lift() const {
  mpz_class x = lift();
  if (prec_ <= 0) return x;
  const mpz_class& modulus = prime_power(p_, prec_);
  if (2 * x > modulus) x -= modulus;
  return x;
}

unsigned PadicNumber::residue() const {
  if (zero_) {
    if (prec_ < 1) throw PrecisionError("residue of O(p^0) is unknown");
    return 0;
  }
  if (val_ < 0) throw DomainError("residue of a p-adic number with negative valuation");
  if (val_ > 0) return 0;
  return static_cast<unsigned>(mpz_fdiv_ui(unit_.get_mpz_t(), p_));
}

std::vector<unsigned> PadicNumber::digits() const {
  std::vector<unsigned> out;
  if (prec_ <= 0) return out;
  mpz_class x = lift();
  out.reserve(static_cast<std::size_t>(prec_));
  for (int i = 0; i < prec_; ++i) {
    out.push_back(static_cast<unsigned>(mpz_fdiv_q_ui(x.get_mpz_t(), x.get_mpz_t(), p_)));
  }
  return out;
}

PadicNumber PadicNumber::with_precision(int n) const {
  if (n >= prec_) return *this;
  if (zero_) return zero(p_, n);
  return normalized(p_, val_, unit_, n);
}

// ---------------------------------------------------------------------------
// Arithmetic

PadicNumber PadicNumber::operator-() const {
  if (zero_) return *this;
  return normalized(p_, val_, -unit_, prec_);
}

PadicNumber operator+(const PadicNumber& x, const PadicNumber& y) {
  require_same_prime(x, y);
  const Prime p = x.p_;
  const int prec = std::min(x.prec_, y.prec_);
  if (x.zero_) return y.with_precision(prec);
  if (y.zero_) return x.with_precision(prec);
  const int vmin = std::min(x.val_, y.val_);
  if (vmin >= prec) return PadicNumber::zero(p, prec);
  mpz_class sum = x.unit_;
  if (x.val_ > vmin) sum *= prime_power(p, x.val_ - vmin);
  if (y.val_ > vmin) {
    sum += y.unit_ * prime_power(p, y.val_ - vmin);
  } else {
    sum += y.unit_;
  }
  return PadicNumber::normalized(p, vmin, std::move(sum), prec);
}

PadicNumber operator-(const PadicNumber& x, const PadicNumber& y) { return x + (-y); }

PadicNumber operator*(const PadicNumber& x, const PadicNumber& y) {
  require_same_prime(x, y);
  const Prime p = x.p_;
  const int prec = std::min(x.valuation() + y.prec_, y.valuation() + x.prec_);
  if (x.zero_ || y.zero_) return PadicNumber::zero(p, prec);
  mpz_class prod = x.unit_ * y.unit_;
  return PadicNumber::normalized(p, x.val_ + y.val_, std::move(prod), prec);
}

PadicNumber operator/(const PadicNumber& x, const PadicNumber& y) {
  require_same_prime(x, y);
  if (y.zero_) throw PrecisionError("divisor indistinguishable from 0");
  const Prime p = x.p_;
  if (x.zero_) return PadicNumber::zero(p, x.prec_ - y.val_);
  const int rel = std::min(x.prec_ - x.val_, y.prec_ - y.val_);
  const int val = x.val_ - y.val_;
  const mpz_class& modulus = prime_power(p, rel);
  mpz_class q = x.unit_ * mod_inverse(y.unit_, modulus);
  return PadicNumber::normalized(p, val, std::move(q), val + rel);
}

PadicNumber PadicNumber::mul_int(long k) const {
  if (k == 0) return zero(p_, prec_);
  const int e = valuation_of(p_, k);
  long rest = k;
  for (int i = 0; i < e; ++i) rest /= static_cast<long>(p_);
  if (zero_) return zero(p_, prec_ + e);
  mpz_class u = unit_ * rest;
  return normalized(p_, val_ + e, std::move(u), prec_ + e);
}

PadicNumber PadicNumber::div_int(long k) const {
  if (k == 0) throw DomainError("division by the integer 0");
  const int e = valuation_of(p_, k);
  long rest = k;
  for (int i = 0; i < e; ++i) rest /= static_cast<long>(p_);
  if (zero_) return zero(p_, prec_ - e);
  const int rel = prec_ - val_;
  mpz_class u = unit_ * mod_inverse(mpz_class(rest), prime_power(p_, rel));
  return normalized(p_, val_ - e, std::move(u), prec_ - e);
}

PadicNumber PadicNumber::shift(int e) const {
  if (zero_) return zero(p_, prec_ + e);
  return PadicNumber(p_, false, val_ + e, unit_, prec_ + e);
}

PadicNumber PadicNumber::pow(unsigned e) const {
  if (e == 0) {
    // x^0 = 1 exactly; report the relative precision of x.
    return from_integer(p_, 1L, zero_ ? 0 : prec_ - val_);
  }
  if (zero_) {
    return zero(p_, prec_ * static_cast<int>(e));
  }
  // Relative precision is preserved under powers of a nonzero value.
  const int rel = prec_ - val_;
  mpz_class u;
  mpz_powm_ui(u.get_mpz_t(), unit_.get_mpz_t(), e, prime_power(p_, rel).get_mpz_t());
  const int val = val_ * static_cast<int>(e);
  return normalized(p_, val, std::move(u), val + rel);
}

PadicNumber PadicNumber::inverse() const { return from_integer(p_, 1L, std::max(prec_, prec_ - 2 * val_)) / *this; }

bool PadicNumber::indistinguishable_from(const PadicNumber& y) const { return (*this - y).is_zero(); }

bool operator==(const PadicNumber& x, const PadicNumber& y) {
  if (x.p_ != y.p_ || x.prec_ != y.prec_ || x.zero_ != y.zero_) return false;
  if (x.zero_) return true;
  return x.val_ == y.val_ && x.unit_ == y.unit_;
}

// ---------------------------------------------------------------------------
// Rendering

std::string PadicNumber::to_string() const {
  std::string out;
  if (!zero_) {
    mpz_class u = unit_;
    int e = val_;
    while (u != 0) {
      unsigned d = static_cast<unsigned>(mpz_fdiv_q_ui(u.get_mpz_t(), u.get_mpz_t(), p_));
      if (d != 0) {
        if (!out.empty()) out += " + ";
        if (e == 0) {
          out += std::to_string(d);
        } else if (d == 1) {
          out += power_text(p_, e);
        } else {
          out += std::to_string(d) + "*" + power_text(p_, e);
        }
      }
      ++e;
    }
  }
  if (!out.empty()) out += " + ";
  out += "O(" + power_text(p_, prec_) + ")";
  return out;
}

std::ostream& operator<<(std::ostream& os, const PadicNumber& x) { return os << x.to_string(); }

// ---------------------------------------------------------------------------
// Teichmuller lifts and the logarithm

PadicNumber teichmuller(Prime p, unsigned a, int precision) {
  if (p < 3 || !is_prime(p)) throw DomainError("teichmuller needs an odd prime");
  if (a == 0 || a >= p) throw DomainError("teichmuller residue must lie in [1, p-1]");
  if (precision <= 0) return PadicNumber::zero(p, precision);
  // Newton iteration on x^(p-1) - 1, doubling the number of correct digits.
  mpz_class x = a;
  int known = 1;
  while (known < precision) {
    known = std::min(2 * known, precision);
    const mpz_class& modulus = prime_power(p, known);
    mpz_class xpm2;
    mpz_powm_ui(xpm2.get_mpz_t(), x.get_mpz_t(), p - 2, modulus.get_mpz_t());
    mpz_class fx = xpm2 * x - 1;
    mpz_class dfx = xpm2 * (p - 1);
    x = x - fx * mod_inverse(dfx, modulus);
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), modulus.get_mpz_t());
  }
  return PadicNumber::from_integer(p, x, precision);
}

PadicNumber padic_log(const PadicNumber& x, int precision) {
  if (!x.is_unit()) throw DomainError("p-adic logarithm is only defined on units here");
  const Prime p = x.prime();
  if (p < 3) throw DomainError("p-adic logarithm needs an odd prime");
  const int target = std::min(precision, x.precision());
  const PadicNumber one = PadicNumber::from_integer(p, 1L, x.precision());
  const PadicNumber y = x.pow(p - 1) - one;  // in p Z_p
  const int k0 = log_truncation_index(p, target);
  PadicNumber sum = PadicNumber::zero(p, target);
  PadicNumber y_power = y;
  for (int k = 1; k < k0; ++k) {
    PadicNumber term = y_power.div_int(k);
    sum = (k % 2 == 1) ? sum + term : sum - term;
    y_power = y_power * y;
  }
  return sum.with_precision(target).div_int(static_cast<long>(p) - 1);
}

PadicNumber padic_log(const PadicNumber& x) { return padic_log(x, x.precision()); }

}  // namespace ckloci

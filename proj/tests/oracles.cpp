#include "oracles.hpp"

#include <cmath>

#include "ckloci/polylog.hpp"

namespace oracle {

mpz_class reduce(const mpq_class& r, unsigned p, int N) {
  mpz_class mod;
  mpz_ui_pow_ui(mod.get_mpz_t(), p, static_cast<unsigned long>(N));
  mpz_class inv;
  if (mpz_invert(inv.get_mpz_t(), r.get_den_mpz_t(), mod.get_mpz_t()) == 0) {
    throw std::invalid_argument("denominator divisible by p");
  }
  mpz_class x = r.get_num() * inv;
  mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
  return x;
}

std::vector<mpz_class> brute_roots(const std::vector<mpz_class>& f, unsigned p, int N) {
  mpz_class mod;
  mpz_ui_pow_ui(mod.get_mpz_t(), p, static_cast<unsigned long>(N));
  std::vector<mpz_class> out;
  for (mpz_class x = 0; x < mod; ++x) {
    mpz_class acc = 0;
    for (std::size_t k = f.size(); k-- > 0;) acc = (acc * x + f[k]) % mod;
    if (acc == 0) out.push_back(x);
  }
  return out;
}

std::vector<mpz_class> planted(const std::vector<mpz_class>& roots, const mpz_class& lead) {
  std::vector<mpz_class> c = {lead};
  for (const auto& r : roots) {
    std::vector<mpz_class> next(c.size() + 1, 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  return c;
}

int scan_log_index(unsigned p, int N) {
  for (int k = 1;; ++k) {
    if (k - std::log(static_cast<double>(k)) / std::log(static_cast<double>(p)) >= N - 1e-12) return k;
  }
}

int scan_polylog_index(unsigned p, int n, int N, int limit) {
  int last_bad = 0;
  for (int k = 1; k <= limit; ++k) {
    int fl = 0;
    for (long q = p; q <= k; q *= p) ++fl;
    if (k - n * fl < N) last_bad = k;
  }
  return last_bad + 1;
}

std::vector<mpz_class> binomial_identity_lhs(unsigned p) {
  std::vector<mpz_class> c(p + 1, 0);
  mpz_class b = 1;
  for (unsigned j = 0; j <= p; ++j) {
    if (j > 0) b = b * (p - j + 1) / j;
    c[j] += (j % 2 == 0) ? b : mpz_class(-b);
  }
  // - (-v)^p = v^p for odd p
  c[p] += (p % 2 == 1) ? 1 : -1;
  c[0] -= 1;
  return c;
}

ckloci::PadicNumber padic_exp(const ckloci::PadicNumber& x, int N) {
  const unsigned p = x.prime();
  // v_p(x^k / k!) >= k - (k-1)/(p-1) >= k/2; 2N + 4 terms is plenty.
  const int W = N + 2 * N + 8;
  ckloci::PadicNumber term = ckloci::PadicNumber::from_integer(p, 1L, W);
  ckloci::PadicNumber sum = term;
  for (long k = 1; k < 2 * N + 8; ++k) {
    term = (term * x.with_precision(W)).div_int(k);
    sum += term;
  }
  return sum.with_precision(N);
}

ckloci::PadicNumber zeta3_distribution(unsigned p, int N) {
  ckloci::PadicNumber s = ckloci::PadicNumber::zero(p, N);
  for (unsigned r = 2; r < p; ++r) s += ckloci::polylog_at_root_of_unity(p, r, 3, N);
  const long n = static_cast<long>(p) - 1;
  return -(s.mul_int(n * n)).div_int(n * n - 1);
}

bool wieferich_naive(std::uint64_t p, std::uint64_t b) {
  const unsigned __int128 m = static_cast<unsigned __int128>(p) * p;
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 0; i + 1 < p; ++i) acc = acc * (b % m) % m;
  return acc == 1;
}

std::vector<unsigned> primes_between(unsigned lo, unsigned hi) {
  std::vector<unsigned> out;
  for (unsigned n = std::max(lo, 2u); n <= hi; ++n) {
    bool prime = true;
    for (unsigned d = 2; d * d <= n; ++d) {
      if (n % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime) out.push_back(n);
  }
  return out;
}

bool agrees_at_printed_precision(const ckloci::PadicNumber& computed, const std::string& printed) {
  const auto ref = ckloci::PadicNumber::parse(printed);
  if (ref.prime() != computed.prime() || computed.precision() < ref.precision()) return false;
  return computed.with_precision(ref.precision()).to_string() == ref.to_string();
}

int slack(unsigned p, int k0) {
  int fl = 0;
  for (long q = p; q <= k0; q *= p) ++fl;
  return fl + 2;
}

}  // namespace oracle

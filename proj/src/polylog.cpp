#include "ckloci/polylog.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace ckloci {

namespace {

double log_p(Prime p, double x) { return std::log(x) / std::log(static_cast<double>(p)); }

void require_disc(Prime p, unsigned residue) {
  if (p < 3) throw DomainError("residue discs need an odd prime");
  if (residue == 1) throw DomainError("the residue disc of 1 is excluded");
  if (residue == 0 || residue >= p) throw DomainError("residue must lie in [2, p-1]");
}

}  // namespace

int floor_log(Prime p, long k) {
  if (k < 1) throw DomainError("floor_log of a non-positive number");
  int e = 0;
  while (k >= static_cast<long>(p)) {
    k /= static_cast<long>(p);
    ++e;
  }
  return e;
}

int log_truncation_index(Prime p, int N) {
  if (N <= 1) return 1;
  // k - log_p(k) >= N  <=>  k <= p^(k-N), which needs k >= N.
  for (int k = N;; ++k) {
    if (mpz_class(k) <= prime_power(p, k - N)) return k;
  }
}

int polylog_truncation_index(Prime p, int n, int N) {
  if (n < 0) throw DomainError("negative depth");
  // Beyond `limit`, k - n log_2(k) >= N and is increasing, so the bound holds.
  long limit = 1;
  const double turn = n / std::log(2.0);
  while (limit < turn || limit - n * std::log2(static_cast<double>(limit)) < N) ++limit;
  long last_bad = 0;
  for (long k = 1; k <= limit; ++k) {
    if (k - static_cast<long>(n) * floor_log(p, k) < N) last_bad = k;
  }
  return static_cast<int>(last_bad + 1);
}

std::vector<mpz_class> f_poly(Prime p) {
  if (!is_prime(p)) throw DomainError("f_poly needs a prime");
  // 1 - p f(v) = sum_{j<p} (-1)^j C(p,j) v^j, so f_j = -(-1)^j C(p,j) / p for j >= 1.
  std::vector<mpz_class> f(p, 0);
  mpz_class binom = 1;
  for (Prime j = 1; j < p; ++j) {
    binom = binom * (p - j + 1) / j;
    mpz_class c = binom / p;
    f[j] = (j % 2 == 0) ? mpz_class(-c) : c;
  }
  return f;
}

double g_constant(int m, Prime p) {
  const double pd = static_cast<double>(p);
  double c = pd / (pd - 1.0);
  for (int i = 2; i <= m; ++i) {
    c += (i - 1) * std::max(0.0, log_p(p, (i - 1) * (pd - 1.0) / std::log(pd)));
  }
  return c;
}

double g_lower_bound(Prime p, int m, long k) {
  const double pd = static_cast<double>(p);
  double b = static_cast<double>(k) / (pd - 1.0) - g_constant(m, p);
  if (m > 0) b -= m * log_p(p, static_cast<double>(k + m));
  return b;
}

int g_truncation_index(Prime p, int n, int M) {
  // Each bound increases once k + m > m (p-1)/ln p.
  const double pd = static_cast<double>(p);
  long k = 2;
  for (int m = 1; m <= n; ++m) {
    long turn = static_cast<long>(std::ceil(m * (pd - 1.0) / std::log(pd))) - m + 1;
    k = std::max(k, turn);
  }
  auto ok = [&](long kk) {
    for (int m = 0; m <= n; ++m) {
      if (g_lower_bound(p, m, kk) < M + 1e-9) return false;
    }
    return true;
  };
  while (!ok(k)) ++k;
  return static_cast<int>(k);
}

// ---------------------------------------------------------------------------

PadicNumber GSeriesTable::eval(int m, const PadicNumber& v) const {
  if (m < 0 || m > depth) throw DomainError("g-series index out of range");
  if (v.prime() != p) throw DomainError("g-series evaluated over a different prime");
  if (!v.is_zero() && v.valuation() < 0) throw DomainError("g-series evaluated outside Z_p");
  const int prec = std::min(order, v.precision());
  const mpz_class& modulus = prime_power(p, prec);
  const mpz_class x = v.lift();
  mpz_class acc = 0;
  const auto& coeffs = b[static_cast<std::size_t>(m)];
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    acc = acc * x + coeffs[k];
    mpz_fdiv_r(acc.get_mpz_t(), acc.get_mpz_t(), modulus.get_mpz_t());
  }
  return PadicNumber::from_integer(p, acc, prec);
}

GSeriesTable compute_g(Prime p, int n, int M) {
  if (p < 3 || !is_prime(p)) throw DomainError("compute_g needs an odd prime");
  if (n < 0) throw DomainError("negative depth");
  GSeriesTable t;
  t.p = p;
  t.depth = n;
  t.order = std::max(M, 0);
  t.k0 = g_truncation_index(p, n, t.order);
  t.delta = floor_log(p, t.k0 - 1);
  const int W = t.order + n * t.delta;
  for (int m = 0; m <= n; ++m) t.precision.push_back(W - m * t.delta);
  const int k0 = t.k0;
  const mpz_class& modW = prime_power(p, W);

  // D(v) = (1-v)^p - (-v)^p has degree p-1; E = 1/D by the linear recurrence.
  std::vector<mpz_class> binom(p + 1);
  binom[0] = 1;
  for (Prime j = 1; j <= p; ++j) binom[j] = binom[j - 1] * (p - j + 1) / j;
  std::vector<mpz_class> D(p);
  for (Prime j = 0; j < p; ++j) D[j] = (j % 2 == 0) ? binom[j] : mpz_class(-binom[j]);
  std::vector<mpz_class> E(static_cast<std::size_t>(k0));
  E[0] = 1;
  mpz_class acc;
  for (int k = 1; k < k0; ++k) {
    acc = 0;
    const int jmax = std::min<int>(k, static_cast<int>(p) - 1);
    for (int j = 1; j <= jmax; ++j) mpz_addmul(acc.get_mpz_t(), D[j].get_mpz_t(), E[k - j].get_mpz_t());
    acc = -acc;
    mpz_fdiv_r(acc.get_mpz_t(), acc.get_mpz_t(), modW.get_mpz_t());
    E[static_cast<std::size_t>(k)] = acc;
  }
  // g_0 = -(1-v) + (1-v)^p E.
  std::vector<mpz_class> g0(static_cast<std::size_t>(k0));
  for (int k = 0; k < k0; ++k) {
    acc = 0;
    const int jmax = std::min<int>(k, static_cast<int>(p));
    for (int j = 0; j <= jmax; ++j) {
      if (j % 2 == 0) {
        mpz_addmul(acc.get_mpz_t(), binom[j].get_mpz_t(), E[k - j].get_mpz_t());
      } else {
        mpz_submul(acc.get_mpz_t(), binom[j].get_mpz_t(), E[k - j].get_mpz_t());
      }
    }
    if (k == 0) acc -= 1;
    if (k == 1) acc += 1;
    mpz_fdiv_r(acc.get_mpz_t(), acc.get_mpz_t(), modW.get_mpz_t());
    g0[static_cast<std::size_t>(k)] = acc;
  }
  if (g0[0] != 0) throw std::logic_error("g_0(0) != 0");
  t.b.push_back(std::move(g0));

  // b_{m,k} = -(1/k)(b_{m-1,1} + ... + b_{m-1,k}).
  mpz_class pz = p;
  for (int m = 1; m <= n; ++m) {
    const int prev_prec = t.precision[static_cast<std::size_t>(m - 1)];
    const int prec = t.precision[static_cast<std::size_t>(m)];
    const mpz_class& mod = prime_power(p, prec);
    const auto& prev = t.b.back();
    std::vector<mpz_class> cur(static_cast<std::size_t>(k0));
    mpz_class sum = 0;
    mpz_class q, u, inv;
    for (int k = 1; k < k0; ++k) {
      sum += prev[static_cast<std::size_t>(k)];
      u = k;
      const int e = static_cast<int>(mpz_remove(u.get_mpz_t(), u.get_mpz_t(), pz.get_mpz_t()));
      q = sum;
      mpz_fdiv_r(q.get_mpz_t(), q.get_mpz_t(), prime_power(p, prev_prec).get_mpz_t());
      if (e > 0) {
        if (!mpz_divisible_p(q.get_mpz_t(), prime_power(p, e).get_mpz_t())) {
          throw std::logic_error("g-series coefficient with negative valuation at m=" +
                                 std::to_string(m) + ", k=" + std::to_string(k));
        }
        mpz_divexact(q.get_mpz_t(), q.get_mpz_t(), prime_power(p, e).get_mpz_t());
      }
      mpz_invert(inv.get_mpz_t(), u.get_mpz_t(), mod.get_mpz_t());
      q = -q * inv;
      mpz_fdiv_r(q.get_mpz_t(), q.get_mpz_t(), mod.get_mpz_t());
      cur[static_cast<std::size_t>(k)] = q;
    }
    t.b.push_back(std::move(cur));
  }

  // Every stored coefficient must respect max(0, bound) up to its precision.
  for (int m = 1; m <= n; ++m) {
    const int prec = t.precision[static_cast<std::size_t>(m)];
    for (int k = 1; k < k0; ++k) {
      const mpz_class& c = t.b[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)];
      if (c == 0) continue;
      const int v = valuation_of(p, c);
      if (v < prec && v + 1e-9 < g_lower_bound(p, m, k)) {
        throw std::logic_error("g-series coefficient violates its valuation bound");
      }
    }
  }
  return t;
}

// ---------------------------------------------------------------------------

SeriesApprox log_series(Prime p, unsigned residue, int N) {
  require_disc(p, residue);
  const int k0 = log_truncation_index(p, N);
  const PadicNumber zeta = teichmuller(p, residue, N + 2);
  const PadicNumber zinv = zeta.inverse();
  std::vector<PadicNumber> c;
  c.push_back(PadicNumber::zero(p, N));
  PadicNumber power = PadicNumber::from_integer(p, 1L, N + 2);
  for (int k = 1; k < k0; ++k) {
    power = (power * zinv).mul_int(-static_cast<long>(p));  // (-p/zeta)^k
    c.push_back((-power).div_int(k));
  }
  SeriesApprox s(p, N, std::move(c));
  return s;
}

PadicNumber polylog_at_root_of_unity(Prime p, unsigned residue, int m, int N) {
  require_disc(p, residue);
  if (m < 1) throw DomainError("polylog_at_root_of_unity needs m >= 1");
  const int M = std::max(N - m, 0);
  auto g = cached_g_table(p, m, M);
  const PadicNumber zeta = teichmuller(p, residue, M + 2);
  const PadicNumber one = PadicNumber::from_integer(p, 1L, M + 2);
  const PadicNumber v = one / (one - zeta);
  const mpz_class pm = prime_power(p, m);
  const PadicNumber factor = PadicNumber::from_rational(p, mpq_class(pm, pm - 1), M + 2 * m + 2);
  return (factor * g->eval(m, v)).with_precision(N);
}

PolylogDiscTable polylog_disc_series(Prime p, unsigned residue, int n, int N) {
  require_disc(p, residue);
  if (n < 0) throw DomainError("negative depth");
  PolylogDiscTable t;
  t.p = p;
  t.residue = residue;
  t.depth = n;
  t.order = N;
  const int k0 = polylog_truncation_index(p, n, N);
  const int delta = k0 >= 2 ? floor_log(p, k0 - 1) : 0;
  const int M = std::max(N, N + n * (delta - 1));
  const int zprec = M + 2;
  t.zeta = teichmuller(p, residue, zprec);
  t.log = log_series(p, residue, N);

  const PadicNumber one = PadicNumber::from_integer(p, 1L, zprec);
  const PadicNumber inv_one_minus = one / (one - t.zeta);
  // (-p/zeta)^j for j < k0.
  std::vector<PadicNumber> step(static_cast<std::size_t>(std::max(k0, 1)));
  step[0] = one;
  const PadicNumber ratio = (one / t.zeta).mul_int(-static_cast<long>(p));
  for (int j = 1; j < k0; ++j) step[static_cast<std::size_t>(j)] = step[static_cast<std::size_t>(j - 1)] * ratio;

  std::vector<PadicNumber> prev;
  prev.push_back(t.zeta * inv_one_minus);
  PadicNumber pw = inv_one_minus;
  for (int k = 1; k < k0; ++k) {
    pw = (pw * inv_one_minus).mul_int(static_cast<long>(p));  // p^k / (1-zeta)^(k+1)
    prev.push_back(pw);
  }
  prev.resize(static_cast<std::size_t>(k0), PadicNumber::zero(p, M));

  auto check_and_store = [&](int m, const std::vector<PadicNumber>& a) {
    std::vector<PadicNumber> capped;
    capped.reserve(a.size());
    for (int k = 0; k < k0; ++k) {
      const PadicNumber& c = a[static_cast<std::size_t>(k)];
      if (c.precision() < N) {
        throw std::logic_error("disc series lost precision below the requested order");
      }
      const int bound = k == 0 ? m : k - m * floor_log(p, k);
      if (!c.is_zero() && c.valuation() < std::min(bound, N)) {
        throw std::logic_error("disc series coefficient violates its valuation bound");
      }
      capped.push_back(c.with_precision(N));
    }
    SeriesApprox s(p, N, std::move(capped));
    s.trim();
    t.li.push_back(std::move(s));
  };
  check_and_store(0, prev);

  std::shared_ptr<const GSeriesTable> g;
  if (n >= 1) g = cached_g_table(p, n, M);
  const PadicNumber v = inv_one_minus;
  for (int m = 1; m <= n; ++m) {
    std::vector<PadicNumber> cur;
    cur.reserve(static_cast<std::size_t>(k0));
    const mpz_class pm = prime_power(p, m);
    const PadicNumber factor = PadicNumber::from_rational(p, mpq_class(pm, pm - 1), M + 2 * m + 2);
    cur.push_back(factor * g->eval(m, v));
    for (int k = 1; k < k0; ++k) {
      PadicNumber sum = PadicNumber::zero(p, M + k0 + 2);
      for (int j = 0; j < k; ++j) {
        sum += step[static_cast<std::size_t>(k - j)] * prev[static_cast<std::size_t>(j)];
      }
      cur.push_back((-sum).div_int(k));
    }
    check_and_store(m, cur);
    prev = std::move(cur);
  }
  return t;
}

PadicNumber polylog_eval(const PadicNumber& z, int m, int N) {
  if (!z.is_unit()) throw DomainError("polylog_eval needs a p-adic unit");
  const Prime p = z.prime();
  const unsigned r = z.residue();
  if (r == 1) throw DomainError("polylog_eval: z lies in the residue disc of 1");
  if (m < 0) throw DomainError("negative polylog index");
  auto table = cached_disc_table(p, r, m, N);
  const PadicNumber t = (z - table->zeta).shift(-1);
  return table->li[static_cast<std::size_t>(m)].eval(t);
}

// ---------------------------------------------------------------------------

namespace {

std::mutex memo_mutex;
std::map<std::tuple<Prime, int, int>, std::shared_ptr<const GSeriesTable>> g_memo;
std::map<std::tuple<Prime, unsigned, int, int>, std::shared_ptr<const PolylogDiscTable>> disc_memo;
std::shared_ptr<GTableStore> g_store;

}  // namespace

std::shared_ptr<const GSeriesTable> cached_g_table(Prime p, int n, int M) {
  const auto key = std::make_tuple(p, n, M);
  {
    std::lock_guard<std::mutex> lock(memo_mutex);
    // A deeper or more precise table for the same prime serves as well.
    for (auto it = g_memo.lower_bound(std::make_tuple(p, n, M)); it != g_memo.end(); ++it) {
      if (std::get<0>(it->first) != p) break;
      if (std::get<2>(it->first) >= M) return it->second;
    }
  }
  std::shared_ptr<GTableStore> store;
  {
    std::lock_guard<std::mutex> lock(memo_mutex);
    store = g_store;
  }
  std::shared_ptr<const GSeriesTable> table;
  if (store) table = store->load(p, n, M);
  if (!table || table->p != p || table->depth < n || table->order < M) {
    table = std::make_shared<const GSeriesTable>(compute_g(p, n, M));
    if (store) store->save(*table);
  }
  std::lock_guard<std::mutex> lock(memo_mutex);
  auto [it, inserted] = g_memo.emplace(key, table);
  return it->second;
}

void set_g_table_store(std::shared_ptr<GTableStore> store) {
  std::lock_guard<std::mutex> lock(memo_mutex);
  g_store = std::move(store);
}

std::shared_ptr<const PolylogDiscTable> cached_disc_table(Prime p, unsigned residue, int n, int N) {
  const auto key = std::make_tuple(p, residue, n, N);
  {
    std::lock_guard<std::mutex> lock(memo_mutex);
    auto it = disc_memo.find(key);
    if (it != disc_memo.end()) return it->second;
  }
  auto table = std::make_shared<const PolylogDiscTable>(polylog_disc_series(p, residue, n, N));
  std::lock_guard<std::mutex> lock(memo_mutex);
  auto [it, inserted] = disc_memo.emplace(key, table);
  return it->second;
}

void clear_polylog_memo() {
  std::lock_guard<std::mutex> lock(memo_mutex);
  g_memo.clear();
  disc_memo.clear();
}

}  // namespace ckloci

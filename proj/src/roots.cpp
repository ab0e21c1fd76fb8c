#include "ckloci/roots.hpp"

#include <algorithm>

namespace ckloci {

namespace {

struct IntRoot {
  mpz_class value;
  int precision;
  int dval;
};

using Poly = std::vector<mpz_class>;

mpz_class eval_mod(const Poly& c, const mpz_class& x, const mpz_class& mod) {
  mpz_class acc = 0;
  for (std::size_t k = c.size(); k-- > 0;) {
    acc = acc * x + c[k];
    mpz_fdiv_r(acc.get_mpz_t(), acc.get_mpz_t(), mod.get_mpz_t());
  }
  return acc;
}

mpz_class eval_derivative_mod(const Poly& c, const mpz_class& x, const mpz_class& mod) {
  mpz_class acc = 0;
  for (std::size_t k = c.size(); k-- > 1;) {
    acc = acc * x + c[k] * static_cast<unsigned long>(k);
    mpz_fdiv_r(acc.get_mpz_t(), acc.get_mpz_t(), mod.get_mpz_t());
  }
  return acc;
}

unsigned long eval_small(const Poly& c, unsigned long x, Prime p) {
  unsigned long acc = 0;
  for (std::size_t k = c.size(); k-- > 0;) {
    acc = (acc * x + mpz_fdiv_ui(c[k].get_mpz_t(), p)) % p;
  }
  return acc;
}

// Coefficients of c(a + p s) modulo p^N.
Poly substitute(const Poly& c, const mpz_class& a, Prime p, const mpz_class& mod) {
  Poly g(c);
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = n - 1; k-- > i;) {
      g[k] += a * g[k + 1];
      mpz_fdiv_r(g[k].get_mpz_t(), g[k].get_mpz_t(), mod.get_mpz_t());
    }
  }
  mpz_class scale = 1;
  for (std::size_t k = 0; k < n; ++k) {
    g[k] *= scale;
    mpz_fdiv_r(g[k].get_mpz_t(), g[k].get_mpz_t(), mod.get_mpz_t());
    scale *= p;
  }
  return g;
}

std::vector<IntRoot> find_roots(const Poly& c, int N, Prime p) {
  std::vector<IntRoot> out;
  const mpz_class& mod = prime_power(p, N);
  for (unsigned long a = 0; a < p; ++a) {
    if (eval_small(c, a, p) != 0) continue;
    mpz_class az = a;
    mpz_class df = eval_derivative_mod(c, az, mod);
    if (mpz_fdiv_ui(df.get_mpz_t(), p) != 0) {
      // Simple root mod p: Newton converges to the unique lift.
      mpz_class x = az, inv, fx;
      for (int known = 1; known < N; known *= 2) {
        fx = eval_mod(c, x, mod);
        df = eval_derivative_mod(c, x, mod);
        mpz_invert(inv.get_mpz_t(), df.get_mpz_t(), mod.get_mpz_t());
        x -= fx * inv;
        mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
      }
      out.push_back({x, N, 0});
      continue;
    }
    Poly g = substitute(c, az, p, mod);
    int mu = N;
    for (const auto& gk : g) {
      if (gk != 0) mu = std::min(mu, valuation_of(p, gk));
    }
    if (mu >= N) {
      throw PrecisionError("precision " + std::to_string(N) +
                           " cannot decide whether the root " + std::to_string(a) + " mod " +
                           std::to_string(p) + " lifts");
    }
    const int Nsub = N - mu;
    const mpz_class& pmu = prime_power(p, mu);
    for (auto& gk : g) mpz_divexact(gk.get_mpz_t(), gk.get_mpz_t(), pmu.get_mpz_t());
    for (auto& r : find_roots(g, Nsub, p)) {
      out.push_back({az + r.value * p, r.precision + 1, -1});
    }
  }
  return out;
}

bool digits_less(const PadicNumber& x, const PadicNumber& y) {
  const auto dx = x.digits();
  const auto dy = y.digits();
  return std::lexicographical_compare(dx.begin(), dx.end(), dy.begin(), dy.end());
}

}  // namespace

int NewtonPolygon::nonpositive_length() const {
  if (vertices.empty()) return 0;
  int len = vertices.front().first;
  for (const auto& s : segments) {
    if (s.rise <= 0) len += s.length();
  }
  return len;
}

std::pair<SeriesApprox, int> normalize(const SeriesApprox& f) {
  const int mu = f.min_valuation();
  if (mu >= f.order) throw PrecisionError("series indistinguishable from 0");
  std::vector<PadicNumber> c;
  c.reserve(f.coeffs.size());
  for (const auto& a : f.coeffs) c.push_back(a.shift(-mu));
  SeriesApprox g(f.p, f.order - mu, std::move(c));
  g.trim();
  return {std::move(g), mu};
}

int strassmann_bound(const SeriesApprox& f) {
  const int mu = f.min_valuation();
  if (mu >= f.order) throw PrecisionError("series indistinguishable from 0");
  int last = 0;
  for (int k = 0; k < f.k0(); ++k) {
    if (f[k].valuation() == mu) last = k;
  }
  return last;
}

NewtonPolygon newton_polygon(const SeriesApprox& f) {
  std::vector<std::pair<int, int>> pts;
  for (int k = 0; k < f.k0(); ++k) {
    const int v = f[k].valuation();
    if (v < f.order) pts.emplace_back(k, v);
  }
  if (pts.empty()) throw PrecisionError("series indistinguishable from 0");
  NewtonPolygon poly;
  auto& hull = poly.vertices;
  for (const auto& pt : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      // Drop b when it lies on or above the segment a -> pt.
      const long cross = static_cast<long>(b.first - a.first) * (pt.second - a.second) -
                         static_cast<long>(b.second - a.second) * (pt.first - a.first);
      if (cross <= 0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(pt);
  }
  for (std::size_t i = 1; i < hull.size(); ++i) {
    poly.segments.push_back({hull[i - 1].first, hull[i].first, hull[i].second - hull[i - 1].second});
  }
  // An unknown coefficient (valuation >= order) under the non-positive part
  // of the hull could move a vertex.
  int last_min = hull.front().first;
  int min_v = hull.front().second;
  for (const auto& v : hull) {
    if (v.second <= min_v) {
      min_v = v.second;
      last_min = v.first;
    }
  }
  for (const auto& s : poly.segments) {
    if (s.end > last_min) break;
    const int v0 = f[s.start].valuation();
    for (int k = s.start + 1; k < s.end; ++k) {
      if (f[k].valuation() < f.order) continue;
      // hull height at k is v0 + rise * (k - start) / length
      if (static_cast<long>(f.order) * s.length() <
          static_cast<long>(v0) * s.length() + static_cast<long>(s.rise) * (k - s.start)) {
        throw PrecisionError("Newton polygon vertex ambiguous at index " + std::to_string(k));
      }
    }
  }
  return poly;
}

std::vector<RootWithPrecision> zp_roots(const SeriesApprox& f) {
  auto [g, mu] = normalize(f);
  (void)mu;
  const Prime p = g.p;
  const int N = g.order;
  const mpz_class& mod = prime_power(p, N);
  Poly c;
  c.reserve(g.coeffs.size());
  for (const auto& a : g.coeffs) {
    mpz_class x = a.lift();
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
    c.push_back(x);
  }
  std::vector<RootWithPrecision> out;
  for (auto& r : find_roots(c, N, p)) {
    out.push_back({PadicNumber::from_integer(p, r.value, r.precision), r.dval});
  }
  std::sort(out.begin(), out.end(), [](const RootWithPrecision& a, const RootWithPrecision& b) {
    return digits_less(a.root, b.root);
  });
  return out;
}

}  // namespace ckloci

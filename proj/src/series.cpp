#include "ckloci/series.hpp"

#include <algorithm>

namespace ckloci {

namespace {

void require_same_prime(const SeriesApprox& f, const SeriesApprox& g) {
  if (f.p != g.p) throw DomainError("series over different primes");
}

// Lowest tracked precision among the coefficients, capped by `order`.
int settle_order(const std::vector<PadicNumber>& coeffs, int order) {
  for (const auto& c : coeffs) order = std::min(order, c.precision());
  return order;
}

}  // namespace

SeriesApprox::SeriesApprox(Prime p_, int order_, std::vector<PadicNumber> coeffs_) : p(p_) {
  order = settle_order(coeffs_, order_);
  coeffs.reserve(coeffs_.size());
  for (auto& c : coeffs_) coeffs.push_back(c.with_precision(order));
}

SeriesApprox SeriesApprox::from_integers(Prime p, const std::vector<mpz_class>& coeffs, int order) {
  std::vector<PadicNumber> out;
  out.reserve(coeffs.size());
  for (const auto& c : coeffs) out.push_back(PadicNumber::from_integer(p, c, order));
  return SeriesApprox(p, order, std::move(out));
}

int SeriesApprox::min_valuation() const {
  int v = order;
  for (const auto& c : coeffs) v = std::min(v, c.valuation());
  return v;
}

PadicNumber SeriesApprox::eval(const PadicNumber& t) const {
  if (t.prime() != p) throw DomainError("evaluation point over a different prime");
  if (!t.is_zero() && t.valuation() < 0) throw DomainError("series evaluated outside Z_p");
  PadicNumber acc = PadicNumber::zero(p, order);
  for (int k = k0(); k-- > 0;) {
    acc = acc * t + coeffs[static_cast<std::size_t>(k)];
  }
  return acc.with_precision(order);
}

void SeriesApprox::trim() {
  while (!coeffs.empty() && coeffs.back().valuation() >= order) coeffs.pop_back();
}

SeriesApprox SeriesApprox::truncated(int new_order) const {
  SeriesApprox out(p, std::min(order, new_order), coeffs);
  out.trim();
  return out;
}

SeriesApprox operator+(const SeriesApprox& f, const SeriesApprox& g) {
  require_same_prime(f, g);
  const int order = std::min(f.order, g.order);
  const int n = std::max(f.k0(), g.k0());
  std::vector<PadicNumber> c;
  c.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    PadicNumber x = k < f.k0() ? f[k] : PadicNumber::zero(f.p, order);
    PadicNumber y = k < g.k0() ? g[k] : PadicNumber::zero(f.p, order);
    c.push_back(x + y);
  }
  SeriesApprox out(f.p, order, std::move(c));
  out.trim();
  return out;
}

SeriesApprox operator-(const SeriesApprox& f, const SeriesApprox& g) {
  SeriesApprox neg = g;
  for (auto& c : neg.coeffs) c = -c;
  return f + neg;
}

SeriesApprox operator*(const SeriesApprox& f, const SeriesApprox& g) {
  require_same_prime(f, g);
  // The dropped tails contribute at valuation >= N_f + minval(g) and N_g + minval(f).
  const int order = std::min(f.order + g.min_valuation(), g.order + f.min_valuation());
  if (f.k0() == 0 || g.k0() == 0) return SeriesApprox(f.p, order, {});
  const int n = f.k0() + g.k0() - 1;
  std::vector<PadicNumber> c(static_cast<std::size_t>(n), PadicNumber::zero(f.p, order));
  for (int i = 0; i < f.k0(); ++i) {
    if (f[i].valuation() >= order) continue;
    for (int j = 0; j < g.k0(); ++j) {
      c[static_cast<std::size_t>(i + j)] += f[i] * g[j];
    }
  }
  SeriesApprox out(f.p, order, std::move(c));
  out.trim();
  return out;
}

SeriesApprox operator*(const PadicNumber& s, const SeriesApprox& f) {
  if (s.prime() != f.p) throw DomainError("scalar over a different prime");
  const int order = std::min(s.valuation() + f.order, s.precision() + f.min_valuation());
  std::vector<PadicNumber> c;
  c.reserve(f.coeffs.size());
  for (const auto& a : f.coeffs) c.push_back(s * a);
  SeriesApprox out(f.p, order, std::move(c));
  out.trim();
  return out;
}

SeriesApprox compose_affine(const SeriesApprox& f, const PadicNumber& a, int e) {
  if (e < 1) throw DomainError("compose_affine needs a positive shift");
  if (!a.is_zero() && a.valuation() < 0) throw DomainError("compose_affine needs a in Z_p");
  const int n = f.k0();
  // Taylor shift f(a + u), then scale u = p^e s.
  std::vector<PadicNumber> c(f.coeffs);
  for (int i = 0; i < n; ++i) {
    for (int k = n - 2; k >= i; --k) {
      c[static_cast<std::size_t>(k)] += a * c[static_cast<std::size_t>(k + 1)];
    }
  }
  for (int k = 0; k < n; ++k) c[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k)].shift(e * k);
  SeriesApprox out(f.p, f.order, std::move(c));
  out.trim();
  return out;
}

SeriesApprox derivative(const SeriesApprox& f) {
  std::vector<PadicNumber> c;
  for (int k = 1; k < f.k0(); ++k) c.push_back(f[k].mul_int(k));
  // The tail k a_k t^(k-1) still has valuation >= order.
  SeriesApprox out(f.p, f.order, std::move(c));
  out.trim();
  return out;
}

}  // namespace ckloci

#pragma once

#include <vector>

#include "ckloci/padic.hpp"

namespace ckloci {

/// Order-N approximation of a power series f(t) = sum a_k t^k converging on Z_p.
///
/// coeffs holds a_0 .. a_{k0-1}; each is correct modulo p^order and every
/// dropped coefficient (k >= k0) has valuation >= order. Coefficients carry
/// precision exactly `order`.
struct SeriesApprox {
  Prime p = 0;
  int order = 0;
  std::vector<PadicNumber> coeffs;

  SeriesApprox() = default;
  SeriesApprox(Prime p_, int order_, std::vector<PadicNumber> coeffs_);

  /// Builds a series from exact integer coefficients at the given order.
  static SeriesApprox from_integers(Prime p, const std::vector<mpz_class>& coeffs, int order);

  int k0() const { return static_cast<int>(coeffs.size()); }
  const PadicNumber& operator[](int k) const { return coeffs[static_cast<std::size_t>(k)]; }

  /// Smallest valuation over the known coefficients, or `order` if every
  /// coefficient is indistinguishable from zero.
  int min_valuation() const;

  /// Value at t in Z_p (Horner, with tracked precision).
  PadicNumber eval(const PadicNumber& t) const;

  /// Drops trailing coefficients whose valuation is >= order.
  void trim();

  SeriesApprox truncated(int new_order) const;
};

SeriesApprox operator+(const SeriesApprox& f, const SeriesApprox& g);
SeriesApprox operator-(const SeriesApprox& f, const SeriesApprox& g);
SeriesApprox operator*(const SeriesApprox& f, const SeriesApprox& g);
SeriesApprox operator*(const PadicNumber& c, const SeriesApprox& f);

/// f(a + p^e s) as a series in s, for a in Z_p and e >= 1.
SeriesApprox compose_affine(const SeriesApprox& f, const PadicNumber& a, int e = 1);

/// Formal derivative d/dt.
SeriesApprox derivative(const SeriesApprox& f);

}  // namespace ckloci

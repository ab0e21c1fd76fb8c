#pragma once

#include <utility>
#include <vector>

#include "ckloci/series.hpp"

namespace ckloci {

/// A root alpha in Z_p of an inexact series, known to alpha.precision() digits.
struct RootWithPrecision {
  PadicNumber root;
  /// d = v_p(f'(a)) at the approximation, or -1 when the root was obtained
  /// through one or more substitutions t = a + p s.
  int derivative_valuation = 0;
};

struct NewtonSegment {
  int start = 0;
  int end = 0;
  int rise = 0;  // valuation change from start to end

  int length() const { return end - start; }
  double slope() const { return static_cast<double>(rise) / length(); }
};

/// Lower convex hull of the points (k, v_p(c_k)) over known coefficients.
struct NewtonPolygon {
  std::vector<std::pair<int, int>> vertices;
  std::vector<NewtonSegment> segments;

  /// Total length of segments with slope <= 0, an upper bound for the number
  /// of roots in Z_p counted with multiplicity.
  int nonpositive_length() const;
};

/// Divides by p^mu, mu the smallest coefficient valuation; returns mu.
std::pair<SeriesApprox, int> normalize(const SeriesApprox& f);

/// Last index attaining the minimal coefficient valuation.
int strassmann_bound(const SeriesApprox& f);

NewtonPolygon newton_polygon(const SeriesApprox& f);

/// All roots in Z_p of every series congruent to f modulo p^order, each to its
/// certified precision, sorted by digit expansion. Throws PrecisionError when
/// some residue class can neither be lifted nor ruled out.
std::vector<RootWithPrecision> zp_roots(const SeriesApprox& f);

}  // namespace ckloci

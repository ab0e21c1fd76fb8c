#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ckloci/padic.hpp"
#include "ckloci/series.hpp"

namespace ckloci {

enum class PointStatus { Root, Confirmed, Unresolved };

std::string to_string(PointStatus s);
PointStatus point_status_from_string(const std::string& s);

struct LocusPoint {
  unsigned disc = 0;
  PadicNumber z;
  PointStatus status = PointStatus::Root;
};

/// Points of a refined Chabauty-Kim locus, sorted by (disc, digits).
struct CKLocus {
  Prime p = 0;
  unsigned q = 0;
  int depth = 2;
  std::string refinement = "(1,0)";
  int precision = 0;
  std::vector<LocusPoint> points;
  /// Precisions tried before the reported one (empty when none failed).
  std::vector<int> escalations;

  std::map<unsigned, int> disc_counts() const;
  std::size_t size() const { return points.size(); }
};

/// Constants of the depth 2 and depth 4 equations:
///   log2 logq Li2(z) - a_q2 log(z) Li1(z) = 0,
///   a Li4(z) + b log(z) Li3(z) + c log(z)^3 Li1(z) = 0.
struct CoeffSet {
  PadicNumber a_q2;
  PadicNumber a;
  PadicNumber b;
  PadicNumber c;
  std::string provenance;
};

/// Throws DomainError unless p and q are odd primes with p not in S = {2, q}.
void require_auxiliary(Prime p, unsigned q);

/// Points of X(Z[1/6]) with refinement (1,0).
const std::vector<long>& integral_points_q3();

/// a_{tau_q tau_2} from the closed forms or a Steinberg decomposition.
PadicNumber resolve_a_q2(Prime p, unsigned q, int N);

SeriesApprox f2_series(Prime p, unsigned q, unsigned residue, int N, const PadicNumber& a_q2);

/// Throws PrecisionError naming the disc that could not be resolved.
CKLocus depth2_locus(Prime p, unsigned q, int N, const PadicNumber& a_q2);

/// Depth 4 coefficients for q = 3 from the 2x2 minors of the rows at 3 and 9.
CoeffSet coeffs_z16(Prime p, int N);

/// Depth 4 coefficients for q = 3 from the period formulas, given a value
/// for the zeta constant a_{sigma_3}.
CoeffSet coeffs_from_periods(Prime p, int N, const PadicNumber& zeta3);

/// a Li4(z) + b log(z) Li3(z) + c log(z)^3 Li1(z), with polylogarithms at order N.
PadicNumber f4_eval(const PadicNumber& z, int N, const CoeffSet& coeffs);

/// Depth 2 locus at precision N filtered by f4. Points matching a known
/// integral point are CONFIRMED; survivors that f4 cannot separate from a
/// root are UNRESOLVED.
CKLocus depth4_locus(Prime p, unsigned q, int N, const CoeffSet& coeffs);

/// q = 3 depth 4 locus, raising the precision while points stay UNRESOLVED
/// or a PrecisionError occurs.
CKLocus depth4_locus_adaptive(Prime p, const PrecisionPolicy& policy);

/// Roots of unity zeta != 1 with Li2(zeta) indistinguishable from 0
/// (the (1,1) locus, where log(z) = 0 forces z to be a root of unity).
CKLocus locus_11(Prime p, const PrecisionPolicy& policy);

struct KimReport {
  Prime p = 0;
  bool pass = false;
  std::string verdict;  // PASS or INCONCLUSIVE
  int precision = 0;
  std::size_t depth2_size = 0;
  std::size_t depth4_size = 0;
  std::size_t unresolved = 0;
  std::size_t locus11_size = 0;
  std::vector<int> escalations;
  std::string note;
};

KimReport verify_kim(Prime p, int N, int N_max);

std::string render_listing(const CKLocus& locus);
std::string to_json(const CKLocus& locus);
CKLocus locus_from_json(const std::string& text);

}  // namespace ckloci

#pragma once

#include <memory>
#include <vector>

#include "ckloci/padic.hpp"
#include "ckloci/series.hpp"

namespace ckloci {

/// Smallest k0 >= 1 with k0 - log_p(k0) >= N.
int log_truncation_index(Prime p, int N);

/// Smallest k0 >= 1 such that k - n*floor(log_p k) >= N for every k >= k0.
int polylog_truncation_index(Prime p, int n, int N);

/// floor(log_p k) for k >= 1.
int floor_log(Prime p, long k);

/// Coefficients f_0 .. f_{p-1} of the integer polynomial f with
/// (1-v)^p - (-v)^p = 1 - p f(v).
std::vector<mpz_class> f_poly(Prime p);

/// Constant c(m, p) in the lower bound
///   v_p(b_{m,k}) >= k/(p-1) - m log_p(k+m) - c(m, p)
/// for the coefficients of g_m. For m = 0 the bound is (k-p)/(p-1), read off
/// from the degree of (1-v)^p f(v)^i. For m >= 1 it follows by induction from
/// b_{m,k} = -(1/k)(b_{m-1,1} + ... + b_{m-1,k}): the partial sums equal minus
/// the tails because g_{m-1}(1) = 0, and the term (i-1) log_p((i-1)(p-1)/ln p)
/// absorbs the dip of the level i-1 bound before it starts increasing.
double g_constant(int m, Prime p);
double g_lower_bound(Prime p, int m, long k);

/// Smallest k0 >= 2 past which g_lower_bound(p, m, k) >= M for all m <= n.
int g_truncation_index(Prime p, int n, int M);

/// Order-M approximations of g_0 .. g_n, where Li_m(z) - p^-m Li_m(z^p) = g_m(1/(1-z)).
/// All coefficients are p-adic integers; level m is stored modulo p^precision[m].
struct GSeriesTable {
  Prime p = 0;
  int depth = 0;
  int order = 0;
  int k0 = 0;
  int delta = 0;
  std::vector<int> precision;
  std::vector<std::vector<mpz_class>> b;

  /// g_m(v) for v in Z_p, to precision `order`.
  PadicNumber eval(int m, const PadicNumber& v) const;
};

GSeriesTable compute_g(Prime p, int n, int M);

/// Power series of log(zeta + p t) and Li_m(zeta + p t), m = 0..depth, on
/// the residue disc of a Teichmuller representative zeta != 1.
struct PolylogDiscTable {
  Prime p = 0;
  unsigned residue = 0;
  int depth = 0;
  int order = 0;
  PadicNumber zeta;
  SeriesApprox log;
  std::vector<SeriesApprox> li;
};

SeriesApprox log_series(Prime p, unsigned residue, int N);
PolylogDiscTable polylog_disc_series(Prime p, unsigned residue, int n, int N);

/// Li_m(zeta) for the Teichmuller representative of `residue`, m >= 1.
PadicNumber polylog_at_root_of_unity(Prime p, unsigned residue, int m, int N);

/// Li_m(z) for a unit z with z != 1 mod p; precision min(N, precision of z).
PadicNumber polylog_eval(const PadicNumber& z, int m, int N);

/// Optional persistent backing for g-series tables, consulted on a memo miss.
class GTableStore {
 public:
  virtual ~GTableStore() = default;
  /// A table with depth >= n and order >= M, or nullptr.
  virtual std::shared_ptr<const GSeriesTable> load(Prime p, int n, int M) = 0;
  virtual void save(const GSeriesTable& table) = 0;
};

/// Installs (or with nullptr removes) the store used by cached_g_table.
void set_g_table_store(std::shared_ptr<GTableStore> store);

/// Memoized tables, shared between threads. Insertions are serialized.
std::shared_ptr<const GSeriesTable> cached_g_table(Prime p, int n, int M);
std::shared_ptr<const PolylogDiscTable> cached_disc_table(Prime p, unsigned residue, int n, int N);
void clear_polylog_memo();

}  // namespace ckloci

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ckloci/padic.hpp"

namespace ckloci {

/// a = a_q2 / (log 2 log q), the constant of the normalized depth 2 function
/// Li2(z) - a log(z) Li1(z).
PadicNumber normalized_a(Prime p, unsigned q, const PadicNumber& a_q2, int N);

/// First three coefficients c0, c1, c2 of Li2(zeta + p t) - a log(zeta + p t) Li1(zeta + p t):
///   c0 = Li2(zeta)
///   c1 = p (1 - a) Li1(zeta) / zeta
///   c2 = p^2 (1 - 2a) / (2 zeta (1 - zeta)) - p^2 (1 - a) Li1(zeta) / (2 zeta^2)
std::array<PadicNumber, 3> f2_leading_coeffs(Prime p, unsigned residue, const PadicNumber& a, int N);

/// Strassmann bound for the depth 2 function on one residue disc. Returns
/// nullopt when v_p(a) >= 0 and a = 1/2 mod p, where the valuation pattern
/// gives no bound. Throws PrecisionError when the minimal coefficient
/// valuation cannot be located at order N.
std::optional<int> disc_root_bound(Prime p, unsigned q, unsigned residue, const PadicNumber& a_q2,
                                   int N);

/// b^(p-1) = 1 mod p^2. Throws DomainError when p divides b.
bool is_wieferich(Prime p, long b);

enum class A2Source {
  Auto,    // closed form when available, else Steinberg search
  Search,  // always run the Steinberg search
};

struct SurveyRecord {
  Prime p = 0;
  unsigned q = 0;
  std::size_t size = 0;
  /// histogram[k] = number of residue discs holding exactly k points.
  std::vector<int> histogram;
  /// v_p(a); nullopt when a is indistinguishable from 0.
  std::optional<int> nu;
  bool wieferich2 = false;
  bool wieferichq = false;
  /// Expected size from nu: "~p", "~2p" or "small-p".
  std::string regime;
  /// Band the computed size falls in: "~p", "~2p" or "other".
  std::string observed;
  int precision = 0;
  /// Empty unless the row failed at every precision tried.
  std::string error;
};

/// "~p" for size in [0.6p, 1.4p], "~2p" for [1.6p, 2p + 2], else "other".
std::string size_band(Prime p, std::size_t size);

struct SurveyOptions {
  int precision = 10;
  int max_precision = 40;
  A2Source source = A2Source::Auto;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Depth 2 loci for every prime p in [p_min, p_max] outside {2, q}, ordered by p.
std::vector<SurveyRecord> survey(unsigned q, Prime p_min, Prime p_max, const SurveyOptions& opts = {});

std::string survey_csv(const std::vector<SurveyRecord>& rows);
std::string survey_json(const std::vector<SurveyRecord>& rows);

}  // namespace ckloci

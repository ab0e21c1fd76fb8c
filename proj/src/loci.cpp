#include "ckloci/loci.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include <json.hpp>

#include "ckloci/polylog.hpp"
#include "ckloci/roots.hpp"
#include "ckloci/steinberg.hpp"

namespace ckloci {

namespace {

constexpr int kScalarGuard = 4;   // extra digits for log 2, log q, a_q2
constexpr int kDepth4Extra = 10;  // f4 is evaluated this many digits past N

bool digits_less(const PadicNumber& x, const PadicNumber& y) {
  const auto dx = x.digits();
  const auto dy = y.digits();
  return std::lexicographical_compare(dx.begin(), dx.end(), dy.begin(), dy.end());
}

void sort_points(std::vector<LocusPoint>& pts) {
  std::sort(pts.begin(), pts.end(), [](const LocusPoint& a, const LocusPoint& b) {
    if (a.disc != b.disc) return a.disc < b.disc;
    return digits_less(a.z, b.z);
  });
}

// (Li4(x), log(x) Li3(x), log(x)^3 Li1(x)).
std::array<PadicNumber, 3> depth4_row(const PadicNumber& x, int N) {
  const Prime p = x.prime();
  if (!x.is_unit()) throw DomainError("depth 4 functions need a unit argument");
  const unsigned r = x.residue();
  if (r == 1) throw DomainError("point lies in the residue disc of 1");
  auto table = cached_disc_table(p, r, 4, N);
  const PadicNumber t = (x - table->zeta).shift(-1);
  const PadicNumber li1 = table->li[1].eval(t);
  const PadicNumber li3 = table->li[3].eval(t);
  const PadicNumber li4 = table->li[4].eval(t);
  const PadicNumber lg = padic_log(x, N);
  return {li4, lg * li3, lg * lg * lg * li1};
}

PadicNumber exact_integer(Prime p, long x, int N) { return PadicNumber::from_integer(p, x, N); }

}  // namespace

void require_auxiliary(Prime p, unsigned q) {
  if (p < 3 || !is_prime(p)) throw DomainError("auxiliary prime must be an odd prime");
  if (!is_prime(q) || q == 2) throw DomainError("q must be an odd prime");
  if (p == q) throw DomainError("auxiliary prime p must not lie in S = {2, q}");
}

std::string to_string(PointStatus s) {
  switch (s) {
    case PointStatus::Root:
      return "ROOT";
    case PointStatus::Confirmed:
      return "CONFIRMED";
    case PointStatus::Unresolved:
      return "UNRESOLVED";
  }
  return "ROOT";
}

PointStatus point_status_from_string(const std::string& s) {
  if (s == "ROOT") return PointStatus::Root;
  if (s == "CONFIRMED") return PointStatus::Confirmed;
  if (s == "UNRESOLVED") return PointStatus::Unresolved;
  throw ParseError("unknown point status '" + s + "'");
}

std::map<unsigned, int> CKLocus::disc_counts() const {
  std::map<unsigned, int> counts;
  for (const auto& pt : points) ++counts[pt.disc];
  return counts;
}

const std::vector<long>& integral_points_q3() {
  static const std::vector<long> pts = {-3, -1, 3, 9};
  return pts;
}

PadicNumber resolve_a_q2(Prime p, unsigned q, int N) {
  require_auxiliary(p, q);
  if (q == 3) return -polylog_eval(exact_integer(p, 3, N), 2, N);
  return dcw_coefficient(p, N, default_decomposition(q, p));
}

SeriesApprox f2_series(Prime p, unsigned q, unsigned residue, int N, const PadicNumber& a_q2) {
  require_auxiliary(p, q);
  auto table = cached_disc_table(p, residue, 2, N);
  const int s = N + kScalarGuard;
  const PadicNumber log2 = padic_log(exact_integer(p, 2, s), s);
  const PadicNumber logq = padic_log(exact_integer(p, static_cast<long>(q), s), s);
  return (log2 * logq) * table->li[2] - a_q2 * (table->log * table->li[1]);
}

CKLocus depth2_locus(Prime p, unsigned q, int N, const PadicNumber& a_q2) {
  require_auxiliary(p, q);
  CKLocus locus;
  locus.p = p;
  locus.q = q;
  locus.depth = 2;
  locus.precision = N;
  for (unsigned r = 2; r < p; ++r) {
    const SeriesApprox f = f2_series(p, q, r, N, a_q2);
    std::vector<RootWithPrecision> roots;
    try {
      roots = zp_roots(f);
    } catch (const PrecisionError& e) {
      throw PrecisionError("residue disc " + std::to_string(r) + " (p=" + std::to_string(p) +
                           ", N=" + std::to_string(N) + "): " + e.what());
    }
    const PadicNumber& zeta = cached_disc_table(p, r, 2, N)->zeta;
    for (const auto& rt : roots) {
      locus.points.push_back({r, zeta + rt.root.shift(1), PointStatus::Root});
    }
  }
  sort_points(locus.points);
  return locus;
}

CoeffSet coeffs_z16(Prime p, int N) {
  require_auxiliary(p, 3);
  const auto r3 = depth4_row(exact_integer(p, 3, N), N);
  const auto r9 = depth4_row(exact_integer(p, 9, N), N);
  CoeffSet cs;
  cs.a_q2 = -polylog_eval(exact_integer(p, 3, N), 2, N);
  cs.a = r3[1] * r9[2] - r3[2] * r9[1];
  cs.b = -(r3[0] * r9[2] - r3[2] * r9[0]);
  cs.c = r3[0] * r9[1] - r3[1] * r9[0];
  cs.provenance = "q=3 determinant minors";
  if (cs.a.is_zero() && cs.b.is_zero() && cs.c.is_zero()) {
    throw PrecisionError("rows at 3 and 9 are indistinguishable at precision " + std::to_string(N));
  }
  return cs;
}

CoeffSet coeffs_from_periods(Prime p, int N, const PadicNumber& zeta3) {
  require_auxiliary(p, 3);
  const PadicNumber three = exact_integer(p, 3, N);
  const PadicNumber nine = exact_integer(p, 9, N);
  const PadicNumber log2 = padic_log(exact_integer(p, 2, N), N);
  const PadicNumber log3 = padic_log(three, N);
  const PadicNumber a32 = -polylog_eval(three, 2, N);
  const PadicNumber a332 = -polylog_eval(three, 3, N);
  const PadicNumber a3332 = -polylog_eval(three, 4, N);
  const PadicNumber a3s = PadicNumber::from_rational(p, mpq_class(18, 13), N) * polylog_eval(three, 4, N) -
                          PadicNumber::from_rational(p, mpq_class(3, 52), N) * polylog_eval(nine, 4, N);
  CoeffSet cs;
  cs.a_q2 = a32;
  cs.a = zeta3 * log3 * log3 * log3 * log2;
  cs.b = -(log3 * log3 * log2 * a3s);
  cs.c = -(zeta3 * a3332 - a3s * a332);
  cs.provenance = "periods formula";
  return cs;
}

PadicNumber f4_eval(const PadicNumber& z, int N, const CoeffSet& coeffs) {
  const auto row = depth4_row(z, N);
  return coeffs.a * row[0] + coeffs.b * row[1] + coeffs.c * row[2];
}

CKLocus depth4_locus(Prime p, unsigned q, int N, const CoeffSet& coeffs) {
  require_auxiliary(p, q);
  CKLocus d2 = depth2_locus(p, q, N, coeffs.a_q2);
  CKLocus out = d2;
  out.depth = 4;
  out.points.clear();
  for (const auto& pt : d2.points) {
    bool known = false;
    if (q == 3) {
      for (long x : integral_points_q3()) {
        if (pt.z.indistinguishable_from(exact_integer(p, x, pt.z.precision()))) known = true;
      }
    }
    if (known) {
      out.points.push_back({pt.disc, pt.z, PointStatus::Confirmed});
      continue;
    }
    const PadicNumber v = f4_eval(pt.z, N + kDepth4Extra, coeffs);
    if (v.is_zero()) out.points.push_back({pt.disc, pt.z, PointStatus::Unresolved});
  }
  return out;
}

CKLocus depth4_locus_adaptive(Prime p, const PrecisionPolicy& policy) {
  std::vector<int> failed;
  std::optional<CKLocus> last;
  for (int N = policy.precision;;) {
    try {
      const CoeffSet cs = coeffs_z16(p, N + kDepth4Extra);
      CKLocus locus = depth4_locus(p, 3, N, cs);
      locus.escalations = failed;
      const bool open = std::any_of(locus.points.begin(), locus.points.end(), [](const LocusPoint& x) {
        return x.status == PointStatus::Unresolved;
      });
      if (!open) return locus;
      last = std::move(locus);
    } catch (const PrecisionError&) {
      if (policy.escalate(N) == 0 && !last) throw;
    }
    const int next = policy.escalate(N);
    if (next == 0) break;
    failed.push_back(N);
    N = next;
  }
  return *last;
}

CKLocus locus_11(Prime p, const PrecisionPolicy& policy) {
  if (p < 3 || !is_prime(p)) throw DomainError("locus_11 needs an odd prime");
  std::vector<int> failed;
  for (int N = policy.precision; N != 0; N = policy.escalate(N)) {
    CKLocus locus;
    locus.p = p;
    locus.q = 0;
    locus.depth = 2;
    locus.refinement = "(1,1)";
    locus.precision = N;
    bool stray = false;
    for (unsigned r = 2; r < p; ++r) {
      if (!polylog_at_root_of_unity(p, r, 2, N).is_zero()) continue;
      const bool minus_one = r == p - 1;
      stray = stray || !minus_one;
      locus.points.push_back({r, teichmuller(p, r, N), minus_one ? PointStatus::Confirmed : PointStatus::Unresolved});
    }
    locus.escalations = failed;
    if (!stray) return locus;
    failed.push_back(N);
  }
  throw PrecisionError("Li2 vanishes at a root of unity other than -1 up to the precision ceiling (p=" +
                       std::to_string(p) + ")");
}

KimReport verify_kim(Prime p, int N, int N_max) {
  if (p < 5 || !is_prime(p)) throw DomainError("verify_kim needs a prime p >= 5");
  KimReport rep;
  rep.p = p;
  const PrecisionPolicy policy(N, N_max);
  try {
    const CKLocus d4 = depth4_locus_adaptive(p, policy);
    rep.precision = d4.precision;
    rep.escalations = d4.escalations;
    rep.depth4_size = d4.size();
    rep.depth2_size = d4.size();
    // Depth 2 size at the same precision (the depth 4 locus is a filtration of it).
    rep.depth2_size = depth2_locus(p, 3, d4.precision, resolve_a_q2(p, 3, d4.precision + kScalarGuard)).size();
    std::size_t confirmed = 0;
    for (const auto& pt : d4.points) {
      if (pt.status == PointStatus::Confirmed) ++confirmed;
      if (pt.status == PointStatus::Unresolved) ++rep.unresolved;
    }
    const CKLocus l11 = locus_11(p, policy);
    rep.locus11_size = l11.size();
    const bool l11_ok = l11.size() == 1 && l11.points[0].status == PointStatus::Confirmed;
    rep.pass = rep.unresolved == 0 && confirmed == integral_points_q3().size() &&
               d4.size() == confirmed && l11_ok;
    if (!rep.pass) {
      std::ostringstream note;
      note << confirmed << " confirmed, " << rep.unresolved << " unresolved, locus(1,1) size "
           << l11.size();
      rep.note = note.str();
    }
  } catch (const PrecisionError& e) {
    rep.pass = false;
    rep.note = e.what();
  }
  rep.verdict = rep.pass ? "PASS" : "INCONCLUSIVE";
  return rep;
}

std::string render_listing(const CKLocus& locus) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < locus.points.size(); ++i) {
    if (i > 0) os << ",\n ";
    os << locus.points[i].z.to_string();
  }
  os << "]";
  return os.str();
}

std::string to_json(const CKLocus& locus) {
  nlohmann::ordered_json j;
  j["p"] = locus.p;
  j["q"] = locus.q;
  j["depth"] = locus.depth;
  j["refinement"] = locus.refinement;
  j["precision"] = locus.precision;
  j["points"] = nlohmann::ordered_json::array();
  for (const auto& pt : locus.points) {
    nlohmann::ordered_json e;
    e["disc"] = pt.disc;
    e["digits"] = pt.z.digits();
    e["abs_prec"] = pt.z.precision();
    e["status"] = to_string(pt.status);
    j["points"].push_back(std::move(e));
  }
  j["escalations"] = locus.escalations;
  return j.dump();
}

CKLocus locus_from_json(const std::string& text) {
  CKLocus locus;
  try {
    const auto j = nlohmann::json::parse(text);
    locus.p = j.at("p").get<Prime>();
    locus.q = j.at("q").get<unsigned>();
    locus.depth = j.at("depth").get<int>();
    locus.refinement = j.at("refinement").get<std::string>();
    locus.precision = j.at("precision").get<int>();
    for (const auto& e : j.at("points")) {
      LocusPoint pt;
      pt.disc = e.at("disc").get<unsigned>();
      const auto digits = e.at("digits").get<std::vector<unsigned>>();
      pt.z = PadicNumber::from_digits(locus.p, digits, 0, e.at("abs_prec").get<int>());
      pt.status = point_status_from_string(e.at("status").get<std::string>());
      locus.points.push_back(std::move(pt));
    }
    if (j.contains("escalations")) locus.escalations = j.at("escalations").get<std::vector<int>>();
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("malformed locus JSON: ") + e.what());
  }
  return locus;
}

}  // namespace ckloci

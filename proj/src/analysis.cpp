#include "ckloci/analysis.hpp"

#include <algorithm>
#include <future>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ckloci/loci.hpp"
#include "ckloci/polylog.hpp"
#include "ckloci/roots.hpp"
#include "ckloci/steinberg.hpp"

namespace ckloci {

namespace {

constexpr int kScalarGuard = 4;
constexpr Prime kSmallPrime = 7;  // p <= 7 has too few discs for the size heuristics

PadicNumber integer(Prime p, long x, int N) { return PadicNumber::from_integer(p, x, N); }

PadicNumber a_q2_for(Prime p, unsigned q, int N, A2Source source) {
  if (source == A2Source::Auto) return resolve_a_q2(p, q, N);
  unsigned bound = std::max(20u, q + 1);
  for (int attempt = 0;; ++attempt) {
    try {
      return dcw_coefficient(p, N, steinberg_decompose(2, q, bound, p));
    } catch (const InsufficientBound&) {
      if (attempt == 4) throw;
      bound += 20;
    }
  }
}

SurveyRecord survey_row(unsigned q, Prime p, const SurveyOptions& opts) {
  SurveyRecord rec;
  rec.p = p;
  rec.q = q;
  rec.wieferich2 = is_wieferich(p, 2);
  rec.wieferichq = is_wieferich(p, static_cast<long>(q));
  const PrecisionPolicy policy(opts.precision, std::max(opts.precision, opts.max_precision));
  for (int N = policy.precision; N != 0; N = policy.escalate(N)) {
    rec.precision = N;
    try {
      const PadicNumber a_q2 = a_q2_for(p, q, N + kScalarGuard, opts.source);
      const PadicNumber a = normalized_a(p, q, a_q2, N + kScalarGuard);
      rec.nu.reset();
      if (!a.is_zero()) rec.nu = a.valuation();
      const CKLocus locus = depth2_locus(p, q, N, a_q2);
      rec.size = locus.size();
      const auto counts = locus.disc_counts();
      int top = 0;
      for (const auto& [r, c] : counts) top = std::max(top, c);
      rec.histogram.assign(static_cast<std::size_t>(top) + 1, 0);
      for (unsigned r = 2; r < p; ++r) {
        auto it = counts.find(r);
        ++rec.histogram[static_cast<std::size_t>(it == counts.end() ? 0 : it->second)];
      }
      rec.error.clear();
      break;
    } catch (const PrecisionError& e) {
      rec.error = e.what();
    }
  }
  if (p <= kSmallPrime) {
    rec.regime = "small-p";
  } else {
    rec.regime = rec.nu && *rec.nu < 0 ? "~2p" : "~p";
  }
  rec.observed = rec.error.empty() ? size_band(p, rec.size) : "";
  return rec;
}

std::string histogram_text(const std::vector<int>& h) {
  std::string s;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i > 0) s += ';';
    s += std::to_string(h[i]);
  }
  return s;
}

}  // namespace

PadicNumber normalized_a(Prime p, unsigned q, const PadicNumber& a_q2, int N) {
  const PadicNumber log2 = padic_log(integer(p, 2, N), N);
  const PadicNumber logq = padic_log(integer(p, static_cast<long>(q), N), N);
  return a_q2 / (log2 * logq);
}

std::array<PadicNumber, 3> f2_leading_coeffs(Prime p, unsigned residue, const PadicNumber& a, int N) {
  if (residue % p == 0 || residue % p == 1) throw DomainError("disc of 0 or 1 has no Teichmuller expansion");
  const PadicNumber zeta = teichmuller(p, residue, N + 2);
  const PadicNumber li1 = polylog_at_root_of_unity(p, residue, 1, N);
  const PadicNumber li2 = polylog_at_root_of_unity(p, residue, 2, N);
  const PadicNumber one = integer(p, 1, N + 2);
  const PadicNumber pp = integer(p, static_cast<long>(p), N + 2);
  const PadicNumber c1 = pp * (one - a) * li1 / zeta;
  const PadicNumber c2 = (pp * pp * (one - a.mul_int(2))) / (zeta * (one - zeta)).mul_int(2) -
                         (pp * pp * (one - a) * li1) / (zeta * zeta).mul_int(2);
  return {li2, c1, c2};
}

std::optional<int> disc_root_bound(Prime p, unsigned q, unsigned residue, const PadicNumber& a_q2,
                                   int N) {
  const PadicNumber a = normalized_a(p, q, a_q2, N + kScalarGuard);
  if (a.valuation() >= 0) {
    const PadicNumber d = a.mul_int(2) - integer(p, 1, N);
    if (d.valuation() >= 1) return std::nullopt;
  }
  return strassmann_bound(f2_series(p, q, residue, N, a_q2));
}

bool is_wieferich(Prime p, long b) {
  if (b % static_cast<long>(p) == 0) throw DomainError("base must be prime to p");
  const mpz_class mod = mpz_class(p) * p;
  mpz_class base = b;
  mpz_fdiv_r(base.get_mpz_t(), base.get_mpz_t(), mod.get_mpz_t());
  mpz_class r;
  mpz_powm_ui(r.get_mpz_t(), base.get_mpz_t(), p - 1, mod.get_mpz_t());
  return r == 1;
}

std::string size_band(Prime p, std::size_t size) {
  const double s = static_cast<double>(size);
  const double pd = static_cast<double>(p);
  if (s >= 0.6 * pd && s <= 1.4 * pd) return "~p";
  if (s >= 1.6 * pd && s <= 2.0 * pd + 2.0) return "~2p";
  return "other";
}

std::vector<SurveyRecord> survey(unsigned q, Prime p_min, Prime p_max, const SurveyOptions& opts) {
  if (!is_prime(q) || q == 2) throw DomainError("q must be an odd prime");
  std::vector<Prime> primes;
  for (Prime p = std::max<Prime>(p_min, 3); p <= p_max; ++p) {
    if (is_prime(p) && p != q) primes.push_back(p);
  }
  unsigned workers = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  std::vector<SurveyRecord> out(primes.size());
  for (std::size_t start = 0; start < primes.size(); start += workers) {
    const std::size_t stop = std::min(primes.size(), start + workers);
    std::vector<std::future<SurveyRecord>> batch;
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(workers == 1 ? std::launch::deferred : std::launch::async, survey_row, q,
                                 primes[i], std::cref(opts)));
    }
    for (std::size_t i = start; i < stop; ++i) out[i] = batch[i - start].get();
  }
  return out;
}

std::string survey_csv(const std::vector<SurveyRecord>& rows) {
  std::ostringstream os;
  os << "p,q,size,histogram,nu,wieferich2,wieferichq,regime,observed,precision,error\n";
  for (const auto& r : rows) {
    os << r.p << ',' << r.q << ',' << r.size << ',' << histogram_text(r.histogram) << ',';
    if (r.nu) os << *r.nu;
    os << ',' << (r.wieferich2 ? 1 : 0) << ',' << (r.wieferichq ? 1 : 0) << ',' << r.regime << ','
       << r.observed << ',' << r.precision << ',';
    if (!r.error.empty()) {
      std::string e = r.error;
      std::replace(e.begin(), e.end(), '"', '\'');
      os << '"' << e << '"';
    }
    os << '\n';
  }
  return os.str();
}

std::string survey_json(const std::vector<SurveyRecord>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["p"] = r.p;
    j["q"] = r.q;
    j["size"] = r.size;
    j["histogram"] = r.histogram;
    j["nu"] = r.nu ? nlohmann::ordered_json(*r.nu) : nlohmann::ordered_json(nullptr);
    j["wieferich2"] = r.wieferich2;
    j["wieferichq"] = r.wieferichq;
    j["regime"] = r.regime;
    j["observed"] = r.observed;
    j["precision"] = r.precision;
    if (!r.error.empty()) j["error"] = r.error;
    arr.push_back(std::move(j));
  }
  return arr.dump();
}

}  // namespace ckloci

// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "ckloci/analysis.hpp"
#include "ckloci/loci.hpp"
#include "ckloci/polylog.hpp"
#include "ckloci/roots.hpp"
#include "ckloci/steinberg.hpp"
#include "oracles.hpp"

using namespace ckloci;

namespace {

#ifndef CKLOCI_CLI_PATH
#define CKLOCI_CLI_PATH ""
#endif

struct CliResult {
  int status = -1;
  std::string out;
};

std::string g_cache_dir;

CliResult run_cli(const std::string& args) {
  CliResult r;
  const std::string cli = CKLOCI_CLI_PATH;
  if (cli.empty()) return r;
  const std::string cmd = "'" + cli + "' --cache-dir '" + g_cache_dir + "' " + args + " 2>&1";
  FILE* f = ::popen(cmd.c_str(), "r");
  if (!f) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, n);
  const int st = ::pclose(f);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

// "[a,\n b,\n c]" -> {a, b, c}
std::vector<std::string> parse_listing(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || (line[0] != '[' && line[0] != ' ')) continue;
    std::size_t a = line.find_first_not_of("[ ");
    std::size_t b = line.find_last_not_of(",]");
    if (a == std::string::npos || b == std::string::npos || b < a) continue;
    out.push_back(line.substr(a, b - a + 1));
  }
  return out;
}

PadicNumber Z(Prime p, long x, int N) { return PadicNumber::from_integer(p, x, N); }

struct Check {
  std::ostringstream why;
  bool ok = true;
  void expect(bool cond, const std::string& msg) {
    if (!cond && ok) why << msg;
    if (!cond && !ok) why << "; " << msg;
    ok = ok && cond;
  }
};

int g_failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream t;
  t.precision(2);
  t << std::fixed << dt;
  c.expect(dt <= budget_s, "took " + t.str() + "s, budget " + std::to_string(static_cast<int>(budget_s)) + "s");
  std::cout << (c.ok ? "PASS" : "FAIL") << " " << id << " " << name << " (" << t.str() << "s)";
  if (!c.ok) std::cout << ": " << c.why.str();
  std::cout << std::endl;
  if (!c.ok) ++g_failures;
}

// Each printed value must be matched by a distinct computed one at the printed precision.
void match_as_set(Check& c, const std::vector<std::string>& got, const std::vector<std::string>& want) {
  c.expect(got.size() == want.size(), "expected " + std::to_string(want.size()) + " points, got " +
                                          std::to_string(got.size()));
  std::vector<bool> used(got.size(), false);
  for (const auto& w : want) {
    bool hit = false;
    for (std::size_t i = 0; i < got.size() && !hit; ++i) {
      if (!used[i] && oracle::agrees_at_printed_precision(PadicNumber::parse(got[i]), w)) used[i] = hit = true;
    }
    c.expect(hit, "no match for " + w);
  }
}

bool is_integral_point(const PadicNumber& z, long x) {
  return z.indistinguishable_from(Z(z.prime(), x, z.precision()));
}

}  // namespace

int main() {
  const auto tmp = std::filesystem::temp_directory_path() / ("ckloci-acceptance-" + std::to_string(::getpid()));
  g_cache_dir = tmp.string();

  criterion(1, "depth-2 locus p=5 q=3", 5, [](Check& c) {
    c.expect(std::string(CKLOCI_CLI_PATH).size() > 0, "CLI not built");
    const auto r = run_cli("depth2 --p 5 --q 3 --prec 10");
    c.expect(r.status == 0, "exit status " + std::to_string(r.status));
    match_as_set(c, parse_listing(r.out),
                 {"2 + O(5^9)", "2 + 4*5 + 4*5^2 + 4*5^3 + 4*5^4 + 4*5^5 + 4*5^6 + 4*5^7 + 4*5^8 + O(5^9)",
                  "3 + O(5^6)", "3 + 5^2 + 2*5^3 + 5^4 + 3*5^5 + O(5^6)",
                  "4 + 4*5 + 4*5^2 + 4*5^3 + 4*5^4 + 4*5^5 + 4*5^6 + 4*5^7 + 4*5^8 + O(5^9)", "4 + 5 + O(5^9)"});
  });

  criterion(2, "depth-4 loci p=7 and p=5", 30, [](Check& c) {
    const auto r = run_cli("depth4 --p 7 --prec 10");
    c.expect(r.status == 0, "p=7 exit status " + std::to_string(r.status));
    const std::vector<std::string> want7 = {
        "2 + 7 + O(7^9)",
        "3 + O(7^9)",
        "4 + 6*7 + 6*7^2 + 6*7^3 + 6*7^4 + 6*7^5 + 6*7^6 + 6*7^7 + 6*7^8 + O(7^9)",
        "6 + 6*7 + 6*7^2 + 6*7^3 + 6*7^4 + 6*7^5 + 6*7^6 + 6*7^7 + O(7^8)",
    };
    c.expect(parse_listing(r.out) == want7, "p=7 listing differs:\n" + r.out);

    const auto l5 = depth4_locus_adaptive(5, PrecisionPolicy(10, 40));
    std::set<long> found;
    for (const auto& pt : l5.points) {
      for (long x : {-3L, -1L, 3L, 9L}) {
        if (is_integral_point(pt.z, x)) found.insert(x);
      }
      c.expect(pt.status == PointStatus::Confirmed, "p=5 point not confirmed: " + pt.z.to_string());
      c.expect(!is_integral_point(pt.z, 2), "p=5 kept z=2");
    }
    c.expect(l5.size() == 4 && found == std::set<long>{-3, -1, 3, 9}, "p=5 depth-4 locus is not {-3,-1,3,9}");
    const auto z0 = PadicNumber::parse("3 + 5^2 + 2*5^3 + 5^4 + 3*5^5 + 5^6 + 5^7 + 5^9 + 2*5^10 + 3*5^11 + 2*5^12 + O(5^13)");
    for (const auto& pt : l5.points) c.expect(!pt.z.indistinguishable_from(z0), "p=5 kept z0");

    const int N = 20;
    const auto coeffs = coeffs_z16(5, N);
    const auto f2 = f4_eval(Z(5, 2, N), N, coeffs);
    c.expect(oracle::agrees_at_printed_precision(f2, "4*5^13 + 4*5^14 + 3*5^15 + 5^16 + 3*5^18 + 3*5^19 + O(5^20)"),
             "f4(2) = " + f2.to_string());
    const auto fz0 = f4_eval(z0, N, coeffs);
    c.expect(oracle::agrees_at_printed_precision(fz0, "4*5^13 + O(5^14)"), "f4(z0) = " + fz0.to_string());
  });

  criterion(3, "DCW coefficient q=19 in Q_7", 60, [](Check& c) {
    const auto r = run_cli("dcw --q 19 --p 7 --prec 10 --bound 20");
    c.expect(r.status == 0, "exit status " + std::to_string(r.status));
    const std::string want = "7^2 + 2*7^3 + 6*7^4 + 3*7^5 + 2*7^6 + 6*7^7 + 5*7^8 + O(7^10)";
    c.expect(r.out.find(want + "\n") != std::string::npos, "output:\n" + r.out);
  });

  criterion(4, "depth-2 sizes q=3, p<=31", 120, [](Check& c) {
    SurveyOptions opts;
    const auto rows = survey(3, 5, 31, opts);
    const std::vector<std::size_t> want = {6, 8, 18, 16, 22, 20, 20, 26, 36};
    std::vector<std::size_t> got;
    for (const auto& row : rows) got.push_back(row.size);
    std::ostringstream s;
    for (auto n : got) s << n << " ";
    c.expect(got == want, "sizes " + s.str());

    // extended tier, cheap enough to keep
    const auto big = survey(3, 1091, 1097, opts);
    c.expect(big.size() == 3, "expected rows for 1091, 1093, 1097");
    if (big.size() == 3) {
      c.expect(big[0].size == 1076 && big[1].size == 2154 && big[2].size == 1078,
               "sizes " + std::to_string(big[0].size) + " " + std::to_string(big[1].size) + " " +
                   std::to_string(big[2].size));
      c.expect(!big[1].histogram.empty() && big[1].histogram[0] == 14,
               "p=1093 empty discs " + std::to_string(big[1].histogram.empty() ? -1 : big[1].histogram[0]));
    }
  });

  criterion(5, "depth-2 sizes for q in {5,7,11,19}", 300, [](Check& c) {
    for (auto [q, p, n] : {std::tuple{5u, 29u, 38u}, std::tuple{7u, 17u, 15u}, std::tuple{11u, 47u, 48u},
                           std::tuple{19u, 43u, 78u}}) {
      const auto l = depth2_locus(p, q, 10, resolve_a_q2(p, q, 14));
      c.expect(l.size() == n, "q=" + std::to_string(q) + " p=" + std::to_string(p) + " size " +
                                  std::to_string(l.size()));
    }
  });

  criterion(6, "verify-kim 5 <= p < 100", 600, [](Check& c) {
    const auto r = run_cli("verify-kim --p-min 5 --p-max 100");
    c.expect(r.status == 0, "exit status " + std::to_string(r.status));
    std::size_t pass = 0;
    std::istringstream in(r.out);
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("p=", 0) != 0) continue;
      if (line.find(" PASS ") != std::string::npos) ++pass;
      else c.expect(false, line);
    }
    c.expect(pass == oracle::primes_between(5, 100).size(), std::to_string(pass) + " primes passed");
  });

  criterion(7, "Z_p root finder", 60, [](Check& c) {
    auto two = [](std::vector<long> v, int N) {
      return SeriesApprox::from_integers(2, std::vector<mpz_class>(v.begin(), v.end()), N);
    };
    bool threw = false;
    try {
      zp_roots(two({-1, 0, 1}, 2));
    } catch (const PrecisionError&) {
      threw = true;
    }
    c.expect(threw, "order 2 did not raise PrecisionError");
    const auto roots = zp_roots(two({-1, 0, 1}, 3));
    std::vector<std::string> got;
    for (const auto& r : roots) got.push_back(r.root.to_string());
    c.expect(got == std::vector<std::string>{"1 + O(2^2)", "1 + 2 + O(2^2)"}, "order 3 roots differ");

    std::mt19937_64 rng(20240611);
    const std::vector<unsigned> primes = {2, 3, 5, 7};
    int sound = 0, complete = 0, total = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const Prime p = primes[rng() % primes.size()];
      const int N = p == 2 ? 7 : (p == 3 ? 5 : 4);
      const int deg = 1 + static_cast<int>(rng() % 4);
      // distinct residues mod p keep every root simple, so the count is exact
      std::vector<mpz_class> planted;
      std::set<unsigned> used;
      while (static_cast<int>(planted.size()) < std::min<int>(deg, static_cast<int>(p))) {
        const long x = static_cast<long>(rng() % 2000) - 1000;
        const unsigned r = static_cast<unsigned>(((x % static_cast<long>(p)) + p) % p);
        if (used.insert(r).second) planted.emplace_back(x);
      }
      const auto f = oracle::planted(planted, 1);
      ++total;
      const auto got_roots = zp_roots(SeriesApprox::from_integers(p, f, N));
      const auto brute = oracle::brute_roots(f, p, N);
      bool s_ok = true;
      for (const auto& r : got_roots) {
        bool hit = false;
        for (const auto& b : brute) hit |= mpz_divisible_p(mpz_class(b - r.root.lift()).get_mpz_t(),
                                                           prime_power(p, r.root.precision()).get_mpz_t()) != 0;
        s_ok &= hit;
      }
      bool c_ok = got_roots.size() == planted.size();
      for (const auto& b : brute) {
        bool hit = false;
        for (const auto& r : got_roots) hit |= mpz_divisible_p(mpz_class(b - r.root.lift()).get_mpz_t(),
                                                               prime_power(p, r.root.precision()).get_mpz_t()) != 0;
        c_ok &= hit;
      }
      sound += s_ok;
      complete += c_ok;
    }
    c.expect(sound == total, "soundness " + std::to_string(sound) + "/" + std::to_string(total));
    c.expect(complete == total, "completeness " + std::to_string(complete) + "/" + std::to_string(total));
  });

  criterion(8, "polylog identity suite", 120, [](Check& c) {
    auto primes = oracle::primes_between(5, 100);
    std::mt19937_64 rng(8);
    std::shuffle(primes.begin(), primes.end(), rng);
    primes.resize(20);
    const int N = 12;
    for (Prime p : primes) {
      const std::string tag = " p=" + std::to_string(p);
      const int eps2 = oracle::slack(p, polylog_truncation_index(p, 2, N));
      const auto l3 = polylog_eval(Z(p, 3, N), 2, N);
      c.expect((l3.mul_int(2) - polylog_eval(Z(p, -3, N), 2, N)).valuation() >= N - eps2, "Li2(3) vs Li2(-3)" + tag);
      c.expect((l3.mul_int(6) - polylog_eval(Z(p, 9, N), 2, N)).valuation() >= N - eps2, "Li2(3) vs Li2(9)" + tag);

      const int eps1 = oracle::slack(p, polylog_truncation_index(p, 1, N));
      for (int i = 0; i < 5; ++i) {
        long z;
        do z = static_cast<long>(rng() % 100000);
        while (z % static_cast<long>(p) <= 1);
        const auto lhs = polylog_eval(Z(p, z, N), 1, N) + padic_log(Z(p, 1 - z, N), N);
        c.expect(lhs.valuation() >= N - eps1, "Li1(" + std::to_string(z) + ")" + tag);
      }

      const auto g = compute_g(p, 4, N);
      for (int m = 0; m <= 4; ++m) {
        const auto& b = g.b[static_cast<std::size_t>(m)];
        for (std::size_t k = 1; k < b.size(); ++k) {
          if (b[k] == 0 || valuation_of(p, b[k]) >= g.precision[static_cast<std::size_t>(m)]) continue;
          c.expect(valuation_of(p, b[k]) >= g_lower_bound(p, m, static_cast<long>(k)) - 1e-9,
                   "g bound m=" + std::to_string(m) + " k=" + std::to_string(k) + tag);
        }
      }
      const unsigned r = 2 + static_cast<unsigned>(rng() % (p - 2));
      const auto t = polylog_disc_series(p, r, 4, N);
      for (int m = 1; m <= 4; ++m) {
        const auto& s = t.li[static_cast<std::size_t>(m)];
        for (int k = 1; k < s.k0(); ++k) {
          c.expect(s[k].valuation() >= std::min(N, k - m * floor_log(p, k)),
                   "Li_" + std::to_string(m) + " coefficient " + std::to_string(k) + tag);
        }
      }

      const auto a = normalized_a(p, 3, resolve_a_q2(p, 3, N + 6), N + 2);
      const auto lead = f2_leading_coeffs(p, r, a, N);
      const auto series = t.li[2] - a * (t.log * t.li[1]);
      const int eps = oracle::slack(p, series.k0());
      for (int k = 0; k < 3; ++k) {
        c.expect((lead[static_cast<std::size_t>(k)] - series[k]).valuation() >= N - eps,
                 "c" + std::to_string(k) + tag);
      }
    }
  });

  criterion(9, "Wieferich flags", 1, [](Check& c) {
    c.expect(is_wieferich(1093, 2), "(1093,2)");
    c.expect(is_wieferich(3511, 2), "(3511,2)");
    c.expect(is_wieferich(43, 19), "(43,19)");
    c.expect(!is_wieferich(5, 2), "(5,2)");
    c.expect(!is_wieferich(7, 2), "(7,2)");
  });

  std::error_code ec;
  std::filesystem::remove_all(tmp, ec);
  std::cout << (g_failures == 0 ? "all criteria passed" : std::to_string(g_failures) + " criteria failed") << std::endl;
  return g_failures == 0 ? 0 : 1;
}

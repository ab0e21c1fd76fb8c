#include <gtest/gtest.h>

#include <random>

#include "ckloci/analysis.hpp"
#include "ckloci/loci.hpp"
#include "ckloci/polylog.hpp"
#include "ckloci/roots.hpp"
#include "oracles.hpp"

using namespace ckloci;

namespace {

PadicNumber Z(Prime p, long x, int N) { return PadicNumber::from_integer(p, x, N); }

// Series of Li2 - a log Li1 on one disc, built from the disc tables directly.
SeriesApprox normalized_f2(Prime p, unsigned r, const PadicNumber& a, int N) {
  const auto t = polylog_disc_series(p, r, 2, N);
  return t.li[2] - a * (t.log * t.li[1]);
}

}  // namespace

TEST(LeadingCoeffs, MatchSeries) {
  std::mt19937_64 rng(3);
  auto primes = oracle::primes_between(5, 100);
  std::shuffle(primes.begin(), primes.end(), rng);
  primes.resize(8);
  for (Prime p : primes) {
    for (unsigned q : {3u, 5u}) {
      if (q == p) continue;
      const int N = 12;
      const auto a = normalized_a(p, q, resolve_a_q2(p, q, N + 6), N + 2);
      for (unsigned r = 2; r < p; r += 1 + static_cast<unsigned>(rng() % 5)) {
        const auto c = f2_leading_coeffs(p, r, a, N);
        const auto f = normalized_f2(p, r, a, N);
        const int eps = oracle::slack(p, f.k0());
        for (int k = 0; k < 3; ++k) {
          EXPECT_GE((c[static_cast<std::size_t>(k)] - f[k]).valuation(), N - eps)
              << "p=" << p << " q=" << q << " r=" << r << " c" << k;
        }
        EXPECT_GE(c[0].valuation(), 2);
      }
    }
  }
}

TEST(LeadingCoeffs, HalfMakesC2Small) {
  // a = 1/2 mod p (and a integral) kills the unit part of c2.
  const Prime p = 11;
  const int N = 10;
  const auto a = PadicNumber::from_rational(p, mpq_class(1, 2), N) + Z(p, 11, N);
  EXPECT_GE((Z(p, 1, N) - a.mul_int(2)).valuation(), 1);
  for (unsigned r = 2; r < p; ++r) {
    const auto c = f2_leading_coeffs(p, r, a, N);
    const auto li1 = polylog_at_root_of_unity(p, r, 1, N);
    const auto rest = c[2] + (Z(p, 1, N) - a) * li1 * Z(p, 121, N) / (teichmuller(p, r, N).pow(2).mul_int(2));
    EXPECT_GE(rest.valuation(), 3);
  }
}

TEST(DiscBound, NeverExceeded) {
  for (auto [q, p] : {std::pair{3u, 5u}, std::pair{3u, 13u}, std::pair{3u, 31u}, std::pair{5u, 29u}, std::pair{7u, 17u},
                      std::pair{41u, 29u}}) {
    const int N = 10;
    const auto a = resolve_a_q2(p, q, N + 4);
    const auto locus = depth2_locus(p, q, N, a);
    const auto counts = locus.disc_counts();
    for (unsigned r = 2; r < p; ++r) {
      const auto b = disc_root_bound(p, q, r, a, N);
      if (!b) continue;
      const auto it = counts.find(r);
      const int n = it == counts.end() ? 0 : it->second;
      EXPECT_LE(n, *b) << "q=" << q << " p=" << p << " r=" << r;
    }
  }
}

TEST(DiscBound, Q41P29) {
  const int N = 10;
  const auto a = resolve_a_q2(29, 41, N + 4);
  const auto locus = depth2_locus(29, 41, N, a);
  EXPECT_EQ(locus.size(), 54u);
  int max_bound = 0;
  for (unsigned r = 2; r < 29; ++r) {
    if (auto b = disc_root_bound(29, 41, r, a, N)) max_bound = std::max(max_bound, *b);
  }
  EXPECT_EQ(max_bound, 2);
}

TEST(Wieferich, Flags) {
  EXPECT_TRUE(is_wieferich(1093, 2));
  EXPECT_TRUE(is_wieferich(3511, 2));
  EXPECT_TRUE(is_wieferich(43, 19));
  EXPECT_FALSE(is_wieferich(5, 2));
  EXPECT_FALSE(is_wieferich(7, 2));
  EXPECT_THROW(is_wieferich(7, 14), DomainError);
}

TEST(Wieferich, AgreesWithNaiveOracle) {
  for (Prime p : oracle::primes_between(3, 4000)) {
    for (long b : {2L, 3L, 5L, 19L}) {
      if (b % static_cast<long>(p) == 0) continue;
      ASSERT_EQ(is_wieferich(p, b), oracle::wieferich_naive(p, static_cast<std::uint64_t>(b))) << p << " " << b;
    }
  }
}

TEST(Wieferich, MatchesLogValuation) {
  for (Prime p : {1093u, 3511u, 43u, 5u, 7u, 11u}) {
    const bool w = padic_log(Z(p, p == 43 ? 19 : 2, 4), 4).valuation() >= 2;
    EXPECT_EQ(w, is_wieferich(p, p == 43 ? 19 : 2));
  }
}

TEST(Bands, Boundaries) {
  EXPECT_EQ(size_band(10, 6), "~p");
  EXPECT_EQ(size_band(10, 14), "~p");
  EXPECT_EQ(size_band(10, 15), "other");
  EXPECT_EQ(size_band(10, 16), "~2p");
  EXPECT_EQ(size_band(10, 22), "~2p");
  EXPECT_EQ(size_band(10, 23), "other");
  EXPECT_EQ(size_band(10, 5), "other");
}

TEST(Survey, SmallQ3) {
  SurveyOptions opts;
  opts.threads = 2;
  const auto rows = survey(3, 3, 31, opts);
  ASSERT_EQ(rows.size(), 9u);  // 3 excluded
  const std::vector<std::size_t> sizes = {6, 8, 18, 16, 22, 20, 20, 26, 36};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].size, sizes[i]) << "p=" << rows[i].p;
    EXPECT_TRUE(rows[i].error.empty());
    std::size_t total = 0;
    for (std::size_t k = 0; k < rows[i].histogram.size(); ++k) total += k * static_cast<std::size_t>(rows[i].histogram[k]);
    EXPECT_EQ(total, rows[i].size);
    // discs 2 .. p-1
    int discs = 0;
    for (int h : rows[i].histogram) discs += h;
    EXPECT_EQ(discs, static_cast<int>(rows[i].p) - 2);
  }
  EXPECT_EQ(rows[0].regime, "small-p");
  const auto csv = survey_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "p,q,size,histogram,nu,wieferich2,wieferichq,regime,observed,precision,error");
  EXPECT_NE(survey_json(rows).find("\"size\":36"), std::string::npos);
}

TEST(Survey, Q47P23) {
  const auto rows = survey(47, 23, 23);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].size, 42u);
  EXPECT_EQ(resolve_a_q2(23, 47, 12).valuation(), 1);
  ASSERT_TRUE(rows[0].nu);
  EXPECT_EQ(*rows[0].nu, -1);
  EXPECT_EQ(rows[0].regime, "~2p");
}

TEST(Survey, DiscsHoldZeroOrTwoPointsForQ3) {
  SurveyOptions opts;
  opts.threads = 2;
  for (const auto& row : survey(3, 5, 50, opts)) {
    EXPECT_EQ(row.size % 2, 0u) << "p=" << row.p;
    for (std::size_t k = 0; k < row.histogram.size(); ++k) {
      if (k != 0 && k != 2) EXPECT_EQ(row.histogram[k], 0) << "p=" << row.p << " discs with " << k << " points";
    }
  }
}

TEST(Survey, Table2SpotChecks) {
  for (auto [q, p, n] : {std::tuple{5u, 29u, 38u}, std::tuple{7u, 17u, 15u}, std::tuple{11u, 47u, 48u},
                         std::tuple{19u, 43u, 78u}}) {
    const auto rows = survey(q, p, p);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].size, static_cast<std::size_t>(n)) << "q=" << q << " p=" << p;
  }
}

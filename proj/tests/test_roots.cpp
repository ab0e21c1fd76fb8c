#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "ckloci/roots.hpp"
#include "oracles.hpp"

using namespace ckloci;

namespace {

SeriesApprox poly(Prime p, std::vector<long> c, int N) {
  std::vector<mpz_class> z(c.begin(), c.end());
  return SeriesApprox::from_integers(p, z, N);
}

std::set<mpz_class> residues_mod(const std::vector<RootWithPrecision>& roots, Prime p, int n) {
  std::set<mpz_class> out;
  for (const auto& r : roots) {
    mpz_class l = r.root.lift();
    mpz_fdiv_r(l.get_mpz_t(), l.get_mpz_t(), prime_power(p, n).get_mpz_t());
    out.insert(l);
  }
  return out;
}

std::string join(const std::vector<RootWithPrecision>& roots) {
  std::string s;
  for (const auto& r : roots) s += (s.empty() ? "" : ", ") + r.root.to_string();
  return s;
}

}  // namespace

TEST(Normalize, DividesOutContent) {
  auto [g, mu] = normalize(poly(5, {25, 50, 125}, 6));
  EXPECT_EQ(mu, 2);
  EXPECT_EQ(g.order, 4);
  EXPECT_EQ(g[0].to_string(), "1 + O(5^4)");
  EXPECT_EQ(strassmann_bound(poly(5, {1, 1}, 6)), 1);
  EXPECT_EQ(strassmann_bound(poly(5, {5, 1, 5}, 6)), 1);
  EXPECT_EQ(strassmann_bound(poly(5, {1, 25, 1, 5}, 6)), 2);
}

TEST(NewtonPolygonTest, Shapes) {
  const auto np = newton_polygon(poly(7, {-49, 0, 1}, 6));
  ASSERT_EQ(np.segments.size(), 1u);
  EXPECT_EQ(np.segments[0].length(), 2);
  EXPECT_EQ(np.segments[0].rise, -2);
  EXPECT_EQ(np.nonpositive_length(), 2);
  // valuations (2, 1, 1, >=2): one segment of slope -1, then a flat one
  const auto q = newton_polygon(poly(3, {9, 3, 3, 27}, 8));
  ASSERT_GE(q.segments.size(), 2u);
  EXPECT_EQ(q.segments[0].start, 0);
  EXPECT_EQ(q.segments[0].end, 1);
  EXPECT_EQ(q.segments[0].rise, -1);
  EXPECT_EQ(q.segments[1].end, 2);
  EXPECT_EQ(q.segments[1].rise, 0);
  EXPECT_EQ(q.nonpositive_length(), 2);
}

TEST(ZpRoots, TwoAdicExamples) {
  EXPECT_THROW(zp_roots(poly(2, {-1, 0, 1}, 2)), PrecisionError);
  EXPECT_EQ(join(zp_roots(poly(2, {-1, 0, 1}, 3))), "1 + O(2^2), 1 + 2 + O(2^2)");
  // t^2 - 9 and t^2 - 1 agree mod 8, so their certified roots agree mod 4.
  const auto a = zp_roots(poly(2, {-9, 0, 1}, 3));
  const auto b = zp_roots(poly(2, {-1, 0, 1}, 3));
  EXPECT_EQ(residues_mod(a, 2, 2), residues_mod(b, 2, 2));
}

TEST(ZpRoots, SimpleRootsHaveFullPrecision) {
  const auto r = zp_roots(poly(5, {-2, 0, 0, 0, 1}, 8));  // 2 is not a fourth power mod 5
  EXPECT_TRUE(r.empty());
  const auto s = zp_roots(poly(7, {-2, 0, 1}, 8));
  ASSERT_EQ(s.size(), 2u);
  for (const auto& x : s) {
    EXPECT_EQ(x.root.precision(), 8);
    EXPECT_EQ(x.derivative_valuation, 0);
    EXPECT_TRUE((x.root * x.root).indistinguishable_from(PadicNumber::from_integer(7, 2, 8)));
  }
}

TEST(ZpRoots, PlantedRootsAgainstBruteForce) {
  std::mt19937_64 rng(42);
  const std::vector<unsigned> primes = {2, 3, 5, 7};
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Prime p = primes[rng() % primes.size()];
    const int N = p == 2 ? 7 : (p == 3 ? 5 : 4);
    const int deg = 1 + static_cast<int>(rng() % 4);
    std::vector<mpz_class> roots;
    for (int i = 0; i < deg; ++i) roots.emplace_back(static_cast<long>(rng() % 400) - 200);
    mpz_class lead = 1 + static_cast<long>(rng() % 6);
    if (lead % p == 0) lead += 1;
    const auto f = oracle::planted(roots, lead);
    std::vector<RootWithPrecision> got;
    try {
      got = zp_roots(SeriesApprox::from_integers(p, f, N));
    } catch (const PrecisionError&) {
      continue;  // colliding roots that N cannot separate
    }
    ++checked;
    // every certified root is a root of f modulo p^(its precision) and
    // every planted root is matched by one of them
    const auto brute = oracle::brute_roots(f, p, N);
    for (const auto& r : got) {
      const int n = r.root.precision();
      ASSERT_GE(n, 1);
      mpz_class l = r.root.lift();
      bool hit = false;
      for (const auto& b : brute) {
        mpz_class d = b - l;
        if (mpz_divisible_p(d.get_mpz_t(), prime_power(p, std::min(n, N)).get_mpz_t())) hit = true;
      }
      EXPECT_TRUE(hit) << "p=" << p << " root " << r.root;
    }
    for (const auto& x : roots) {
      bool hit = false;
      for (const auto& r : got) {
        mpz_class d = x - r.root.lift();
        if (mpz_divisible_p(d.get_mpz_t(), prime_power(p, r.root.precision()).get_mpz_t())) hit = true;
      }
      EXPECT_TRUE(hit) << "p=" << p << " planted root " << x << " missing among " << join(got);
    }
    // distinct roots in distinct classes mod p are counted exactly
    std::set<mpz_class> classes;
    bool separated = true;
    for (const auto& x : roots) {
      mpz_class r;
      mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), p);
      separated &= classes.insert(r).second;
    }
    if (separated) EXPECT_EQ(got.size(), roots.size()) << "p=" << p;
  }
  EXPECT_GT(checked, 800);
}

TEST(ZpRoots, StrassmannBoundsRootCount) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const Prime p = std::vector<unsigned>{3, 5, 7, 11}[rng() % 4];
    const int N = 6;
    std::vector<long> c(1 + rng() % 6);
    for (auto& x : c) x = static_cast<long>(rng() % 20000) - 10000;
    if (c.back() == 0) c.back() = 1;
    const auto f = poly(p, c, N);
    if (f.min_valuation() >= N) continue;
    try {
      const auto r = zp_roots(f);
      EXPECT_LE(static_cast<int>(r.size()), strassmann_bound(f));
      const auto g = normalize(f).first;
      EXPECT_EQ(zp_roots(g).size(), r.size());
    } catch (const PrecisionError&) {
    }
  }
}

TEST(ZpRoots, RaisingPrecisionKeepsRoots) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const Prime p = std::vector<unsigned>{3, 5, 7}[rng() % 3];
    std::vector<mpz_class> roots;
    for (int i = 0; i < 3; ++i) roots.emplace_back(static_cast<long>(rng() % 1000));
    const auto f = oracle::planted(roots, 1);
    try {
      const auto lo = zp_roots(SeriesApprox::from_integers(p, f, 6));
      const auto hi = zp_roots(SeriesApprox::from_integers(p, f, 11));
      EXPECT_LE(lo.size(), hi.size());
      for (const auto& r : lo) {
        bool found = false;
        for (const auto& s : hi) found |= s.root.with_precision(r.root.precision()).indistinguishable_from(r.root);
        EXPECT_TRUE(found) << r.root;
      }
    } catch (const PrecisionError&) {
    }
  }
}

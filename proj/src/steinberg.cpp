#include "ckloci/steinberg.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <json.hpp>

#include "ckloci/polylog.hpp"

namespace ckloci {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Arithmetic modulo a 61-bit prime, used to pick columns before the exact solve.
constexpr u64 kModulus = (u64{1} << 61) - 1;

u64 mod_mul(u64 a, u64 b) { return static_cast<u64>((static_cast<u128>(a) * b) % kModulus); }
u64 mod_sub(u64 a, u64 b) { return a >= b ? a - b : a + kModulus - b; }
u64 mod_pow(u64 a, u64 e) {
  u64 r = 1;
  while (e) {
    if (e & 1) r = mod_mul(r, a);
    a = mod_mul(a, a);
    e >>= 1;
  }
  return r;
}
u64 mod_inv(u64 a) { return mod_pow(a, kModulus - 2); }
u64 to_mod(long x) {
  return x >= 0 ? static_cast<u64>(x) % kModulus : kModulus - (static_cast<u64>(-x) % kModulus);
}

std::vector<unsigned> primes_upto(unsigned bound, Prime excluded) {
  std::vector<unsigned> out;
  for (unsigned n = 2; n <= bound; ++n) {
    if (n != excluded && is_prime(n)) out.push_back(n);
  }
  return out;
}

struct Candidate {
  mpq_class t;
  std::vector<long> vec;  // flattened outer product e(t) (x) e(1-t)
};

std::vector<long> outer(const std::vector<int>& x, const std::vector<int>& y) {
  std::vector<long> out(x.size() * y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) out[i * y.size() + j] = static_cast<long>(x[i]) * y[j];
  }
  return out;
}

std::vector<int> diff(const std::vector<int>& x, const std::vector<int>& y) {
  std::vector<int> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
  return out;
}

// Incremental echelon basis modulo kModulus over candidate columns.
class ModularSpan {
 public:
  explicit ModularSpan(std::size_t rows) : rows_(rows) {}

  // Returns true when the column enlarges the span.
  bool add(const std::vector<long>& col) {
    std::vector<u64> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = to_mod(col[i]);
    reduce(v);
    auto it = std::find_if(v.begin(), v.end(), [](u64 x) { return x != 0; });
    if (it == v.end()) return false;
    const std::size_t piv = static_cast<std::size_t>(it - v.begin());
    const u64 inv = mod_inv(v[piv]);
    for (auto& x : v) x = mod_mul(x, inv);
    basis_.push_back(std::move(v));
    pivots_.push_back(piv);
    return true;
  }

  bool contains(const std::vector<long>& col) const {
    std::vector<u64> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = to_mod(col[i]);
    reduce(v);
    return std::all_of(v.begin(), v.end(), [](u64 x) { return x == 0; });
  }

 private:
  void reduce(std::vector<u64>& v) const {
    for (std::size_t b = 0; b < basis_.size(); ++b) {
      const u64 f = v[pivots_[b]];
      if (f == 0) continue;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (basis_[b][i] != 0) v[i] = mod_sub(v[i], mod_mul(f, basis_[b][i]));
      }
    }
  }

  std::size_t rows_;
  std::vector<std::vector<u64>> basis_;
  std::vector<std::size_t> pivots_;
};

// Exact solve of A x = y over Q for a full-column-rank A (columns given).
std::optional<std::vector<mpq_class>> solve_exact(const std::vector<std::vector<long>>& cols,
                                                  const std::vector<long>& y) {
  const std::size_t R = y.size();
  const std::size_t C = cols.size();
  std::vector<std::vector<mpq_class>> m(R, std::vector<mpq_class>(C + 1));
  for (std::size_t i = 0; i < R; ++i) {
    for (std::size_t j = 0; j < C; ++j) m[i][j] = cols[j][i];
    m[i][C] = y[i];
  }
  std::size_t row = 0;
  std::vector<std::size_t> pivot_row(C, R);
  for (std::size_t j = 0; j < C && row < R; ++j) {
    std::size_t r = row;
    while (r < R && m[r][j] == 0) ++r;
    if (r == R) continue;
    std::swap(m[r], m[row]);
    const mpq_class inv = 1 / m[row][j];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t i = 0; i < R; ++i) {
      if (i == row || m[i][j] == 0) continue;
      const mpq_class f = m[i][j];
      for (std::size_t k = j; k <= C; ++k) m[i][k] -= f * m[row][k];
    }
    pivot_row[j] = row;
    ++row;
  }
  for (std::size_t i = row; i < R; ++i) {
    if (m[i][C] != 0) return std::nullopt;
  }
  std::vector<mpq_class> x(C, 0);
  for (std::size_t j = 0; j < C; ++j) {
    if (pivot_row[j] < R) x[j] = m[pivot_row[j]][C];
  }
  return x;
}

}  // namespace

std::vector<mpq_class> exponent_vector(const mpq_class& x, const std::vector<unsigned>& primes) {
  if (x == 0) throw DomainError("exponent vector of 0");
  std::vector<mpq_class> out(primes.size(), 0);
  mpz_class num = abs(x.get_num());
  mpz_class den = x.get_den();
  for (std::size_t i = 0; i < primes.size(); ++i) {
    mpz_class pz = primes[i];
    long e = static_cast<long>(mpz_remove(num.get_mpz_t(), num.get_mpz_t(), pz.get_mpz_t()));
    e -= static_cast<long>(mpz_remove(den.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t()));
    out[i] = e;
  }
  if (num != 1 || den != 1) {
    throw DomainError("rational " + x.get_str() + " is not supported on the given primes");
  }
  return out;
}

bool verify_decomposition(const SteinbergDecomposition& dec) {
  auto primes = primes_upto(std::max({dec.bound, dec.q, dec.l}), dec.p);
  const std::size_t P = primes.size();
  std::vector<mpq_class> acc(P * P, 0);
  try {
    for (const auto& term : dec.terms) {
      if (term.t == 0 || term.t == 1) return false;
      const auto et = exponent_vector(term.t, primes);
      const auto eu = exponent_vector(1 - term.t, primes);
      for (std::size_t i = 0; i < P; ++i) {
        for (std::size_t j = 0; j < P; ++j) acc[i * P + j] += term.c * et[i] * eu[j];
      }
    }
  } catch (const DomainError&) {
    return false;
  }
  const auto iq = std::find(primes.begin(), primes.end(), dec.q) - primes.begin();
  const auto il = std::find(primes.begin(), primes.end(), dec.l) - primes.begin();
  for (std::size_t i = 0; i < P; ++i) {
    for (std::size_t j = 0; j < P; ++j) {
      const bool hit = static_cast<long>(i) == iq && static_cast<long>(j) == il;
      if (acc[i * P + j] != (hit ? 1 : 0)) return false;
    }
  }
  return true;
}

SteinbergDecomposition steinberg_decompose(unsigned l, unsigned q, unsigned bound, Prime p) {
  if (!is_prime(l) || !is_prime(q)) throw DomainError("steinberg_decompose needs primes l and q");
  if (l > bound || q > bound) throw DomainError("l and q must not exceed the bound");
  if (p == l || p == q) throw DomainError("excluded prime must differ from l and q");
  const auto primes = primes_upto(bound, p);
  const std::size_t P = primes.size();
  const std::size_t iq = std::find(primes.begin(), primes.end(), q) - primes.begin();
  const std::size_t il = std::find(primes.begin(), primes.end(), l) - primes.begin();
  std::vector<long> target(P * P, 0);
  target[iq * P + il] = 1;

  // Exponent vectors of smooth p-free integers up to the height limit.
  const unsigned height_limit = 256 * bound;
  std::vector<std::vector<int>> expo(height_limit + 1);
  for (unsigned n = 1; n <= height_limit; ++n) {
    unsigned r = n;
    std::vector<int> e(P, 0);
    for (std::size_t i = 0; i < P && r > 1; ++i) {
      while (r % primes[i] == 0) {
        r /= primes[i];
        ++e[i];
      }
    }
    if (r == 1) expo[n] = std::move(e);
  }

  ModularSpan span(P * P);
  std::vector<Candidate> chosen;
  std::set<mpq_class> seen;
  auto consider = [&](const mpq_class& t, const std::vector<int>& et, const std::vector<int>& eu) {
    if (!seen.insert(t).second) return false;
    auto vec = outer(et, eu);
    if (!span.add(vec)) return false;
    chosen.push_back({t, std::move(vec)});
    return span.contains(target);
  };

  for (unsigned c = 2; c <= height_limit; ++c) {
    if (expo[c].empty()) continue;
    for (unsigned a = 1; 2 * a <= c; ++a) {
      const unsigned b = c - a;
      if (expo[a].empty() || expo[b].empty() || std::gcd(a, b) != 1) continue;
      const auto& ea = expo[a];
      const auto& eb = expo[b];
      const auto& ec = expo[c];
      const mpq_class A(a), B(b), Cq(c);
      const std::vector<std::tuple<mpq_class, std::vector<int>, std::vector<int>>> orbit = {
          {A / Cq, diff(ea, ec), diff(eb, ec)},  {B / Cq, diff(eb, ec), diff(ea, ec)},
          {Cq / A, diff(ec, ea), diff(eb, ea)},  {Cq / B, diff(ec, eb), diff(ea, eb)},
          {-A / B, diff(ea, eb), diff(ec, eb)},  {-B / A, diff(eb, ea), diff(ec, ea)},
      };
      for (const auto& [t, et, eu] : orbit) {
        mpq_class tt = t;
        tt.canonicalize();
        if (!consider(tt, et, eu)) continue;
        std::vector<std::vector<long>> cols;
        for (const auto& cand : chosen) cols.push_back(cand.vec);
        auto x = solve_exact(cols, target);
        if (!x) continue;
        SteinbergDecomposition dec;
        dec.l = l;
        dec.q = q;
        dec.p = p;
        dec.bound = bound;
        for (std::size_t j = 0; j < chosen.size(); ++j) {
          if ((*x)[j] != 0) dec.terms.push_back({(*x)[j], chosen[j].t});
        }
        if (!verify_decomposition(dec)) {
          throw std::logic_error("Steinberg decomposition failed exact verification");
        }
        return dec;
      }
    }
  }
  throw InsufficientBound("no Steinberg decomposition of [" + std::to_string(q) + "] (x) [" +
                          std::to_string(l) + "] over primes <= " + std::to_string(bound) +
                          " avoiding " + std::to_string(p));
}

std::optional<SteinbergDecomposition> dcw_special_case(unsigned q, Prime p) {
  if (!is_prime(q) || q == 2) return std::nullopt;
  SteinbergDecomposition dec;
  dec.l = 2;
  dec.q = q;
  dec.p = p;
  dec.bound = q;
  // [q] (x) [1-q] = n [q] (x) [2] when q = 2^n + 1; [-q] (x) [1+q] likewise when q = 2^n - 1.
  for (unsigned n = 1; n < 32; ++n) {
    const unsigned long two_n = 1UL << n;
    if (q == two_n + 1) {
      dec.terms.push_back({mpq_class(1, n), mpq_class(q)});
      return dec;
    }
    if (q == two_n - 1) {
      dec.terms.push_back({mpq_class(1, n), mpq_class(-static_cast<long>(q))});
      return dec;
    }
  }
  return std::nullopt;
}

PadicNumber dcw_coefficient(Prime p, int N, const SteinbergDecomposition& dec) {
  if (dec.p != 0 && dec.p != p) throw DomainError("decomposition was built for a different prime");
  PadicNumber sum = PadicNumber::zero(p, N + 2);
  for (const auto& term : dec.terms) {
    const PadicNumber t = PadicNumber::from_rational(p, term.t, N + 2);
    const PadicNumber c = PadicNumber::from_rational(p, term.c, N + 2);
    sum += c * polylog_eval(t, 2, N);
  }
  return (-sum).with_precision(N);
}

SteinbergDecomposition default_decomposition(unsigned q, Prime p) {
  if (auto special = dcw_special_case(q, p)) return *special;
  unsigned bound = std::max(20u, q + 1);
  for (int attempt = 0;; ++attempt) {
    try {
      return steinberg_decompose(2, q, bound, p);
    } catch (const InsufficientBound&) {
      if (attempt >= 4) throw;
      bound += 20;
    }
  }
}

std::string to_json(const SteinbergDecomposition& dec) {
  nlohmann::ordered_json j;
  j["l"] = dec.l;
  j["q"] = dec.q;
  j["p"] = dec.p;
  j["bound"] = dec.bound;
  j["terms"] = nlohmann::ordered_json::array();
  for (const auto& t : dec.terms) {
    j["terms"].push_back({{"c", t.c.get_str()}, {"t", t.t.get_str()}});
  }
  return j.dump();
}

SteinbergDecomposition decomposition_from_json(const std::string& text) {
  SteinbergDecomposition dec;
  try {
    const auto j = nlohmann::json::parse(text);
    dec.l = j.at("l").get<unsigned>();
    dec.q = j.at("q").get<unsigned>();
    dec.p = j.at("p").get<Prime>();
    dec.bound = j.value("bound", std::max(dec.l, dec.q));
    for (const auto& t : j.at("terms")) {
      mpq_class c(t.at("c").get<std::string>());
      mpq_class x(t.at("t").get<std::string>());
      c.canonicalize();
      x.canonicalize();
      dec.terms.push_back({c, x});
    }
  } catch (const std::exception& e) {
    throw ParseError(std::string("malformed decomposition JSON: ") + e.what());
  }
  return dec;
}

}  // namespace ckloci

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ckloci/padic.hpp"

namespace ckloci {

struct SteinbergTerm {
  mpq_class c;
  mpq_class t;
};

/// Coefficients with [q] (x) [l] = sum c_i [t_i] (x) [1 - t_i] in E (x) E,
/// E = Q (x) Q^*. Every t_i and 1 - t_i is a p-unit supported on primes <= bound.
struct SteinbergDecomposition {
  unsigned l = 2;
  unsigned q = 0;
  Prime p = 0;
  unsigned bound = 0;
  std::vector<SteinbergTerm> terms;
};

/// Exponent vector of a nonzero rational over the given primes (sign dropped).
/// Throws DomainError when x has a prime factor outside the list.
std::vector<mpq_class> exponent_vector(const mpq_class& x, const std::vector<unsigned>& primes);

/// True when sum c_i [t_i] (x) [1 - t_i] equals [q] (x) [l] exactly and every
/// t_i, 1 - t_i is a unit at dec.p (when dec.p is set).
bool verify_decomposition(const SteinbergDecomposition& dec);

/// Searches Steinberg elements built from coprime triples a + b = c that are
/// bound-smooth and prime to p, and solves for [q] (x) [l] by exact
/// elimination. Throws InsufficientBound when no combination exists.
SteinbergDecomposition steinberg_decompose(unsigned l, unsigned q, unsigned bound, Prime p);

/// Closed forms for q = 3, Fermat primes 2^n + 1 and Mersenne primes 2^n - 1.
std::optional<SteinbergDecomposition> dcw_special_case(unsigned q, Prime p);

/// a_{tau_q tau_2} = -sum c_i Li_2(t_i), to precision N.
PadicNumber dcw_coefficient(Prime p, int N, const SteinbergDecomposition& dec);

/// Special case when available, otherwise a search starting at max(20, q+1)
/// with the bound raised until a decomposition is found.
SteinbergDecomposition default_decomposition(unsigned q, Prime p);

std::string to_json(const SteinbergDecomposition& dec);
SteinbergDecomposition decomposition_from_json(const std::string& text);

}  // namespace ckloci

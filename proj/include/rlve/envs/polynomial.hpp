#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rlve::poly {

/// Coefficients constant term first. Evaluation is done in long double.
struct Polynomial {
  std::vector<long double> coefficients;

  std::size_t degree() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }
  long double operator()(long double x) const;
  Polynomial derivative() const;
};

Polynomial from_integers(const std::vector<std::int64_t>& coefficients);

/// Real roots in increasing order. Roots are located between consecutive
/// critical points (roots of the derivative, found recursively) and refined
/// by bisection, so only roots where the sign changes, or exact zeros at
/// critical points, are reported.
std::vector<long double> real_roots(const Polynomial& p);

/// Global minimiser of an even-degree polynomial with positive leading
/// coefficient: the critical point with the smallest value.
long double global_minimizer(const Polynomial& p);

/// "3*x^4 - x + 2" style rendering for prompts.
std::string render(const std::vector<std::int64_t>& coefficients);

}  // namespace rlve::poly

#include "rlve/envs/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rlve::poly {

namespace {

int sign(long double v) { return (v > 0) - (v < 0); }

long double bisect(const Polynomial& p, long double lo, long double hi) {
  int s_lo = sign(p(lo));
  for (int i = 0; i < 400; ++i) {
    const long double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    const int s_mid = sign(p(mid));
    if (s_mid == 0) return mid;
    if (s_mid == s_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo + (hi - lo) / 2;
}

long double cauchy_bound(const Polynomial& p) {
  const long double lead = std::fabs(p.coefficients.back());
  long double worst = 0;
  for (std::size_t i = 0; i + 1 < p.coefficients.size(); ++i) {
    worst = std::max(worst, std::fabs(p.coefficients[i]) / lead);
  }
  return 1 + worst;
}

Polynomial trimmed(Polynomial p) {
  while (p.coefficients.size() > 1 && p.coefficients.back() == 0) p.coefficients.pop_back();
  return p;
}

}  // namespace

long double Polynomial::operator()(long double x) const {
  long double acc = 0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  Polynomial d;
  for (std::size_t i = 1; i < coefficients.size(); ++i) {
    d.coefficients.push_back(coefficients[i] * static_cast<long double>(i));
  }
  if (d.coefficients.empty()) d.coefficients.push_back(0);
  return d;
}

Polynomial from_integers(const std::vector<std::int64_t>& coefficients) {
  Polynomial p;
  for (auto c : coefficients) p.coefficients.push_back(static_cast<long double>(c));
  return p;
}

std::vector<long double> real_roots(const Polynomial& input) {
  const Polynomial p = trimmed(input);
  if (p.degree() == 0) return {};
  if (p.degree() == 1) return {-p.coefficients[0] / p.coefficients[1]};

  const long double bound = cauchy_bound(p);
  std::vector<long double> points{-bound};
  for (long double c : real_roots(p.derivative())) {
    if (c > -bound && c < bound) points.push_back(c);
  }
  points.push_back(bound);

  std::vector<long double> roots;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (p(points[i]) == 0) {
      roots.push_back(points[i]);
      continue;
    }
    if (i + 1 == points.size()) break;
    const long double a = points[i];
    const long double b = points[i + 1];
    const int sa = sign(p(a));
    const int sb = sign(p(b));
    if (sa != 0 && sb != 0 && sa != sb) roots.push_back(bisect(p, a, b));
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

long double global_minimizer(const Polynomial& input) {
  const Polynomial p = trimmed(input);
  if (p.degree() < 2 || p.degree() % 2 != 0 || p.coefficients.back() <= 0) {
    throw std::invalid_argument("global_minimizer needs even degree and a positive leading coefficient");
  }
  const auto critical = real_roots(p.derivative());
  long double best_x = 0;
  long double best_v = std::numeric_limits<long double>::infinity();
  for (long double c : critical) {
    const long double v = p(c);
    if (v < best_v) {
      best_v = v;
      best_x = c;
    }
  }
  return best_x;
}

std::string render(const std::vector<std::int64_t>& coefficients) {
  std::string out;
  for (std::size_t i = coefficients.size(); i-- > 0;) {
    const std::int64_t c = coefficients[i];
    if (c == 0) continue;
    const std::int64_t mag = c < 0 ? -c : c;
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (i == 0) {
      out += std::to_string(mag);
      continue;
    }
    if (mag != 1) out += std::to_string(mag) + "*";
    out += "x";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

}  // namespace rlve::poly

#include "sdllg/quadrature.hpp"

#include <cmath>
#include <functional>

namespace sdllg {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Enumerates all compositions of `total` into `parts` non-negative integers.
void compositions(int total, int parts, std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& emit) {
  if (static_cast<int>(cur.size()) == parts - 1) {
    cur.push_back(total);
    emit(cur);
    cur.pop_back();
    return;
  }
  for (int v = total; v >= 0; --v) {
    cur.push_back(v);
    compositions(total - v, parts, cur, emit);
    cur.pop_back();
  }
}

// Grundmann-Moeller weights and barycentric points on the n-simplex,
// normalised so the weights sum to one.
template <std::size_t N1>
void grundmann_moeller(int s, std::vector<std::array<double, N1>>& pts, std::vector<double>& wts) {
  constexpr int n = static_cast<int>(N1) - 1;
  const int d = 2 * s + 1;
  for (int i = 0; i <= s; ++i) {
    const double denom = d + n - 2 * i;
    const double w = ((i % 2) ? -1.0 : 1.0) * std::pow(2.0, -2 * s) * std::pow(denom, d) /
                     (factorial(i) * factorial(d + n - i)) * factorial(n);
    std::vector<int> cur;
    compositions(s - i, n + 1, cur, [&](const std::vector<int>& beta) {
      std::array<double, N1> p{};
      for (int j = 0; j <= n; ++j) p[j] = (2.0 * beta[j] + 1.0) / denom;
      pts.push_back(p);
      wts.push_back(w);
    });
  }
}

}  // namespace

const QuadratureRule& tet_rule_degree2() {
  static const QuadratureRule rule = [] {
    QuadratureRule r;
    const double a = 0.5854101966249685;
    const double b = 0.1381966011250105;
    r.points = {{a, b, b, b}, {b, a, b, b}, {b, b, a, b}, {b, b, b, a}};
    r.weights = {0.25, 0.25, 0.25, 0.25};
    r.degree = 2;
    return r;
  }();
  return rule;
}

QuadratureRule tet_rule_grundmann_moeller(int s) {
  QuadratureRule r;
  grundmann_moeller<4>(s, r.points, r.weights);
  r.degree = 2 * s + 1;
  return r;
}

TriangleRule triangle_rule_grundmann_moeller(int s) {
  TriangleRule r;
  grundmann_moeller<3>(s, r.points, r.weights);
  r.degree = 2 * s + 1;
  return r;
}

double barycentric_monomial_average(const std::array<int, 4>& p) {
  return factorial(3) * factorial(p[0]) * factorial(p[1]) * factorial(p[2]) * factorial(p[3]) /
         factorial(p[0] + p[1] + p[2] + p[3] + 3);
}

}  // namespace sdllg

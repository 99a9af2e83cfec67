#pragma once

#include <array>
#include <vector>

namespace sdllg {

/// Quadrature on the reference tetrahedron in barycentric coordinates.
/// Weights sum to 1, so integrals are obtained by multiplying with the
/// element volume.
struct QuadratureRule {
  std::vector<std::array<double, 4>> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Same on the reference triangle; weights sum to 1 (multiply by area).
struct TriangleRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Symmetric 4-point rule, exact for polynomials of degree 2.
const QuadratureRule& tet_rule_degree2();

/// Grundmann-Moeller rule of odd degree 2s+1 on the tetrahedron.
QuadratureRule tet_rule_grundmann_moeller(int s);

/// Grundmann-Moeller rule of odd degree 2s+1 on the triangle.
TriangleRule triangle_rule_grundmann_moeller(int s);

/// Exact value of the integral of prod lambda_i^{p_i} over the reference
/// tetrahedron, normalised by its volume: 3! prod(p_i!) / (sum p + 3)!.
double barycentric_monomial_average(const std::array<int, 4>& powers);

}  // namespace sdllg

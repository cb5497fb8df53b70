#pragma once

#include <vector>

#include "grid.hpp"
#include "linear_system.hpp"
#include "types.hpp"

namespace plaser {

// Short-time factorization scheme for the time-ordered propagator.
// euler_product multiplies first-order factors I + M h (the literal
// discretization of the formal product solution); midpoint_product upgrades
// each factor to I + M h + (M h)^2/2 with M at the interval midpoint
// (second order), used for cross-validation at matched cost.
enum class ProductMethod { euler_product, midpoint_product };

ProductMethod parse_product_method(const std::string& s);
const char* product_method_name(ProductMethod m);

struct PropagatorGrid {
  TimeGrid grid;
  ProductMethod method = ProductMethod::euler_product;
  std::vector<Mat6> P;  // P[i] = d(t_i, 0), P[0] = I
};

// Evolves the fundamental propagator along the grid. Throws Overflow with
// the blow-up time when any coefficient magnitude passes 1e300.
PropagatorGrid evolve_product(const LinearSystemOps& ops, const TimeGrid& grid,
                              ProductMethod method);

// 1-norm condition estimate via the explicit LU inverse.
double condition_estimate(const Mat6& m);

// d(t_i, t_j) = P[i] P[j]^{-1}. Returns the identity exactly when i == j;
// throws IllConditioned when cond_1(P[j]) > 1e12.
Mat6 interval_propagator(const PropagatorGrid& pg, int i, int j);

}  // namespace plaser

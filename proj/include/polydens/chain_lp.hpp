#pragma once

// The linear program behind the dual modulus and the bounded-Lipschitz
// distance:
//
//   maximize   sum_j c_j phi_j
//   subject to |phi_j| <= bound,  |phi_{j+1} - phi_j| <= step.
//
// The constraint graph is a path, so the value function of a left-to-right
// sweep is concave and piecewise linear; the sweep solves the LP exactly in
// O(G^2) worst case. A dense bounded-variable simplex solves the same
// problem for cross-checking.

#include <span>
#include <vector>

namespace polydens {

enum class LpMethod { Sweep, Simplex };

struct ChainLpResult {
  double value = 0.0;
  std::vector<double> phi;  // an optimal point
};

ChainLpResult solve_chain_lp(std::span<const double> c, double bound, double step,
                             LpMethod method = LpMethod::Sweep);

}  // namespace polydens

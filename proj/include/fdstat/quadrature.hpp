#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace fdstat {

struct QuadratureResult {
  double value = 0.0;
  std::size_t cells = 0;
  double est_error = 0.0;  // |I(cells) - I(coarser)|
};

/// g(t, f_{n-2}) evaluated at a node of B_{n-2}.
using RegionIntegrand = std::function<double(std::span<const double> t, double f_last)>;

/// Integral over B_{n-2} of g(t) * f_{n-2}^(-1/2) dt.
///
/// Coordinates are rewritten as t_k = sqrt(f_{k-1}) sin(theta_k), which maps
/// B_{n-2} to nested theta intervals with constant upper limits and absorbs
/// the f_{n-2}^(-1/2) factor into the smooth weight prod cos^(n-2-k)(theta_k).
/// Each interval is split where its inner lower limit changes branch, and
/// the piece after the split is graded quadratically to absorb the square-root
/// onset there. Every piece uses `cells` Gauss-Legendre panels of order 10.
/// The outermost nodes are evaluated in parallel and reduced by a pairwise
/// sum, so the value is bit-stable for fixed (n, cells).
double integrate_over_region_fixed(std::size_t n, std::size_t cells, const RegionIntegrand& g);

/// As above, with est_error from comparing against half the cell count.
QuadratureResult integrate_over_region(std::size_t n, std::size_t cells, const RegionIntegrand& g);

/// Numerical value of the integral of f_{n-2}^(-1/2) over B_{n-2}.
/// n must be in [3, 8].
QuadratureResult normalization_constant(std::size_t n, std::size_t cells);

}  // namespace fdstat

#pragma once

#include <optional>
#include <vector>

#include "cset_transport/ext_real.hpp"
#include "cset_transport/finite_function.hpp"
#include "cset_transport/markov.hpp"
#include "cset_transport/metric.hpp"

namespace cst {

struct OtResult {
  ExtReal cost;
  /// Absent when the cost is infinite.
  std::optional<JointMeasure> coupling;
};

/// Minimizes sum cost(i,j) pi(i,j) over couplings of mu and nu. `cost` is
/// row-major |mu| x |nu| and may hold +inf; those cells are forced to carry
/// no mass. Throws when the total masses differ by more than 1e-9.
OtResult optimal_coupling(const MeasureData& mu, const MeasureData& nu, const std::vector<double>& cost);

/// W_p(mu, nu) for finite p >= 1 under the metric d on the common space.
ExtReal wasserstein_measures(const MeasureData& mu, const MeasureData& nu, const MetricData& d, double p);

struct KernelOtResult {
  ExtReal cost;
  /// Optimal coupling of m(x) and n(x) for each x; absent for rows of zero
  /// mass and when the cost is infinite.
  std::vector<std::optional<JointMeasure>> couplings;
};

/// W_p(M, N) for kernels X -> Y, computed row by row. Rejects p = inf.
KernelOtResult wasserstein_kernels(const FiniteKernel& m, const FiniteKernel& n, const MeasureData& mu_x,
                                   const MetricData& d_y, double p);

/// W_p(f, M g) for a function f: X -> Z, kernel M: X -> Y and function
/// g: Y -> Z, evaluated in closed form.
ExtReal wasserstein_deterministic(const FiniteFunction& f, const FiniteKernel& m, const FiniteFunction& g,
                                  const MeasureData& mu_x, const MetricData& d_z, double p);

/// Throws cst::Error unless 1 <= p < inf.
void require_finite_order(double p);

}  // namespace cst

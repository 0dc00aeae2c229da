#include "cset_transport/transport.hpp"

#include <cmath>
#include <string>

#include "cset_transport/error.hpp"
#include "cset_transport/lp.hpp"

namespace cst {

void require_finite_order(double p) {
  if (std::isinf(p)) {
    throw Error("order p = inf is not supported here: the transport problem is no longer linear");
  }
  if (!(p >= 1.0)) throw Error("order p must be at least 1");
}

OtResult optimal_coupling(const MeasureData& mu, const MeasureData& nu, const std::vector<double>& cost) {
  const std::size_t n = mu.size(), m = nu.size();
  if (cost.size() != n * m) throw DimensionError("cost matrix must be |mu| x |nu|");
  if (std::abs(mu.total() - nu.total()) > kTolerance) {
    throw Error("couplings need equal total mass, got " + std::to_string(mu.total()) + " and " +
                std::to_string(nu.total()));
  }
  LpModel lp;
  std::vector<std::size_t> var(n * m, static_cast<std::size_t>(-1));
  std::vector<std::vector<LpTerm>> rows(n), cols(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double c = cost[i * m + j];
      if (std::isnan(c) || c < 0.0) throw Error("cost entries must lie in [0, inf]");
      if (std::isinf(c)) continue;
      std::size_t v = lp.add_variable("pi_" + std::to_string(i) + "_" + std::to_string(j));
      lp.set_objective(v, c);
      var[i * m + j] = v;
      rows[i].push_back({v, 1.0});
      cols[j].push_back({v, 1.0});
    }
  }
  for (std::size_t i = 0; i < n; ++i) lp.add_constraint("row_" + std::to_string(i), rows[i], Relation::Eq, mu[i]);
  for (std::size_t j = 0; j < m; ++j) lp.add_constraint("col_" + std::to_string(j), cols[j], Relation::Eq, nu[j]);
  LpSolution sol = solve(lp);
  if (sol.status != LpStatus::Optimal) return {ExtReal::infinity(), std::nullopt};
  std::vector<double> pi(n * m, 0.0);
  for (std::size_t k = 0; k < n * m; ++k) {
    if (var[k] != static_cast<std::size_t>(-1)) pi[k] = sol.values[var[k]];
  }
  return {ExtReal::clamped(snap_objective(lp, sol.objective)), JointMeasure(n, m, std::move(pi))};
}

namespace {

std::vector<double> powered(const MetricData& d, double p) {
  std::vector<double> out(d.entries());
  for (double& v : out) v = std::isinf(v) ? v : std::pow(v, p);
  return out;
}

}  // namespace

ExtReal wasserstein_measures(const MeasureData& mu, const MeasureData& nu, const MetricData& d, double p) {
  require_finite_order(p);
  if (mu.size() != d.size() || nu.size() != d.size()) throw DimensionError("measures must live on the metric's space");
  return optimal_coupling(mu, nu, powered(d, p)).cost.root(p);
}

KernelOtResult wasserstein_kernels(const FiniteKernel& m, const FiniteKernel& n, const MeasureData& mu_x,
                                   const MetricData& d_y, double p) {
  require_finite_order(p);
  if (m.rows() != n.rows() || m.cols() != n.cols()) throw DimensionError("kernels must share domain and codomain");
  if (mu_x.size() != m.rows() || d_y.size() != m.cols()) throw DimensionError("data does not match the kernels");
  const auto cost = powered(d_y, p);
  KernelOtResult out{ExtReal(), std::vector<std::optional<JointMeasure>>(m.rows())};
  ExtReal total;
  for (std::size_t x = 0; x < m.rows(); ++x) {
    if (mu_x[x] == 0.0) continue;
    OtResult r = optimal_coupling(MeasureData(m.row(x)), MeasureData(n.row(x)), cost);
    total += ExtReal(mu_x[x]) * r.cost;
    out.couplings[x] = std::move(r.coupling);
  }
  out.cost = total.root(p);
  if (out.cost.is_infinite()) out.couplings.assign(m.rows(), std::nullopt);
  return out;
}

ExtReal wasserstein_deterministic(const FiniteFunction& f, const FiniteKernel& m, const FiniteFunction& g,
                                  const MeasureData& mu_x, const MetricData& d_z, double p) {
  if (f.size() != m.rows() || g.size() != m.cols() || mu_x.size() != m.rows()) {
    throw DimensionError("f: X -> Z, M: X -> Y and g: Y -> Z do not line up");
  }
  if (!(p >= 1.0)) throw Error("order p must be at least 1");
  ExtReal total;
  for (std::size_t x = 0; x < m.rows(); ++x) {
    if (mu_x[x] == 0.0) continue;
    for (std::size_t y = 0; y < m.cols(); ++y) {
      if (m(x, y) == 0.0) continue;
      ExtReal d = d_z.at(f[x], g[y]);
      total = std::isinf(p) ? max(total, d) : total + ExtReal(mu_x[x] * m(x, y)) * d.pow(p);
    }
  }
  return std::isinf(p) ? total : total.root(p);
}

}  // namespace cst

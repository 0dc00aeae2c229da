#include "cset_transport/relax.hpp"

#include <cmath>

#include "cset_transport/error.hpp"
#include "cset_transport/transport.hpp"

namespace cst {

namespace {

std::string key(std::initializer_list<std::string_view> parts) {
  std::string out;
  for (auto p : parts) {
    if (!out.empty()) out += '_';
    out += p;
  }
  return out;
}

std::string num(std::size_t i) { return std::to_string(i); }

// Phi_c variables, row-major x * |Y(c)| + y.
std::vector<std::size_t> add_phi(LpModel& lp, const Instance& x, const Instance& y, std::size_t c) {
  const std::string& ob = x.theory->objects()[c];
  std::vector<std::size_t> vars(x.sets[c] * y.sets[c]);
  for (std::size_t i = 0; i < x.sets[c]; ++i) {
    std::vector<LpTerm> row;
    for (std::size_t j = 0; j < y.sets[c]; ++j) {
      vars[i * y.sets[c] + j] = lp.add_variable(key({"phi", ob, num(i), num(j)}));
      row.push_back({vars[i * y.sets[c] + j], 1.0});
    }
    lp.add_constraint(key({"row", ob, num(i)}), std::move(row), Relation::Eq, 1.0);
  }
  return vars;
}

double max_abs_diff(const FiniteKernel& a, const FiniteKernel& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k) worst = std::max(worst, std::abs(a.entries()[k] - b.entries()[k]));
  return worst;
}

FiniteKernel extract(const LpSolution& sol, const std::vector<std::size_t>& vars, std::size_t rows, std::size_t cols) {
  std::vector<double> entries(rows * cols);
  for (std::size_t k = 0; k < entries.size(); ++k) entries[k] = sol.values[vars[k]];
  return FiniteKernel::renormalized(rows, cols, std::move(entries), 1e-7);
}

// Every naturality block Xf Phi_c' = Phi_c Yf, within 1e-6.
void verify_natural(const Instance& x, const Instance& y, const MarkovTransformation& phi) {
  const auto& th = *x.theory;
  for (std::size_t g = 0; g < th.generators().size(); ++g) {
    const std::size_t c = th.dom_index(g), c2 = th.cod_index(g);
    FiniteKernel lhs = compose_kernels(embed_function(x.maps[g], x.sets[c2]), phi.components[c2]);
    FiniteKernel rhs = compose_kernels(phi.components[c], embed_function(y.maps[g], y.sets[c2]));
    double err = max_abs_diff(lhs, rhs);
    if (err > 1e-6) {
      throw InternalError("extracted kernels violate naturality at " + th.generators()[g].name + " by " +
                          std::to_string(err));
    }
  }
}

}  // namespace

LpModel markov_feasibility_lp(const Instance& x, const Instance& y, bool measure_preserving) {
  check_compatible(x, y);
  const auto& th = *x.theory;
  LpModel lp;
  std::vector<std::vector<std::size_t>> phi(th.objects().size());
  for (std::size_t c = 0; c < phi.size(); ++c) {
    phi[c] = add_phi(lp, x, y, c);
    if (!x.fixed[c]) continue;
    const std::string& ob = th.objects()[c];
    for (std::size_t i = 0; i < x.sets[c]; ++i) {
      for (std::size_t j = 0; j < y.sets[c]; ++j) {
        lp.add_constraint(key({"fix", ob, num(i), num(j)}), {{phi[c][i * y.sets[c] + j], 1.0}}, Relation::Eq,
                          i == j ? 1.0 : 0.0);
      }
    }
  }
  for (std::size_t g = 0; g < th.generators().size(); ++g) {
    const std::size_t c = th.dom_index(g), c2 = th.cod_index(g);
    const std::size_t ny = y.sets[c], ny2 = y.sets[c2];
    const FiniteFunction& xf = x.maps[g];
    const FiniteFunction& yf = y.maps[g];
    for (std::size_t i = 0; i < x.sets[c]; ++i) {
      std::vector<std::vector<LpTerm>> rows(ny2);
      for (std::size_t j = 0; j < ny2; ++j) rows[j].push_back({phi[c2][xf[i] * ny2 + j], 1.0});
      for (std::size_t z = 0; z < ny; ++z) rows[yf[z]].push_back({phi[c][i * ny + z], -1.0});
      for (std::size_t j = 0; j < ny2; ++j) {
        lp.add_constraint(key({"nat", th.generators()[g].name, num(i), num(j)}), std::move(rows[j]), Relation::Eq,
                          0.0);
      }
    }
  }
  if (measure_preserving) {
    for (std::size_t c = 0; c < phi.size(); ++c) {
      if (x.fixed[c]) continue;
      const MeasureData& mx = x.measure(c);
      const MeasureData& my = y.measure(c);
      for (std::size_t j = 0; j < y.sets[c]; ++j) {
        std::vector<LpTerm> row;
        for (std::size_t i = 0; i < x.sets[c]; ++i) {
          if (mx[i] != 0.0) row.push_back({phi[c][i * y.sets[c] + j], mx[i]});
        }
        lp.add_constraint(key({"mass", th.objects()[c], num(j)}), std::move(row), Relation::Eq, my[j]);
      }
    }
  }
  return lp;
}

std::optional<MarkovTransformation> markov_feasible(const Instance& x, const Instance& y, bool measure_preserving) {
  LpModel lp = markov_feasibility_lp(x, y, measure_preserving);
  LpSolution sol = solve(lp);
  if (sol.status != LpStatus::Optimal) return std::nullopt;
  // Variables were added object by object, row-major.
  MarkovTransformation phi;
  std::size_t next = 0;
  for (std::size_t c = 0; c < x.sets.size(); ++c) {
    std::vector<std::size_t> vars(x.sets[c] * y.sets[c]);
    for (auto& v : vars) v = next++;
    phi.components.push_back(extract(sol, vars, x.sets[c], y.sets[c]));
  }
  verify_natural(x, y, phi);
  if (measure_preserving) {
    for (std::size_t c = 0; c < x.sets.size(); ++c) {
      if (x.fixed[c]) continue;
      auto pushed = apply_measure(x.measure(c), phi.components[c]);
      for (std::size_t j = 0; j < y.sets[c]; ++j) {
        if (std::abs(pushed[j] - y.measure(c)[j]) > 1e-6) throw InternalError("extracted kernels do not preserve measure");
      }
    }
  }
  return phi;
}

std::optional<WassersteinClass> wasserstein_class_from_name(std::string_view name) {
  if (name == "mm") return WassersteinClass::MmShort;
  if (name == "noshort") return WassersteinClass::NoShort;
  return std::nullopt;
}

WassersteinProgram wasserstein_cset_lp(const Instance& x, const Instance& y, double p, WassersteinClass cls) {
  require_finite_order(p);
  check_compatible(x, y);
  const auto& th = *x.theory;
  const std::size_t nob = th.objects().size(), ngen = th.generators().size();
  WassersteinProgram prog;
  prog.p = p;
  prog.phi.resize(nob);
  prog.product_pairs.resize(nob);
  prog.coupling_rows.resize(ngen);
  prog.cost_vectors.resize(nob);
  LpModel& lp = prog.model;

  auto delta = [p](const MetricData& d) {
    std::vector<double> out(d.entries());
    for (double& v : out) v = std::isinf(v) ? v : std::pow(v, p);
    return out;
  };
  auto pin = [&](std::size_t var) {
    lp.set_upper(var, 0.0);
    prog.pinned.push_back(var);
  };

  for (std::size_t c = 0; c < nob; ++c) {
    if (x.fixed[c]) {
      if (y.metrics[c]) prog.cost_vectors[c] = delta(*y.metrics[c]);
      continue;
    }
    (void)x.metric(c);
    prog.cost_vectors[c] = delta(y.metric(c));
    double mx = x.measure(c).total(), my = y.measure(c).total();
    if (mx > my + kTolerance) {
      prog.infinite_reason = "no measure-decreasing kernel on " + th.objects()[c] + ": total mass " +
                             std::to_string(mx) + " exceeds " + std::to_string(my);
      prog.model = LpModel();
      return prog;
    }
  }

  for (std::size_t c = 0; c < nob; ++c) {
    if (x.fixed[c]) continue;
    const std::string& ob = th.objects()[c];
    prog.phi[c] = add_phi(lp, x, y, c);
    const MeasureData& mx = x.measure(c);
    const MeasureData& my = y.measure(c);
    for (std::size_t j = 0; j < y.sets[c]; ++j) {
      std::vector<LpTerm> row;
      for (std::size_t i = 0; i < x.sets[c]; ++i) {
        if (mx[i] != 0.0) row.push_back({prog.phi[c][i * y.sets[c] + j], mx[i]});
      }
      lp.add_constraint(key({"md", ob, num(j)}), std::move(row), Relation::Le, my[j]);
    }
  }

  // Product couplings Pi_c carrying the distance-decreasing constraints.
  for (std::size_t c = 0; c < nob; ++c) {
    if (x.fixed[c]) continue;
    const std::string& ob = th.objects()[c];
    if (cls == WassersteinClass::NoShort) {
      prog.eliminated.push_back("Pi_" + ob + ": no distance constraint requested");
      continue;
    }
    const MetricData& dx = x.metric(c);
    if (dx.is_discrete()) {
      prog.eliminated.push_back("Pi_" + ob + ": discrete metric on X(" + ob + ")");
      continue;
    }
    const std::size_t n = x.sets[c], m = y.sets[c];
    const auto& dy = prog.cost_vectors[c];
    std::size_t dropped = 0;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        double bound = dx.raw(a, b);
        if (std::isinf(bound)) {
          ++dropped;
          continue;
        }
        bound = std::pow(bound, p);
        prog.product_pairs[c].emplace_back(a, b);
        const std::string tag = key({ob, num(a), num(b)});
        std::vector<std::size_t> v(m * m);
        std::vector<LpTerm> shortness;
        for (std::size_t j = 0; j < m; ++j) {
          for (std::size_t k = 0; k < m; ++k) {
            v[j * m + k] = lp.add_variable(key({"prod", tag, num(j), num(k)}));
            double cost = dy[j * m + k];
            if (std::isinf(cost)) {
              pin(v[j * m + k]);
            } else if (cost != 0.0) {
              shortness.push_back({v[j * m + k], cost});
            }
          }
        }
        for (std::size_t j = 0; j < m; ++j) {
          std::vector<LpTerm> row{{prog.phi[c][a * m + j], -1.0}};
          for (std::size_t k = 0; k < m; ++k) row.push_back({v[j * m + k], 1.0});
          lp.add_constraint(key({"pm1", tag, num(j)}), std::move(row), Relation::Eq, 0.0);
        }
        for (std::size_t k = 0; k < m; ++k) {
          std::vector<LpTerm> row{{prog.phi[c][b * m + k], -1.0}};
          for (std::size_t j = 0; j < m; ++j) row.push_back({v[j * m + k], 1.0});
          lp.add_constraint(key({"pm2", tag, num(k)}), std::move(row), Relation::Eq, 0.0);
        }
        lp.add_constraint(key({"short", tag}), std::move(shortness), Relation::Le, bound);
      }
    }
    if (dropped) {
      prog.eliminated.push_back("Pi_" + ob + ": " + std::to_string(dropped) +
                                " pairs at infinite distance impose no constraint");
    }
  }

  // Couplings Pi_f, or the closed form when an endpoint is fixed.
  for (std::size_t g = 0; g < ngen; ++g) {
    const std::string& gen = th.generators()[g].name;
    const std::size_t c = th.dom_index(g), c2 = th.cod_index(g);
    const FiniteFunction& xf = x.maps[g];
    const FiniteFunction& yf = y.maps[g];
    const MeasureData& mu = x.measure(c);
    (void)y.metric(c2);
    const auto& dy = prog.cost_vectors[c2];
    const std::size_t m2 = y.sets[c2];

    if (x.fixed[c] && x.fixed[c2]) {
      for (std::size_t i = 0; i < x.sets[c]; ++i) {
        if (mu[i] == 0.0) continue;
        double cost = dy[xf[i] * m2 + yf[i]];
        if (std::isinf(cost)) {
          prog.infinite_reason = "generator " + gen + " between fixed objects has infinite defect";
          prog.model = LpModel();
          return prog;
        }
        prog.constant += mu[i] * cost;
      }
      prog.eliminated.push_back("Pi_" + gen + ": both ends fixed, constant term");
      continue;
    }
    if (x.fixed[c2]) {
      const std::size_t m = y.sets[c];
      for (std::size_t i = 0; i < x.sets[c]; ++i) {
        if (mu[i] == 0.0) continue;
        for (std::size_t j = 0; j < m; ++j) {
          std::size_t v = prog.phi[c][i * m + j];
          double cost = dy[xf[i] * m2 + yf[j]];
          if (std::isinf(cost)) pin(v);
          else lp.add_objective(v, mu[i] * cost);
        }
      }
      prog.eliminated.push_back("Pi_" + gen + ": fixed codomain, closed form");
      continue;
    }
    if (x.fixed[c]) {
      for (std::size_t i = 0; i < x.sets[c]; ++i) {
        if (mu[i] == 0.0) continue;
        for (std::size_t k = 0; k < m2; ++k) {
          std::size_t v = prog.phi[c2][xf[i] * m2 + k];
          double cost = dy[k * m2 + yf[i]];
          if (std::isinf(cost)) pin(v);
          else lp.add_objective(v, mu[i] * cost);
        }
      }
      prog.eliminated.push_back("Pi_" + gen + ": fixed domain, closed form");
      continue;
    }
    const std::size_t m = y.sets[c];
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < x.sets[c]; ++i) {
      if (mu[i] == 0.0) {
        ++skipped;
        continue;
      }
      prog.coupling_rows[g].push_back(i);
      const std::string tag = key({gen, num(i)});
      std::vector<std::size_t> v(m2 * m2);
      for (std::size_t j = 0; j < m2; ++j) {
        for (std::size_t k = 0; k < m2; ++k) {
          v[j * m2 + k] = lp.add_variable(key({"cpl", tag, num(j), num(k)}));
          double cost = dy[j * m2 + k];
          if (std::isinf(cost)) pin(v[j * m2 + k]);
          else if (cost != 0.0) lp.add_objective(v[j * m2 + k], mu[i] * cost);
        }
      }
      for (std::size_t j = 0; j < m2; ++j) {
        std::vector<LpTerm> row{{prog.phi[c2][xf[i] * m2 + j], -1.0}};
        for (std::size_t k = 0; k < m2; ++k) row.push_back({v[j * m2 + k], 1.0});
        lp.add_constraint(key({"cf1", tag, num(j)}), std::move(row), Relation::Eq, 0.0);
      }
      std::vector<std::vector<LpTerm>> rows(m2);
      for (std::size_t z = 0; z < m; ++z) rows[yf[z]].push_back({prog.phi[c][i * m + z], -1.0});
      for (std::size_t k = 0; k < m2; ++k) {
        for (std::size_t j = 0; j < m2; ++j) rows[k].push_back({v[j * m2 + k], 1.0});
        lp.add_constraint(key({"cf2", tag, num(k)}), std::move(rows[k]), Relation::Eq, 0.0);
      }
    }
    if (skipped) {
      prog.eliminated.push_back("Pi_" + gen + ": " + std::to_string(skipped) + " rows of zero mass");
    }
  }
  return prog;
}

WassersteinResult wasserstein_cset_distance(const Instance& x, const Instance& y, double p, WassersteinClass cls) {
  WassersteinProgram prog = wasserstein_cset_lp(x, y, p, cls);
  if (prog.infinite_reason) return {ExtReal::infinity(), std::nullopt};
  LpSolution sol = solve(prog.model);
  if (sol.status == LpStatus::Infeasible) return {ExtReal::infinity(), std::nullopt};
  if (sol.status == LpStatus::Unbounded) throw InternalError("Wasserstein program reported unbounded");
  MarkovTransformation phi;
  for (std::size_t c = 0; c < x.sets.size(); ++c) {
    if (x.fixed[c]) {
      phi.components.push_back(identity_kernel(x.sets[c]));
      continue;
    }
    FiniteKernel k = extract(sol, prog.phi[c], x.sets[c], y.sets[c]);
    if (!is_measure_decreasing(k, x.measure(c), y.measure(c), 1e-7)) {
      throw InternalError("extracted kernel on " + x.theory->objects()[c] + " is not measure-decreasing");
    }
    phi.components.push_back(std::move(k));
  }
  return {ExtReal::clamped(snap_objective(prog.model, sol.objective) + prog.constant).root(p), std::move(phi)};
}

RelaxationGap relaxation_gap(const Instance& x, const Instance& y, double p, HausdorffConfig cfg) {
  WassersteinClass wc;
  switch (cfg.component_class) {
    case ComponentClass::MmShort: wc = WassersteinClass::MmShort; break;
    case ComponentClass::MeasureDecreasing: wc = WassersteinClass::NoShort; break;
    default: throw Error("the relaxation is defined for the mm and md component classes only");
  }
  cfg.p = p;
  cfg.symmetrize = Symmetrize::None;
  RelaxationGap gap{wasserstein_cset_distance(x, y, p, wc).distance, hausdorff_distance(x, y, cfg).distance};
  if (!le_tol(gap.wasserstein, gap.hausdorff, 1e-6)) {
    throw InternalError("relaxation violated: d_W = " + gap.wasserstein.to_string() +
                        " exceeds d_H = " + gap.hausdorff.to_string());
  }
  return gap;
}

}  // namespace cst

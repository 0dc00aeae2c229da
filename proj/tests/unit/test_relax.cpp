#include <gtest/gtest.h>

#include <limits>
#include <map>
#include <sstream>

#include "cset_transport/error.hpp"
#include "cset_transport/io.hpp"
#include "cset_transport/relax.hpp"
#include "cset_transport/transport.hpp"
#include "oracles.hpp"

using namespace cst;
using namespace cst::testing;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Assigns kernel entries to the phi variables of a feasibility program.
std::vector<double> phi_values(const LpModel& lp, const Instance& x, const std::vector<FiniteKernel>& kernels) {
  std::map<std::string, std::size_t> index;
  for (std::size_t v = 0; v < lp.num_variables(); ++v) index[lp.variables()[v].name] = v;
  std::vector<double> values(lp.num_variables(), 0.0);
  for (std::size_t c = 0; c < kernels.size(); ++c) {
    for (std::size_t i = 0; i < kernels[c].rows(); ++i) {
      for (std::size_t j = 0; j < kernels[c].cols(); ++j) {
        std::string name = "phi_" + x.theory->objects()[c] + "_" + std::to_string(i) + "_" + std::to_string(j);
        values.at(index.at(name)) = kernels[c](i, j);
      }
    }
  }
  return values;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string part; std::getline(in, part, '_');) out.push_back(part);
  return out;
}

void expect_valid_morphism(const Instance& x, const Instance& y, const MarkovTransformation& phi) {
  ASSERT_EQ(phi.components.size(), x.sets.size());
  for (std::size_t c = 0; c < x.sets.size(); ++c) {
    const FiniteKernel& k = phi.components[c];
    EXPECT_EQ(k.rows(), x.sets[c]);
    EXPECT_EQ(k.cols(), y.sets[c]);
    if (x.fixed[c]) EXPECT_EQ(k, identity_kernel(x.sets[c]));
    if (x.measures[c] && y.measures[c]) EXPECT_TRUE(is_measure_decreasing(k, *x.measures[c], *y.measures[c], 1e-7));
  }
}

Instance random_weak_graph(Rng& rng, std::size_t max_v, std::size_t max_e) {
  Instance g = random_graph(rng, max_v, max_e);
  return weak_graph(g.size("V"), g.map("src"), g.map("tgt"));
}

Instance relabeled(const Instance& x, const FiniteFunction& pv, const FiniteFunction& pe) {
  FiniteFunction src(pe.size()), tgt(pe.size());
  for (std::size_t e = 0; e < pe.size(); ++e) {
    src[pe[e]] = pv[x.map("src")[e]];
    tgt[pe[e]] = pv[x.map("tgt")[e]];
  }
  return weak_graph(pv.size(), src, tgt);
}

HausdorffConfig config(double p, ComponentClass cls) {
  HausdorffConfig cfg;
  cfg.p = p;
  cfg.component_class = cls;
  return cfg;
}

}  // namespace

TEST(Feasibility, ProgramShape) {
  Instance x = builtin_instance("fig5x"), y = builtin_instance("fig5y");
  LpModel lp = markov_feasibility_lp(x, y);
  EXPECT_EQ(lp.num_variables(), 2u * 4u + 3u * 4u);
  for (double c : lp.objective()) EXPECT_EQ(c, 0.0);
  for (const auto& row : lp.constraints()) EXPECT_EQ(row.relation, Relation::Eq);
  EXPECT_GT(markov_feasibility_lp(x, y, true).num_constraints(), lp.num_constraints());
}

TEST(Feasibility, FigureFive) {
  Instance x = builtin_instance("fig5x"), y = builtin_instance("fig5y");
  auto phi = markov_feasible(x, y);
  ASSERT_TRUE(phi);
  expect_valid_morphism(x, y, *phi);
  LpModel lp = markov_feasibility_lp(x, y);
  std::vector<Transformation> homs;
  for (const auto& t : enumerate_transformations(x, y, ComponentFilter::all()))
    if (is_natural(x, y, t)) homs.push_back(t);
  ASSERT_EQ(homs.size(), 2u);
  std::vector<double> mixture(lp.num_variables(), 0.0);
  for (const auto& t : homs) {
    std::vector<FiniteKernel> ks;
    for (std::size_t c = 0; c < 2; ++c) ks.push_back(embed_function(t.components[c], y.sets[c]));
    std::vector<double> v = phi_values(lp, x, ks);
    EXPECT_LT(max_residual(lp, v), 1e-12);
    for (std::size_t k = 0; k < v.size(); ++k) mixture[k] += 0.5 * v[k];
  }
  EXPECT_LT(max_residual(lp, mixture), 1e-12);
}

TEST(Feasibility, FigureSixIsInfeasible) {
  EXPECT_FALSE(markov_feasible(builtin_instance("fig6x"), builtin_instance("fig6y")));
}

TEST(Feasibility, FigureSevenUniformSolution) {
  Instance x = builtin_instance("fig7x"), y = builtin_instance("fig7y");
  auto phi = markov_feasible(x, y);
  ASSERT_TRUE(phi);
  expect_valid_morphism(x, y, *phi);
  LpModel lp = markov_feasibility_lp(x, y);
  std::vector<double> uniform = phi_values(lp, x, {uniform_kernel(1, 3), uniform_kernel(1, 3)});
  EXPECT_LT(max_residual(lp, uniform), 1e-12);
  EXPECT_FALSE(find_homomorphism(x, y));
}

TEST(Feasibility, TerminalLoop) {
  Rng rng(1);
  Instance loop = builtin_instance("fig8y");
  for (int trial = 0; trial < 20; ++trial) {
    Instance x = random_weak_graph(rng, 4, 4);
    auto phi = markov_feasible(x, loop);
    ASSERT_TRUE(phi);
    EXPECT_EQ(phi->components[0], uniform_kernel(x.size("E"), 1));
    EXPECT_EQ(phi->components[1], uniform_kernel(x.size("V"), 1));
  }
}

TEST(Feasibility, CyclesAlwaysFeasible) {
  for (std::size_t m = 1; m <= 6; ++m)
    for (std::size_t n = 1; n <= 6; ++n) EXPECT_TRUE(markov_feasible(cycle_graph(m), cycle_graph(n))) << m << " " << n;
}

TEST(Feasibility, SoundWithRespectToHomomorphisms) {
  Rng rng(2);
  int feasible = 0;
  for (int trial = 0; trial < 150; ++trial) {
    Instance x = random_graph(rng, 3, 3), y = random_graph(rng, 3, 3);
    bool hom = find_homomorphism(x, y).has_value();
    bool markov = markov_feasible(x, y).has_value();
    if (hom) EXPECT_TRUE(markov);
    if (!markov) EXPECT_FALSE(hom);
    feasible += markov;
  }
  EXPECT_GT(feasible, 10);
}

TEST(Feasibility, MeasurePreservingIsomorphicCopies) {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    Instance x = random_weak_graph(rng, 4, 4);
    FiniteFunction pv = identity_function(x.size("V")), pe = identity_function(x.size("E"));
    std::shuffle(pv.begin(), pv.end(), rng);
    std::shuffle(pe.begin(), pe.end(), rng);
    Instance y = relabeled(x, pv, pe);
    auto phi = markov_feasible(x, y, true);
    ASSERT_TRUE(phi);
    for (std::size_t c = 0; c < 2; ++c) {
      EXPECT_LE(max_abs_diff(apply_measure(*x.measures[c], phi->components[c]).weights(), y.measures[c]->weights()),
                1e-7);
    }
  }
  Instance c2 = cycle_graph(2), c3 = cycle_graph(3);
  EXPECT_FALSE(markov_feasible(c2, c3, true));
}

TEST(Feasibility, FixedObjectMismatch) {
  std::vector<double> pts{0, 1, 2};
  Instance a = attributed_set({0}, line_metric(pts));
  Instance b = a;
  b.set_fixed("A", false);
  EXPECT_THROW(markov_feasibility_lp(a, b), Error);
  EXPECT_THROW(markov_feasibility_lp(a, cycle_graph(2)), Error);
}

TEST(WassersteinLp, AttributedSetsReduceToTransport) {
  std::vector<double> pts{0, 1, 2, 3};
  MetricData line = line_metric(pts);
  Instance x = attributed_set({0}, line, MeasureData({1})), y = attributed_set({3}, line, MeasureData({1}));
  WassersteinProgram prog = wasserstein_cset_lp(x, y, 1);
  EXPECT_EQ(prog.model.num_variables(), 1u);
  LpSolution s = solve(prog.model);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.objective + prog.constant, 3, 1e-12);
  EXPECT_EQ(wasserstein_cset_distance(x, y, 1).distance, ExtReal(3));
}

TEST(WassersteinLp, InjectiveAttributedSetsGiveClassicalWasserstein) {
  Rng rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t na = 5;
    MetricData line = random_line_metric(rng, na);
    FiniteFunction all = identity_function(na);
    std::shuffle(all.begin(), all.end(), rng);
    std::size_t nx = 1 + uniform_index(rng, 3), ny = 1 + uniform_index(rng, 3);
    FiniteFunction ax(all.begin(), all.begin() + nx), ay(all.end() - ny, all.end());
    MeasureData mu(random_distribution(rng, nx, 0.0)), nu(random_distribution(rng, ny, 0.0));
    double p = 1.0 + uniform_index(rng, 2);
    ExtReal expected = wasserstein_measures(pushforward(ax, mu, na), pushforward(ay, nu, na), line, p);
    WassersteinResult r = wasserstein_cset_distance(attributed_set(ax, line, mu), attributed_set(ay, line, nu), p);
    EXPECT_NEAR(r.distance.value(), expected.value(), 1e-7);
  }
}

TEST(WassersteinLp, WeakGraphEliminations) {
  WassersteinProgram prog = wasserstein_cset_lp(cycle_graph(2), cycle_graph(3), 1);
  const std::size_t e = 0, v = 1;
  EXPECT_TRUE(prog.product_pairs[e].empty());
  EXPECT_EQ(prog.product_pairs[v].size(), 4u);
  EXPECT_NE(std::find(prog.eliminated.begin(), prog.eliminated.end(), "Pi_E: discrete metric on X(E)"),
            prog.eliminated.end());
  EXPECT_EQ(prog.coupling_rows[0].size(), 2u);
  for (const auto& c : prog.cost_vectors) {
    std::size_t n = static_cast<std::size_t>(std::sqrt(double(c.size())));
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(c[i * n + i], 0.0);
  }
  WassersteinProgram loose = wasserstein_cset_lp(cycle_graph(2), cycle_graph(3), 1, WassersteinClass::NoShort);
  EXPECT_TRUE(loose.product_pairs[v].empty());
}

TEST(WassersteinLp, PinnedVariablesMatchInfiniteCosts) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    Instance x = random_weak_graph(rng, 3, 3), y = random_weak_graph(rng, 4, 4);
    WassersteinProgram prog = wasserstein_cset_lp(x, y, 1);
    if (prog.infinite_reason) continue;
    std::vector<bool> pinned(prog.model.num_variables(), false);
    for (auto v : prog.pinned) pinned[v] = true;
    for (std::size_t v = 0; v < prog.model.num_variables(); ++v) {
      auto parts = split(prog.model.variables()[v].name);
      std::size_t cod;
      if (parts[0] == "prod") cod = x.object(parts[1]);
      else if (parts[0] == "cpl") cod = x.theory->cod_index(x.generator(parts[1]));
      else {
        EXPECT_FALSE(pinned[v]);
        continue;
      }
      std::size_t j = std::stoul(parts[parts.size() - 2]), k = std::stoul(parts.back());
      bool infinite = y.metric(cod).at(j, k).is_infinite();
      EXPECT_EQ(pinned[v], infinite) << prog.model.variables()[v].name;
      EXPECT_EQ(prog.model.variables()[v].upper == 0.0, infinite);
    }
  }
}

TEST(WassersteinLp, AllDiscreteIsFeasibilityInDisguise) {
  Rng rng(6);
  for (int trial = 0; trial < 40; ++trial) {
    Instance x = random_graph(rng, 3, 3), y = random_graph(rng, 3, 3);
    for (Instance* g : {&x, &y}) {
      g->set_metric("V", discrete_metric(g->size("V")));
      g->set_metric("E", discrete_metric(g->size("E")));
      g->set_measure("V", MeasureData::uniform(g->size("V")));
      g->set_measure("E", MeasureData::uniform(g->size("E")));
    }
    WassersteinProgram prog = wasserstein_cset_lp(x, y, 1, WassersteinClass::NoShort);
    for (double c : prog.model.objective()) EXPECT_EQ(c, 0.0);
    ExtReal d = wasserstein_cset_distance(x, y, 1, WassersteinClass::NoShort).distance;
    EXPECT_TRUE(d == ExtReal(0) || d.is_infinite());
  }
}

TEST(WassersteinLp, ExportRoundTrip) {
  WassersteinProgram prog = wasserstein_cset_lp(cycle_graph(2), cycle_graph(3), 2);
  std::string text = export_lp(prog.model);
  EXPECT_EQ(export_lp(parse_lp(text)), text);
  EXPECT_THROW(wasserstein_cset_lp(cycle_graph(2), cycle_graph(3), kInf), Error);
}

TEST(WassersteinCset, Cycles) {
  for (std::size_t n = 1; n <= 5; ++n) {
    for (std::size_t m = 1; m <= 5; ++m) {
      WassersteinResult r = wasserstein_cset_distance(cycle_graph(m), cycle_graph(n), 1);
      if (m <= n) {
        EXPECT_NEAR(r.distance.value(), 0.0, 1e-9) << m << " " << n;
        ASSERT_TRUE(r.morphism);
        expect_valid_morphism(cycle_graph(m), cycle_graph(n), *r.morphism);
      } else {
        EXPECT_TRUE(r.distance.is_infinite()) << m << " " << n;
        EXPECT_FALSE(r.morphism);
      }
    }
  }
}

TEST(WassersteinCset, SelfDistanceAndTriangle) {
  Rng rng(7);
  int finite = 0;
  for (int trial = 0; trial < 40; ++trial) {
    Instance x = random_weak_graph(rng, 3, 2), y = random_weak_graph(rng, 3, 3), z = random_weak_graph(rng, 3, 3);
    for (Instance* g : {&x, &y, &z}) {
      g->set_measure("V", MeasureData::uniform(g->size("V")));
      g->set_measure("E", MeasureData::uniform(g->size("E")));
    }
    for (double p : {1.0, 2.0}) {
      EXPECT_NEAR(wasserstein_cset_distance(x, x, p).distance.value(), 0.0, 1e-7);
      ExtReal xz = wasserstein_cset_distance(x, z, p).distance;
      ExtReal xy = wasserstein_cset_distance(x, y, p).distance, yz = wasserstein_cset_distance(y, z, p).distance;
      EXPECT_TRUE(le_tol(xz, xy + yz, 1e-6));
      finite += (xy + yz).is_finite();
    }
  }
  EXPECT_GT(finite, 10);
}

TEST(Gap, Examples) {
  Instance c2 = cycle_graph(2), c4 = cycle_graph(4);
  RelaxationGap same = relaxation_gap(c4, c4, 1, config(1, ComponentClass::MmShort));
  EXPECT_NEAR(same.wasserstein.value(), 0.0, 1e-9);
  EXPECT_EQ(same.hausdorff, ExtReal(0));
  RelaxationGap g = relaxation_gap(c2, c4, 1, config(1, ComponentClass::MeasureDecreasing));
  EXPECT_NEAR(g.wasserstein.value(), 0.0, 1e-9);
  EXPECT_EQ(g.hausdorff, ExtReal(2));
  EXPECT_THROW(relaxation_gap(c2, c4, 1, config(1, ComponentClass::All)), Error);
}

TEST(Gap, RelaxationNeverExceedsHausdorff) {
  Rng rng(8);
  std::vector<double> pts{0, 1, 3};
  MetricData attr = line_metric(pts);
  for (int trial = 0; trial < 40; ++trial) {
    Instance x = random_vgraph(rng, 4, 3, attr), y = random_vgraph(rng, 4, 4, attr);
    for (double p : {1.0, 2.0}) {
      RelaxationGap g = relaxation_gap(x, y, p, config(p, ComponentClass::MmShort));
      EXPECT_TRUE(le_tol(g.wasserstein, g.hausdorff, 1e-6));
    }
  }
}

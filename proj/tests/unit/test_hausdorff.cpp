#include <gtest/gtest.h>

#include <limits>

#include "cset_transport/error.hpp"
#include "cset_transport/hausdorff.hpp"
#include "cset_transport/io.hpp"
#include "oracles.hpp"

using namespace cst;
using namespace cst::testing;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

HausdorffConfig config(double p, ComponentClass cls, Symmetrize sym = Symmetrize::None) {
  HausdorffConfig cfg;
  cfg.p = p;
  cfg.component_class = cls;
  cfg.symmetrize = sym;
  return cfg;
}

ExtReal aggregate(const HausdorffResult& r, double p) { return lp_aggregate(r.per_generator_weights, p); }

// Random weak graph with at most `max_v` vertices and `max_e` edges.
Instance random_weak_graph(Rng& rng, std::size_t max_v, std::size_t max_e) {
  Instance g = random_graph(rng, max_v, max_e);
  return weak_graph(g.size("V"), g.map("src"), g.map("tgt"));
}

// Permutation dynamics with the path metric of its own orbit graph, so that
// T is short and injective.
Instance permutation_system(Rng& rng, std::size_t n) {
  FiniteFunction t = identity_function(n);
  std::shuffle(t.begin(), t.end(), rng);
  Instance x = Instance::empty(std::make_shared<const TheoryPresentation>(builtin_theory(BuiltinTheory::DDS)));
  x.set_size("P", n);
  x.set_map("T", t);
  x.set_metric("P", shortest_path_metric(n, identity_function(n), t));
  x.set_measure("P", MeasureData::counting(n));
  return x;
}

Instance bare(std::string_view name) {
  Instance x = builtin_instance(name);
  x.metrics.assign(x.metrics.size(), std::nullopt);
  x.measures.assign(x.measures.size(), std::nullopt);
  return x;
}

}  // namespace

TEST(Hausdorff, Names) {
  EXPECT_EQ(component_class_from_name("met"), ComponentClass::MetShort);
  EXPECT_EQ(component_class_from_name("mm"), ComponentClass::MmShort);
  EXPECT_EQ(component_class_from_name("md"), ComponentClass::MeasureDecreasing);
  EXPECT_EQ(component_class_from_name("all"), ComponentClass::All);
  EXPECT_FALSE(component_class_from_name("short"));
  EXPECT_EQ(symmetrize_from_name("mean"), Symmetrize::Mean);
  EXPECT_FALSE(symmetrize_from_name("min"));
}

TEST(Hausdorff, WeightsOfNaturalTransformationsVanish) {
  Instance x = builtin_instance("fig5x"), y = builtin_instance("fig5y");
  auto t = find_homomorphism(x, y);
  ASSERT_TRUE(t);
  for (std::size_t g = 0; g < 2; ++g) EXPECT_EQ(transformation_weight(x, y, *t, g, 1), ExtReal(0));
}

TEST(Hausdorff, FigureNineWeights) {
  Instance c2 = builtin_instance("C2"), c4 = builtin_instance("C4");
  Transformation t{{{0, 1}, {0, 1}}};
  EXPECT_EQ(transformation_weight(c2, c4, t, c2.generator("src"), 1), ExtReal(0));
  EXPECT_EQ(transformation_weight(c2, c4, t, c2.generator("tgt"), 1), ExtReal(2));
  Instance discrete = c4;
  discrete.set_metric("V", discrete_metric(4));
  EXPECT_TRUE(transformation_weight(c2, discrete, t, c2.generator("tgt"), 1).is_infinite());
}

TEST(Hausdorff, MissingData) {
  Instance bare = builtin_instance("C2");
  bare.metrics.assign(bare.metrics.size(), std::nullopt);
  Transformation id{{identity_function(2), identity_function(2)}};
  EXPECT_THROW(transformation_weight(bare, bare, id, 0, 1), MissingData);
  EXPECT_THROW(hausdorff_distance(bare, bare), MissingData);
}

TEST(Hausdorff, CycleExample) {
  Instance c2 = builtin_instance("C2"), c4 = builtin_instance("C4");
  HausdorffResult r = hausdorff_distance(c2, c4, config(1, ComponentClass::MeasureDecreasing));
  EXPECT_EQ(r.distance, ExtReal(2));
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->components, (std::vector<FiniteFunction>{{0, 1}, {0, 1}}));
  EXPECT_EQ(r.per_generator_weights, (std::vector<ExtReal>{ExtReal(0), ExtReal(2)}));
  EXPECT_EQ(aggregate(r, 1), r.distance);
  EXPECT_TRUE(hausdorff_distance(c4, c2, config(1, ComponentClass::MeasureDecreasing)).distance.is_infinite());
  EXPECT_TRUE(hausdorff_distance(c4, c2, config(1, ComponentClass::MmShort)).distance.is_infinite());
}

// Under the strict class every component must also be short for the path
// metric on vertices, which no injection of C2 into C4 is.
TEST(Hausdorff, StrictClassExcludesCycleEmbedding) {
  Instance c2 = builtin_instance("C2"), c4 = builtin_instance("C4");
  HausdorffResult r = hausdorff_distance(c2, c4, config(1, ComponentClass::MmShort));
  EXPECT_TRUE(r.distance.is_infinite());
  EXPECT_FALSE(r.witness);
}

TEST(Hausdorff, CycleTable) {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t m = 1; m <= n; ++m) {
      Instance cm = cycle_graph(m), cn = cycle_graph(n);
      ExtReal md = hausdorff_distance(cm, cn, config(1, ComponentClass::MeasureDecreasing)).distance;
      EXPECT_EQ(md, ExtReal(double(std::min(m, n - m)))) << m << " " << n;
      ExtReal mm = hausdorff_distance(cm, cn, config(1, ComponentClass::MmShort)).distance;
      if (m == n || m == 1) EXPECT_EQ(mm, md) << m << " " << n;
      else EXPECT_TRUE(mm.is_infinite()) << m << " " << n;
    }
  }
}

TEST(Hausdorff, IdentityGivesZero) {
  Rng rng(2);
  for (int trial = 0; trial < 40; ++trial) {
    Instance x = random_weak_graph(rng, 3, 3);
    for (auto cls : {ComponentClass::MetShort, ComponentClass::MmShort, ComponentClass::MeasureDecreasing}) {
      EXPECT_EQ(hausdorff_distance(x, x, config(1, cls)).distance, ExtReal(0));
    }
  }
}

TEST(Hausdorff, Symmetrization) {
  Instance c2 = builtin_instance("C2"), c4 = builtin_instance("C4");
  HausdorffResult max = hausdorff_distance(c2, c4, config(1, ComponentClass::MeasureDecreasing, Symmetrize::Max));
  EXPECT_TRUE(max.distance.is_infinite());
  ASSERT_TRUE(max.backward);
  EXPECT_EQ(max.forward, ExtReal(2));
  Instance x = builtin_instance("asetx"), y = builtin_instance("asety");
  HausdorffResult mean = hausdorff_distance(x, y, config(kInf, ComponentClass::MetShort, Symmetrize::Mean));
  EXPECT_EQ(mean.distance, ExtReal(2));
}

TEST(Hausdorff, ClassicalExamples) {
  std::vector<double> pts{0, 1, 2, 3, 4};
  MetricData line = line_metric(pts);
  EXPECT_EQ(classical_hausdorff(attributed_set({0}, line), attributed_set({3}, line)), ExtReal(3));
  EXPECT_EQ(classical_hausdorff(attributed_set({1, 2}, line), attributed_set({4, 2, 1}, line)), ExtReal(0));
  Instance x = builtin_instance("asetx"), y = builtin_instance("asety");
  EXPECT_EQ(classical_hausdorff(x, y), ExtReal(2));
  EXPECT_EQ(classical_hausdorff(y, x), ExtReal(2));
  EXPECT_EQ(hausdorff_distance(x, y, config(kInf, ComponentClass::MetShort, Symmetrize::Max)).distance, ExtReal(2));
  EXPECT_THROW(classical_hausdorff(attributed_set({0}, line), attributed_set({0}, discrete_metric(5))), Error);
}

TEST(Hausdorff, ClassicalMatchesSupInf) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    MetricData d = random_line_metric(rng, 1 + uniform_index(rng, 5));
    FiniteFunction ax = random_function(rng, uniform_index(rng, 4), d.size());
    FiniteFunction ay = random_function(rng, 1 + uniform_index(rng, 3), d.size());
    EXPECT_EQ(classical_hausdorff(attributed_set(ax, d), attributed_set(ay, d)), sup_inf(ax, ay, d));
  }
}

TEST(Hausdorff, DiscreteMetricsReduceToHomomorphisms) {
  EXPECT_TRUE(discrete_hausdorff_is_hom(bare("fig5x"), bare("fig5y")));
  EXPECT_FALSE(discrete_hausdorff_is_hom(bare("fig7x"), bare("fig7y")));
  EXPECT_TRUE(discrete_hausdorff_is_hom(bare("fig7y"), bare("fig7y")));
  EXPECT_THROW(discrete_hausdorff_is_hom(builtin_instance("C2"), builtin_instance("C4")), Error);
  Rng rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    Instance x = random_graph(rng, 3, 3), y = random_graph(rng, 3, 3);
    for (Instance* g : {&x, &y}) {
      g->set_metric("V", discrete_metric(g->size("V")));
      g->set_metric("E", discrete_metric(g->size("E")));
    }
    EXPECT_EQ(discrete_hausdorff_is_hom(x, y), find_homomorphism(x, y).has_value());
  }
}

TEST(Hausdorff, AttributedGraphsMatchDirectFormula) {
  Rng rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    MetricData attr = random_line_metric(rng, 3);
    Instance x = random_vgraph(rng, 3, 3, attr), y = random_vgraph(rng, 3, 3, attr);
    EXPECT_EQ(hausdorff_distance(x, y, config(kInf, ComponentClass::MetShort)).distance, attributed_graph_oracle(x, y));
  }
}

TEST(Hausdorff, TriangleInequality) {
  Rng rng(6);
  int finite = 0;
  for (int trial = 0; trial < 80; ++trial) {
    Instance x = random_weak_graph(rng, 3, 2), y = random_weak_graph(rng, 3, 3), z = random_weak_graph(rng, 3, 3);
    for (auto cls : {ComponentClass::MmShort, ComponentClass::MeasureDecreasing}) {
      for (double p : {1.0, 2.0}) {
        auto cfg = config(p, cls);
        ExtReal xz = hausdorff_distance(x, z, cfg).distance;
        ExtReal xy = hausdorff_distance(x, y, cfg).distance, yz = hausdorff_distance(y, z, cfg).distance;
        EXPECT_TRUE(le_tol(xz, xy + yz, 1e-6));
        finite += (xy + yz).is_finite();
      }
    }
  }
  EXPECT_GT(finite, 20);
}

TEST(Hausdorff, WitnessAggregatesToDistance) {
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    Instance x = random_weak_graph(rng, 3, 3), y = random_weak_graph(rng, 3, 3);
    for (double p : {1.0, 2.0, kInf}) {
      HausdorffResult r = hausdorff_distance(x, y, config(p, ComponentClass::MeasureDecreasing));
      if (!r.witness) continue;
      if (r.distance.is_infinite()) EXPECT_TRUE(aggregate(r, p).is_infinite());
      else EXPECT_NEAR(aggregate(r, p).value(), r.distance.value(), 1e-9);
      for (std::size_t g = 0; g < r.per_generator_weights.size(); ++g) {
        EXPECT_EQ(r.per_generator_weights[g], transformation_weight(x, y, *r.witness, g, p));
      }
    }
  }
}

TEST(Hausdorff, CompositeWeightsAreSubadditive) {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    Instance x = permutation_system(rng, 1 + uniform_index(rng, 4));
    Instance y = permutation_system(rng, 1 + uniform_index(rng, 4));
    Path tt{"P", {"T", "T"}};
    FiniteFunction xtt = evaluate_path(x, tt), ytt = evaluate_path(y, tt);
    for (const auto& phi : enumerate_transformations(x, y, ComponentFilter::all())) {
      for (double p : {1.0, 2.0, kInf}) {
        const FiniteFunction& c = phi.components[0];
        ExtReal composite = lp_distance(then(xtt, c), then(c, ytt), x.measure(0), y.metric(0), p);
        ExtReal single = transformation_weight(x, y, phi, 0, p);
        EXPECT_TRUE(le_tol(composite, single + single, 1e-9));
      }
    }
  }
}

TEST(Hausdorff, GuardIsEnforced) {
  HausdorffConfig cfg = config(1, ComponentClass::All);
  cfg.limits.guard = 10;
  EXPECT_THROW(hausdorff_distance(cycle_graph(3), cycle_graph(3), cfg), GuardExceeded);
}

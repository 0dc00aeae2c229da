#include "cset_transport/hausdorff.hpp"

#include <cmath>

#include "cset_transport/error.hpp"

namespace cst {

std::optional<ComponentClass> component_class_from_name(std::string_view name) {
  if (name == "met") return ComponentClass::MetShort;
  if (name == "mm") return ComponentClass::MmShort;
  if (name == "md") return ComponentClass::MeasureDecreasing;
  if (name == "all") return ComponentClass::All;
  return std::nullopt;
}

std::optional<Symmetrize> symmetrize_from_name(std::string_view name) {
  if (name == "none") return Symmetrize::None;
  if (name == "max") return Symmetrize::Max;
  if (name == "mean") return Symmetrize::Mean;
  return std::nullopt;
}

ComponentFilter component_filter(const Instance& x, const Instance& y, ComponentClass cls, double p) {
  auto mass = [&] {
    return std::isinf(p) ? ComponentFilter::absolutely_continuous(x, y) : ComponentFilter::measure_decreasing(x, y);
  };
  switch (cls) {
    case ComponentClass::MetShort: return ComponentFilter::short_maps(x, y);
    case ComponentClass::MmShort: return ComponentFilter::short_maps(x, y) && mass();
    case ComponentClass::MeasureDecreasing: return mass();
    case ComponentClass::All: return ComponentFilter::all();
  }
  return ComponentFilter::all();
}

ExtReal transformation_weight(const Instance& x, const Instance& y, const Transformation& t, std::size_t generator,
                              double p) {
  const auto& th = *x.theory;
  const std::size_t c = th.dom_index(generator), c2 = th.cod_index(generator);
  FiniteFunction lhs = then(x.maps[generator], t.components[c2]);
  FiniteFunction rhs = then(t.components[c], y.maps[generator]);
  const MetricData& d = y.metric(c2);
  if (std::isinf(p) && !x.measures[c]) return sup_distance(lhs, rhs, d);
  return lp_distance(lhs, rhs, x.measure(c), d, p);
}

namespace {

struct Search {
  ExtReal best = ExtReal::infinity();
  std::optional<Transformation> witness;
  std::vector<ExtReal> weights;
};

Search minimize(const Instance& x, const Instance& y, const HausdorffConfig& cfg) {
  check_compatible(x, y);
  const std::size_t ng = x.theory->generators().size();
  // Touch the data every weight needs so that missing data fails up front.
  for (std::size_t g = 0; g < ng; ++g) {
    (void)y.metric(x.theory->cod_index(g));
    std::size_t c = x.theory->dom_index(g);
    if (!std::isinf(cfg.p)) (void)x.measure(c);
  }
  ComponentFilter filter = component_filter(x, y, cfg.component_class, cfg.p);
  Search s;
  const bool sup = std::isinf(cfg.p);
  ExtReal best_total = ExtReal::infinity();
  std::vector<ExtReal> w(ng);
  for_each_transformation(
      x, y, filter,
      [&](const Transformation& t) {
        // Aggregate without the final root so comparisons are exact on sums.
        ExtReal total;
        for (std::size_t g = 0; g < ng; ++g) {
          w[g] = transformation_weight(x, y, t, g, cfg.p);
          total = sup ? max(total, w[g]) : total + w[g].pow(cfg.p);
          if (s.witness && !(total < best_total)) return true;
        }
        if (!s.witness || total < best_total) {
          best_total = total;
          s.witness = t;
          s.weights = w;
        }
        return best_total.value() > 0.0;
      },
      cfg.limits);
  s.best = s.witness ? (sup ? best_total : best_total.root(cfg.p)) : ExtReal::infinity();
  return s;
}

}  // namespace

HausdorffResult hausdorff_distance(const Instance& x, const Instance& y, const HausdorffConfig& cfg) {
  if (!(cfg.p >= 1.0)) throw Error("order p must be at least 1");
  Search fwd = minimize(x, y, cfg);
  HausdorffResult r;
  r.forward = fwd.best;
  r.distance = fwd.best;
  r.witness = std::move(fwd.witness);
  r.per_generator_weights = std::move(fwd.weights);
  if (cfg.symmetrize != Symmetrize::None) {
    ExtReal back = minimize(y, x, cfg).best;
    r.backward = back;
    if (cfg.symmetrize == Symmetrize::Max) {
      r.distance = max(r.forward, back);
    } else if (r.forward.is_infinite() || back.is_infinite()) {
      r.distance = ExtReal::infinity();
    } else {
      r.distance = ExtReal((r.forward.value() + back.value()) / 2.0);
    }
  }
  return r;
}

ExtReal classical_hausdorff(const Instance& xs, const Instance& ys) {
  if (xs.theory->name() != "ASet" || ys.theory->name() != "ASet") {
    throw Error("classical Hausdorff distance needs attributed sets");
  }
  const std::size_t P = xs.object("P"), A = xs.object("A"), attr = xs.generator("attr");
  if (!xs.fixed[A] || !ys.fixed[A]) throw Error("the attribute object must be fixed");
  if (xs.sets[A] != ys.sets[A] || xs.metric(A) != ys.metric(A)) throw Error("attribute spaces differ");
  const MetricData& d = ys.metric(A);

  ExtReal direct;
  for (std::size_t i = 0; i < xs.sets[P]; ++i) {
    ExtReal nearest = ExtReal::infinity();
    for (std::size_t j = 0; j < ys.sets[P]; ++j) nearest = min(nearest, d.at(xs.maps[attr][i], ys.maps[attr][j]));
    direct = max(direct, nearest);
  }

  Instance x = xs, y = ys;
  x.set_metric("P", discrete_metric(x.sets[P]));
  y.set_metric("P", discrete_metric(y.sets[P]));
  x.measures.assign(x.measures.size(), std::nullopt);
  y.measures.assign(y.measures.size(), std::nullopt);
  HausdorffConfig cfg;
  cfg.p = std::numeric_limits<double>::infinity();
  cfg.component_class = ComponentClass::MetShort;
  cfg.limits.force = true;
  ExtReal via_def = hausdorff_distance(x, y, cfg).distance;
  if (!(via_def == direct) && !(via_def.is_finite() && direct.is_finite() &&
                                std::abs(via_def.value() - direct.value()) <= kTolerance)) {
    throw InternalError("classical Hausdorff: definition gives " + via_def.to_string() + ", sup-inf gives " +
                        direct.to_string());
  }
  return direct;
}

bool discrete_hausdorff_is_hom(const Instance& x, const Instance& y, SearchLimits limits) {
  auto discretize = [](Instance inst) {
    for (std::size_t c = 0; c < inst.sets.size(); ++c) {
      if (inst.metrics[c] && !inst.metrics[c]->is_discrete()) {
        throw Error("object " + inst.theory->objects()[c] + " carries a non-discrete metric");
      }
      inst.metrics[c] = discrete_metric(inst.sets[c]);
      inst.measures[c].reset();
    }
    return inst;
  };
  Instance dx = discretize(x), dy = discretize(y);
  HausdorffConfig cfg;
  cfg.p = std::numeric_limits<double>::infinity();
  cfg.component_class = ComponentClass::MetShort;
  cfg.limits = limits;
  bool zero = hausdorff_distance(dx, dy, cfg).distance == ExtReal(0.0);
  bool hom = find_homomorphism(x, y, limits).has_value();
  if (zero != hom) {
    throw InternalError(std::string("discrete Hausdorff distance ") + (zero ? "is" : "is not") +
                        " zero but a homomorphism " + (hom ? "exists" : "does not exist"));
  }
  return hom;
}

}  // namespace cst

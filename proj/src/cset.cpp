#include "cset_transport/cset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cset_transport/error.hpp"

namespace cst {

Instance Instance::empty(std::shared_ptr<const TheoryPresentation> theory) {
  Instance x;
  const std::size_t objects = theory->objects().size();
  x.sets.assign(objects, 0);
  x.maps.assign(theory->generators().size(), FiniteFunction{});
  x.metrics.assign(objects, std::nullopt);
  x.measures.assign(objects, std::nullopt);
  x.fixed.assign(objects, false);
  x.theory = std::move(theory);
  return x;
}

const MetricData& Instance::metric(std::size_t object) const {
  if (!metrics[object]) throw MissingData("no metric on object " + theory->objects()[object]);
  return *metrics[object];
}

const MeasureData& Instance::measure(std::size_t object) const {
  if (!measures[object]) throw MissingData("no measure on object " + theory->objects()[object]);
  return *measures[object];
}

namespace {

std::string render(const Path& p) {
  if (p.steps.empty()) return "id(" + p.dom + ")";
  std::string out;
  for (const auto& s : p.steps) out += (out.empty() ? "" : ".") + s;
  return out;
}

}  // namespace

void validate_instance(const Instance& x) {
  if (!x.theory) throw ValidationError({"instance has no theory"});
  const auto& t = *x.theory;
  const std::size_t objects = t.objects().size();
  std::vector<std::string> problems;
  if (x.sets.size() != objects) problems.push_back("one cardinality per object is required");
  if (x.maps.size() != t.generators().size()) problems.push_back("one map per generator is required");
  if (x.metrics.size() != objects || x.measures.size() != objects || x.fixed.size() != objects) {
    problems.push_back("metric, measure and fixed tables must have one entry per object");
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));

  for (std::size_t g = 0; g < t.generators().size(); ++g) {
    const auto& gen = t.generators()[g];
    const std::size_t dom = x.sets[t.dom_index(g)], cod = x.sets[t.cod_index(g)];
    if (x.maps[g].size() != dom) {
      problems.push_back("missing map: '" + gen.name + "' has " + std::to_string(x.maps[g].size()) +
                         " entries, expected " + std::to_string(dom));
      continue;
    }
    for (std::size_t i = 0; i < dom; ++i) {
      if (x.maps[g][i] >= cod) {
        problems.push_back("out-of-range map entry: " + gen.name + "[" + std::to_string(i) +
                           "] = " + std::to_string(x.maps[g][i]) + " (codomain size " + std::to_string(cod) + ")");
        break;
      }
    }
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));

  for (const auto& eq : t.equations()) {
    auto lhs = evaluate_path(x, eq.lhs);
    auto rhs = evaluate_path(x, eq.rhs);
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      if (lhs[i] != rhs[i]) {
        std::string prefix = eq.lhs.dom == "E" ? "e" : eq.lhs.dom == "V" ? "v" : eq.lhs.dom + "#";
        problems.push_back("equation " + render(eq.lhs) + " = " + render(eq.rhs) + " violated at " + prefix +
                           std::to_string(i));
        break;
      }
    }
  }

  for (std::size_t c = 0; c < objects; ++c) {
    if (x.metrics[c]) {
      if (x.metrics[c]->size() != x.sets[c]) {
        problems.push_back("metric on " + t.objects()[c] + " has the wrong size");
      } else {
        try {
          x.metrics[c]->validate();
        } catch (const ValidationError& err) {
          problems.push_back("metric on " + t.objects()[c] + ": " + err.what());
        }
      }
    }
    if (x.measures[c] && x.measures[c]->size() != x.sets[c]) {
      problems.push_back("measure on " + t.objects()[c] + " has the wrong size");
    }
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
}

FiniteFunction evaluate_path(const Instance& x, const Path& path) {
  const auto& t = *x.theory;
  auto dom = t.find_object(path.dom);
  if (!dom) throw Error("malformed path: unknown object '" + path.dom + "'");
  FiniteFunction out = identity_function(x.sets[*dom]);
  std::string at = path.dom;
  for (const auto& step : path.steps) {
    auto g = t.find_generator(step);
    if (!g) throw Error("malformed path: unknown generator '" + step + "'");
    if (t.generators()[*g].dom != at) throw Error("malformed path: '" + step + "' is not composable here");
    at = t.generators()[*g].cod;
    out = then(out, x.maps[*g]);
  }
  return out;
}

void check_compatible(const Instance& x, const Instance& y) {
  if (!x.theory || !y.theory || !(*x.theory == *y.theory)) {
    throw Error("theory mismatch: instances are over different theories");
  }
  for (std::size_t c = 0; c < x.sets.size(); ++c) {
    if (x.fixed[c] != y.fixed[c]) {
      throw Error("fixed-object mismatch on " + x.theory->objects()[c] + ": fixed in only one instance");
    }
    if (x.fixed[c] && x.sets[c] != y.sets[c]) {
      throw Error("fixed-object mismatch on " + x.theory->objects()[c] + ": cardinalities differ");
    }
  }
}

void check_transformation(const Instance& x, const Instance& y, const Transformation& t) {
  if (t.components.size() != x.sets.size()) throw DimensionError("transformation needs one component per object");
  for (std::size_t c = 0; c < x.sets.size(); ++c) {
    if (t.components[c].size() != x.sets[c]) {
      throw DimensionError("component " + x.theory->objects()[c] + " has the wrong domain size");
    }
    for (auto v : t.components[c]) {
      if (v >= y.sets[c]) throw DimensionError("component " + x.theory->objects()[c] + " maps out of range");
    }
  }
}

bool is_natural(const Instance& x, const Instance& y, const Transformation& t) {
  check_transformation(x, y, t);
  const auto& th = *x.theory;
  for (std::size_t g = 0; g < th.generators().size(); ++g) {
    const auto& tc = t.components[th.dom_index(g)];
    const auto& tc2 = t.components[th.cod_index(g)];
    for (std::size_t i = 0; i < x.maps[g].size(); ++i) {
      if (tc2[x.maps[g][i]] != y.maps[g][tc[i]]) return false;
    }
  }
  return true;
}

// --- homomorphism search ----------------------------------------------------------

namespace {

class HomSearch {
 public:
  HomSearch(const Instance& x, const Instance& y, SearchLimits limits) : x_(x), y_(y), th_(*x.theory), limits_(limits) {
    const auto& gens = th_.generators();
    preimages_.resize(gens.size());
    for (std::size_t g = 0; g < gens.size(); ++g) {
      preimages_[g].assign(x.sets[th_.cod_index(g)], {});
      for (std::size_t i = 0; i < x.maps[g].size(); ++i) preimages_[g][x.maps[g][i]].push_back(i);
    }
    t_.components.resize(x.sets.size());
    for (std::size_t c = 0; c < x.sets.size(); ++c) t_.components[c].assign(x.sets[c], 0);
  }

  std::optional<Transformation> run() {
    if (assign(0, 0)) return t_;
    return std::nullopt;
  }

 private:
  bool assigned(std::size_t c, std::size_t i) const { return c < object_ || (c == object_ && i <= element_); }

  bool consistent(std::size_t c, std::size_t i) const {
    const std::size_t value = t_.components[c][i];
    for (std::size_t g = 0; g < th_.generators().size(); ++g) {
      const std::size_t dom = th_.dom_index(g), cod = th_.cod_index(g);
      if (dom == c) {
        std::size_t image = x_.maps[g][i];
        if (assigned(cod, image) && t_.components[cod][image] != y_.maps[g][value]) return false;
      }
      if (cod == c) {
        for (std::size_t pre : preimages_[g][i]) {
          if (assigned(dom, pre) && y_.maps[g][t_.components[dom][pre]] != value) return false;
        }
      }
    }
    return true;
  }

  bool assign(std::size_t c, std::size_t i) {
    while (c < x_.sets.size() && i >= x_.sets[c]) {
      ++c;
      i = 0;
    }
    if (c == x_.sets.size()) return true;
    object_ = c;
    element_ = i;
    const std::size_t lo = x_.fixed[c] ? i : 0;
    const std::size_t hi = x_.fixed[c] ? i + 1 : y_.sets[c];
    for (std::size_t v = lo; v < hi; ++v) {
      if (!limits_.force && ++nodes_ > limits_.guard) throw GuardExceeded(static_cast<double>(nodes_), limits_.guard);
      t_.components[c][i] = v;
      object_ = c;
      element_ = i;
      if (consistent(c, i) && assign(c, i + 1)) return true;
    }
    object_ = c;
    element_ = i;
    return false;
  }

  const Instance& x_;
  const Instance& y_;
  const TheoryPresentation& th_;
  SearchLimits limits_;
  std::vector<std::vector<std::vector<std::size_t>>> preimages_;
  Transformation t_;
  std::size_t object_ = 0;
  std::size_t element_ = 0;
  double nodes_ = 0;
};

}  // namespace

std::optional<Transformation> find_homomorphism(const Instance& x, const Instance& y, SearchLimits limits) {
  check_compatible(x, y);
  return HomSearch(x, y, limits).run();
}

// --- component filters ------------------------------------------------------------

ComponentFilter ComponentFilter::all() {
  return {[](std::size_t, std::span<const std::size_t>) { return true; }};
}

ComponentFilter ComponentFilter::injective(const Instance&, const Instance&) {
  return {[](std::size_t, std::span<const std::size_t> prefix) {
    const std::size_t last = prefix.back();
    for (std::size_t i = 0; i + 1 < prefix.size(); ++i) {
      if (prefix[i] == last) return false;
    }
    return true;
  }};
}

ComponentFilter ComponentFilter::short_maps(const Instance& x, const Instance& y) {
  for (std::size_t c = 0; c < x.sets.size(); ++c) {
    if (x.fixed[c]) continue;
    (void)x.metric(c);
    (void)y.metric(c);
  }
  return {[&x, &y](std::size_t c, std::span<const std::size_t> prefix) {
    if (x.fixed[c]) return true;
    const auto& dx = *x.metrics[c];
    const auto& dy = *y.metrics[c];
    const std::size_t k = prefix.size() - 1;
    for (std::size_t i = 0; i <= k; ++i) {
      if (!le_tol(dy.at(prefix[i], prefix[k]), dx.at(i, k))) return false;
      if (!le_tol(dy.at(prefix[k], prefix[i]), dx.at(k, i))) return false;
    }
    return true;
  }};
}

ComponentFilter ComponentFilter::measure_decreasing(const Instance& x, const Instance& y) {
  for (std::size_t c = 0; c < x.sets.size(); ++c) {
    if (x.fixed[c]) continue;
    (void)x.measure(c);
    (void)y.measure(c);
  }
  return {[&x, &y](std::size_t c, std::span<const std::size_t> prefix) {
    if (x.fixed[c]) return true;
    // Pushforward mass only grows as the prefix extends, so checking the
    // target of the newest element suffices.
    const auto& mx = *x.measures[c];
    const std::size_t target = prefix.back();
    double mass = 0.0;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      if (prefix[i] == target) mass += mx[i];
    }
    return mass <= (*y.measures[c])[target] + kTolerance;
  }};
}

ComponentFilter ComponentFilter::absolutely_continuous(const Instance& x, const Instance& y) {
  for (std::size_t c = 0; c < x.sets.size(); ++c) {
    if (x.fixed[c]) continue;
    (void)x.measure(c);
    (void)y.measure(c);
  }
  return {[&x, &y](std::size_t c, std::span<const std::size_t> prefix) {
    if (x.fixed[c]) return true;
    const std::size_t k = prefix.size() - 1;
    return !((*x.measures[c])[k] > 0.0 && (*y.measures[c])[prefix[k]] <= 0.0);
  }};
}

ComponentFilter ComponentFilter::predicate(const Instance& x,
                                           std::function<bool(std::size_t, const FiniteFunction&)> pred) {
  return {[&x, pred = std::move(pred)](std::size_t c, std::span<const std::size_t> prefix) {
    if (prefix.size() < x.sets[c]) return true;
    return pred(c, FiniteFunction(prefix.begin(), prefix.end()));
  }};
}

ComponentFilter operator&&(ComponentFilter a, ComponentFilter b) {
  return {[a = std::move(a), b = std::move(b)](std::size_t c, std::span<const std::size_t> prefix) {
    return a.accept_prefix(c, prefix) && b.accept_prefix(c, prefix);
  }};
}


// --- enumeration --------------------------------------------------------------------

namespace {

void extend(std::size_t c, std::size_t dom, std::size_t cod, const ComponentFilter& filter, FiniteFunction& prefix,
            std::vector<FiniteFunction>& out, double& nodes, const SearchLimits& limits) {
  if (prefix.size() == dom) {
    out.push_back(prefix);
    return;
  }
  for (std::size_t v = 0; v < cod; ++v) {
    if (!limits.force && ++nodes > limits.guard) throw GuardExceeded(nodes, limits.guard);
    prefix.push_back(v);
    if (filter.accept_prefix(c, prefix)) extend(c, dom, cod, filter, prefix, out, nodes, limits);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<std::vector<FiniteFunction>> admissible_components(const Instance& x, const Instance& y,
                                                               const ComponentFilter& filter, SearchLimits limits) {
  check_compatible(x, y);
  std::vector<std::vector<FiniteFunction>> lists(x.sets.size());
  double product = 1.0;
  double nodes = 0.0;
  for (std::size_t c = 0; c < x.sets.size(); ++c) {
    if (x.fixed[c]) {
      lists[c].push_back(identity_function(x.sets[c]));
      continue;
    }
    FiniteFunction prefix;
    prefix.reserve(x.sets[c]);
    extend(c, x.sets[c], y.sets[c], filter, prefix, lists[c], nodes, limits);
    product *= static_cast<double>(lists[c].size());
  }
  if (!limits.force && product > limits.guard) throw GuardExceeded(product, limits.guard);
  return lists;
}

void for_each_transformation(const Instance& x, const Instance& y, const ComponentFilter& filter,
                             const std::function<bool(const Transformation&)>& visitor, SearchLimits limits) {
  auto lists = admissible_components(x, y, filter, limits);
  for (const auto& list : lists) {
    if (list.empty()) return;
  }
  const std::size_t objects = lists.size();
  std::vector<std::size_t> index(objects, 0);
  Transformation t;
  t.components.resize(objects);
  for (std::size_t c = 0; c < objects; ++c) t.components[c] = lists[c][0];
  while (true) {
    if (!visitor(t)) return;
    // Odometer with the last object varying fastest gives lexicographic order.
    std::size_t c = objects;
    while (c > 0) {
      --c;
      if (++index[c] < lists[c].size()) {
        t.components[c] = lists[c][index[c]];
        break;
      }
      index[c] = 0;
      t.components[c] = lists[c][0];
      if (c == 0) return;
    }
    if (objects == 0) return;
  }
}

std::vector<Transformation> enumerate_transformations(const Instance& x, const Instance& y,
                                                      const ComponentFilter& filter, SearchLimits limits) {
  std::vector<Transformation> out;
  for_each_transformation(
      x, y, filter,
      [&](const Transformation& t) {
        out.push_back(t);
        return true;
      },
      limits);
  return out;
}

}  // namespace cst

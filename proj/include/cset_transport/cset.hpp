#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cset_transport/finite_function.hpp"
#include "cset_transport/metric.hpp"
#include "cset_transport/theory.hpp"

namespace cst {

/// A finite C-set over a theory, optionally carrying a metric and a measure
/// on each object. Elements of X(c) are 0..sets[c]-1. All per-object vectors
/// are indexed like theory->objects(), per-generator vectors like
/// theory->generators().
struct Instance {
  std::shared_ptr<const TheoryPresentation> theory;
  std::vector<std::size_t> sets;
  std::vector<FiniteFunction> maps;
  std::vector<std::optional<MetricData>> metrics;
  std::vector<std::optional<MeasureData>> measures;
  /// Objects whose components are pinned to the identity (shared attribute
  /// spaces).
  std::vector<bool> fixed;

  /// An instance with empty carriers and no data.
  static Instance empty(std::shared_ptr<const TheoryPresentation> theory);

  std::size_t object(std::string_view name) const { return theory->object_index(name); }
  std::size_t generator(std::string_view name) const { return theory->generator_index(name); }
  std::size_t size(std::string_view object_name) const { return sets[object(object_name)]; }
  const FiniteFunction& map(std::string_view generator_name) const { return maps[generator(generator_name)]; }

  void set_size(std::string_view object_name, std::size_t n) { sets[object(object_name)] = n; }
  void set_map(std::string_view generator_name, FiniteFunction f) { maps[generator(generator_name)] = std::move(f); }
  void set_metric(std::string_view object_name, MetricData d) { metrics[object(object_name)] = std::move(d); }
  void set_measure(std::string_view object_name, MeasureData mu) { measures[object(object_name)] = std::move(mu); }
  void set_fixed(std::string_view object_name, bool value = true) { fixed[object(object_name)] = value; }

  const MetricData& metric(std::size_t object) const;
  const MeasureData& measure(std::size_t object) const;
};

/// Per-object functions X(c) -> Y(c), not necessarily natural.
struct Transformation {
  std::vector<FiniteFunction> components;

  friend bool operator==(const Transformation&, const Transformation&) = default;
};

/// Throws ValidationError for ill-sized maps, out-of-range entries, violated
/// equations, or malformed metric/measure data.
void validate_instance(const Instance& x);

/// The composite of the generator maps along a path (identity when empty).
FiniteFunction evaluate_path(const Instance& x, const Path& path);

/// For every generator f: c -> c', checks Xf then t_c' == t_c then Yf.
bool is_natural(const Instance& x, const Instance& y, const Transformation& t);

/// Throws DimensionError unless `t` has one total component per object with
/// values in range.
void check_transformation(const Instance& x, const Instance& y, const Transformation& t);

/// Throws when x and y cannot be compared: different theories, or fixed
/// objects that differ in designation or cardinality.
void check_compatible(const Instance& x, const Instance& y);

/// Default refusal threshold for exhaustive enumeration.
inline constexpr double kDefaultGuard = 1e7;

struct SearchLimits {
  double guard = kDefaultGuard;
  bool force = false;
};

/// Exhaustive backtracking search for a C-set morphism, objects in
/// declaration order and elements ascending; the first solution is returned.
/// Fixed objects are pinned to the identity.
std::optional<Transformation> find_homomorphism(const Instance& x, const Instance& y, SearchLimits limits = {});

/// Per-object admissibility of components. Built-in filters keep references
/// to the instances they were made from, which must outlive the filter. `accept_prefix(c, prefix)` is
/// called after each element of X(c) is assigned and may reject early; it
/// sees the full component when prefix.size() == |X(c)|.
struct ComponentFilter {
  std::function<bool(std::size_t object, std::span<const std::size_t> prefix)> accept_prefix;

  static ComponentFilter all();
  static ComponentFilter injective(const Instance& x, const Instance& y);
  /// Short maps for the instances' metrics (throws MissingData when absent).
  static ComponentFilter short_maps(const Instance& x, const Instance& y);
  /// Measure-decreasing maps for the instances' measures.
  static ComponentFilter measure_decreasing(const Instance& x, const Instance& y);
  /// Maps whose pushforward is absolutely continuous.
  static ComponentFilter absolutely_continuous(const Instance& x, const Instance& y);
  /// A full-component predicate (no early pruning).
  static ComponentFilter predicate(const Instance& x,
                                   std::function<bool(std::size_t object, const FiniteFunction& component)> pred);

  friend ComponentFilter operator&&(ComponentFilter a, ComponentFilter b);
};

/// Admissible components for each object in lexicographic order; fixed
/// objects contribute only the identity. Throws GuardExceeded when an object
/// has more than `limits.guard` raw candidates or the product of admissible
/// counts exceeds it, unless forced.
std::vector<std::vector<FiniteFunction>> admissible_components(const Instance& x, const Instance& y,
                                                               const ComponentFilter& filter,
                                                               SearchLimits limits = {});

/// Visits every transformation whose components pass `filter`, in
/// lexicographic order of component tuples. The visitor returns false to stop.
void for_each_transformation(const Instance& x, const Instance& y, const ComponentFilter& filter,
                             const std::function<bool(const Transformation&)>& visitor, SearchLimits limits = {});

std::vector<Transformation> enumerate_transformations(const Instance& x, const Instance& y,
                                                      const ComponentFilter& filter, SearchLimits limits = {});

}  // namespace cst

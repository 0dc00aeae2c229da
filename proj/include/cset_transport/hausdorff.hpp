#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "cset_transport/cset.hpp"
#include "cset_transport/ext_real.hpp"

namespace cst {

/// Which per-object maps a transformation may use.
enum class ComponentClass {
  /// Short maps of metric spaces.
  MetShort,
  /// Short maps that are also measure-decreasing (absolutely continuous when
  /// p is infinite): the short morphisms of mm spaces.
  MmShort,
  /// Measure-decreasing maps with no distance condition.
  MeasureDecreasing,
  /// Any function.
  All,
};

enum class Symmetrize { None, Max, Mean };

struct HausdorffConfig {
  double p = 1.0;
  ComponentClass component_class = ComponentClass::MmShort;
  Symmetrize symmetrize = Symmetrize::None;
  SearchLimits limits;
};

struct HausdorffResult {
  /// The requested value, symmetrized if configured.
  ExtReal distance;
  /// d_H(x, y) alone.
  ExtReal forward;
  /// d_H(y, x), computed only when symmetrizing.
  std::optional<ExtReal> backward;
  /// First minimizer in lexicographic order.
  std::optional<Transformation> witness;
  /// Weight of the witness at each generator, in declaration order.
  std::vector<ExtReal> per_generator_weights;
};

std::optional<ComponentClass> component_class_from_name(std::string_view name);
std::optional<Symmetrize> symmetrize_from_name(std::string_view name);

/// Admissibility filter for a class; the instances must outlive it.
ComponentFilter component_filter(const Instance& x, const Instance& y, ComponentClass cls, double p);

/// The naturality defect of t at generator f: c -> c', the L^p distance
/// between Xf then t_c' and t_c then Yf. For infinite p the supremum runs over
/// the support of X(c)'s measure, or over all of X(c) when it has none.
ExtReal transformation_weight(const Instance& x, const Instance& y, const Transformation& t, std::size_t generator,
                              double p);

/// Infimum over admissible transformations of the l^p sum of weights, by
/// exhaustive enumeration. Infinite when nothing is admissible.
HausdorffResult hausdorff_distance(const Instance& x, const Instance& y, const HausdorffConfig& cfg = {});

/// sup_x inf_y d(attr x, attr y) for attributed sets sharing a fixed attribute
/// space. Computed through hausdorff_distance and checked against the direct
/// formula.
ExtReal classical_hausdorff(const Instance& xs, const Instance& ys);

/// With discrete metrics, a zero Hausdorff distance means a homomorphism
/// exists. Runs both computations and throws InternalError on disagreement.
bool discrete_hausdorff_is_hom(const Instance& x, const Instance& y, SearchLimits limits = {});

}  // namespace cst

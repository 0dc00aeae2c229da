#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cset_transport/cset.hpp"
#include "cset_transport/hausdorff.hpp"
#include "cset_transport/lp.hpp"
#include "cset_transport/markov.hpp"

namespace cst {

inline constexpr std::size_t kNoVariable = static_cast<std::size_t>(-1);

/// Feasibility program for a Markov morphism: stochastic Phi_c, one equality
/// block Xf Phi_c' = Phi_c Yf per generator, identity on fixed objects, and
/// optionally mu_X Phi_c = mu_Y. Variable phi_c_x_y is Phi_c(y | x).
LpModel markov_feasibility_lp(const Instance& x, const Instance& y, bool measure_preserving = false);

/// Solves the feasibility program and returns verified row-stochastic
/// components, or nothing when infeasible.
std::optional<MarkovTransformation> markov_feasible(const Instance& x, const Instance& y,
                                                    bool measure_preserving = false);

enum class WassersteinClass {
  /// Distance- and measure-decreasing kernels.
  MmShort,
  /// Measure-decreasing kernels only.
  NoShort,
};

std::optional<WassersteinClass> wasserstein_class_from_name(std::string_view name);

struct WassersteinProgram {
  LpModel model;
  double p = 1.0;
  /// Per object: variable of Phi_c(y | x) at x * |Y(c)| + y. Empty for fixed
  /// objects (identity).
  std::vector<std::vector<std::size_t>> phi;
  /// Per object: the retained pairs (x, x') whose product coupling Pi_c is in
  /// the program.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> product_pairs;
  /// Per generator: the x in X(c) whose coupling Pi_f(. | x) is in the program.
  std::vector<std::vector<std::size_t>> coupling_rows;
  /// Per object: d_Y(c)^p, row-major, +inf kept.
  std::vector<std::vector<double>> cost_vectors;
  /// Variables fixed to zero because they multiply an infinite cost.
  std::vector<std::size_t> pinned;
  /// Objective contribution of generators between fixed objects.
  double constant = 0.0;
  /// Set when the program is known to be infeasible (or the value infinite)
  /// without solving; the model is then empty.
  std::optional<std::string> infinite_reason;
  /// One line per simplification applied.
  std::vector<std::string> eliminated;
};

/// Builds the linear program whose value is d_{W,p}(X, Y)^p.
WassersteinProgram wasserstein_cset_lp(const Instance& x, const Instance& y, double p,
                                       WassersteinClass cls = WassersteinClass::MmShort);

struct WassersteinResult {
  ExtReal distance;
  /// An optimal Markov transformation; absent when the distance is infinite.
  std::optional<MarkovTransformation> morphism;
};

WassersteinResult wasserstein_cset_distance(const Instance& x, const Instance& y, double p,
                                            WassersteinClass cls = WassersteinClass::MmShort);

struct RelaxationGap {
  ExtReal wasserstein;
  ExtReal hausdorff;
};

/// (d_W, d_H) for the Hausdorff configuration and its Markov relaxation
/// (MmShort pairs with MmShort, MeasureDecreasing with NoShort). Throws
/// InternalError if d_W > d_H + 1e-6.
RelaxationGap relaxation_gap(const Instance& x, const Instance& y, double p, HausdorffConfig cfg = {});

}  // namespace cst

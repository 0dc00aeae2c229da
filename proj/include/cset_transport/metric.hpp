#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cset_transport/ext_real.hpp"
#include "cset_transport/finite_function.hpp"

namespace cst {

struct Instance;

/// A Lawvere metric on {0..n-1}: zero diagonal and the triangle inequality,
/// values in [0, inf]. Symmetry is not required.
class MetricData {
 public:
  MetricData() = default;
  /// Row-major n*n entries; +inf allowed. Does not validate, see validate().
  MetricData(std::size_t n, std::vector<double> entries);
  static MetricData from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return n_; }
  ExtReal at(std::size_t i, std::size_t j) const { return ExtReal(entries_[i * n_ + j]); }
  double raw(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  const std::vector<double>& entries() const { return entries_; }

  bool is_symmetric(double tol = kTolerance) const;
  bool is_discrete() const;

  /// Throws ValidationError naming the first offending pairs (nonzero
  /// diagonal, negative entry, triangle inequality violation).
  void validate(double tol = kTolerance) const;

  friend bool operator==(const MetricData&, const MetricData&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
};

/// A finite measure on {0..n-1}: nonnegative finite weights.
class MeasureData {
 public:
  MeasureData() = default;
  explicit MeasureData(std::vector<double> weights);

  static MeasureData counting(std::size_t n);
  /// Total mass 1 spread evenly; the empty set gets the zero measure.
  static MeasureData uniform(std::size_t n);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  double total() const;

  friend bool operator==(const MeasureData&, const MeasureData&) = default;

 private:
  std::vector<double> weights_;
};

/// 0 on the diagonal and inf elsewhere.
MetricData discrete_metric(std::size_t n);

/// |x_i - x_j| for points on the real line.
MetricData line_metric(std::span<const double> points);

/// Directed shortest-path distances on a graph with `n_vertices` vertices and
/// edges (src[e], tgt[e]); edge count when `weights` is absent.
MetricData shortest_path_metric(std::size_t n_vertices, const FiniteFunction& src, const FiniteFunction& tgt,
                                std::optional<std::span<const double>> weights = std::nullopt);

/// Shortest-path metric on the V object of a graph-like instance (objects V
/// and E, generators src and tgt).
MetricData shortest_path_metric(const Instance& x, std::optional<std::span<const double>> weights = std::nullopt);

/// d_Y(f(x), f(x')) <= d_X(x, x') for all pairs.
bool is_short_map(const FiniteFunction& f, const MetricData& dx, const MetricData& dy, double tol = kTolerance);

/// The pushforward measure muX f on the codomain of size `cod`.
MeasureData pushforward(const FiniteFunction& f, const MeasureData& mu_x, std::size_t cod);

/// muX f <= muY entrywise.
bool is_measure_decreasing(const FiniteFunction& f, const MeasureData& mu_x, const MeasureData& mu_y,
                           double tol = kTolerance);

/// muX f << muY: no positive mass lands where muY vanishes.
bool is_absolutely_continuous(const FiniteFunction& f, const MeasureData& mu_x, const MeasureData& mu_y);

/// The L^p distance between f, g: X -> Y. For infinite p, the supremum over
/// the support of muX.
ExtReal lp_distance(const FiniteFunction& f, const FiniteFunction& g, const MeasureData& mu_x, const MetricData& dy,
                    double p);

/// The supremum distance over all of X (no measure).
ExtReal sup_distance(const FiniteFunction& f, const FiniteFunction& g, const MetricData& dy);

}  // namespace cst

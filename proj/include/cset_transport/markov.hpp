#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cset_transport/ext_real.hpp"
#include "cset_transport/finite_function.hpp"
#include "cset_transport/metric.hpp"

namespace cst {

/// A Markov kernel between finite sets: a rows x cols right-stochastic
/// matrix stored row-major.
class FiniteKernel {
 public:
  FiniteKernel() = default;
  /// Validates nonnegativity and unit row sums within `tol`.
  FiniteKernel(std::size_t rows, std::size_t cols, std::vector<double> entries, double tol = kTolerance);
  static FiniteKernel from_rows(const std::vector<std::vector<double>>& rows, std::size_t cols);

  /// Divides each row by its sum. Rows whose sum deviates from 1 by more
  /// than `max_drift` are rejected, as are negative entries beyond `max_drift`
  /// (smaller negatives are clamped to zero).
  static FiniteKernel renormalized(std::size_t rows, std::size_t cols, std::vector<double> entries, double max_drift);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return p_[i * cols_ + j]; }
  const std::vector<double>& entries() const { return p_; }
  std::vector<double> row(std::size_t i) const;

  friend bool operator==(const FiniteKernel&, const FiniteKernel&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> p_;
};

/// A finite nonnegative measure on a product X x Y, row-major.
class JointMeasure {
 public:
  JointMeasure() = default;
  JointMeasure(std::size_t rows, std::size_t cols, std::vector<double> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return m_[i * cols_ + j]; }
  const std::vector<double>& entries() const { return m_; }

  MeasureData row_marginal() const;
  MeasureData col_marginal() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> m_;
};

/// Kernel components X(c) -> Y(c), indexed like the theory's objects.
struct MarkovTransformation {
  std::vector<FiniteKernel> components;
};

FiniteKernel identity_kernel(std::size_t n);
/// Every row is the uniform distribution on the codomain.
FiniteKernel uniform_kernel(std::size_t rows, std::size_t cols);

/// The deterministic kernel x |-> delta_{f(x)}.
FiniteKernel embed_function(const FiniteFunction& f, std::size_t cod);

/// Every row is a point mass (within tolerance).
bool is_deterministic(const FiniteKernel& m, double tol = kTolerance);

/// Diagrammatic composite M then N (the matrix product M N).
FiniteKernel compose_kernels(const FiniteKernel& m, const FiniteKernel& n);

/// The measure mu M on the codomain.
MeasureData apply_measure(const MeasureData& mu, const FiniteKernel& m);

/// The joint measure (mu (x) M)(x, y) = mu(x) M(y|x).
JointMeasure product_measure(const MeasureData& mu, const FiniteKernel& m);

/// Splits pi into its X-marginal and conditional kernel; zero-mass rows get
/// the uniform distribution.
std::pair<MeasureData, FiniteKernel> disintegrate(const JointMeasure& pi);

/// Index of (y, z) in a product Y x Z of which Z has `z_size` elements.
inline std::size_t pair_index(std::size_t y, std::size_t z, std::size_t z_size) { return y * z_size + z; }

/// Whether pi: X -> Y x Z has marginals m along Y and n along Z.
bool is_coupling(const FiniteKernel& pi, const FiniteKernel& m, const FiniteKernel& n, double tol = kTolerance);

/// Whether pi: W x X -> Y x Z has marginal m along (W, Y) and n along (X, Z).
bool is_product(const FiniteKernel& pi, const FiniteKernel& m, const FiniteKernel& n, double tol = kTolerance);

/// (w, x) |-> M(w) (x) N(x).
FiniteKernel independent_product(const FiniteKernel& m, const FiniteKernel& n);

/// x |-> M(x) (x) N(x), the independent coupling of kernels with a common
/// domain.
FiniteKernel independent_coupling(const FiniteKernel& m, const FiniteKernel& n);

/// M then the diagonal Y -> Y x Y.
FiniteKernel diagonal_coupling(const FiniteKernel& m);

/// mu M <= nu entrywise.
bool is_measure_decreasing(const FiniteKernel& m, const MeasureData& mu_x, const MeasureData& mu_y,
                           double tol = kTolerance);

}  // namespace cst

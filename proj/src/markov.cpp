#include "cset_transport/markov.hpp"

#include <cmath>
#include <string>

#include "cset_transport/error.hpp"

namespace cst {

FiniteKernel::FiniteKernel(std::size_t rows, std::size_t cols, std::vector<double> entries, double tol)
    : rows_(rows), cols_(cols), p_(std::move(entries)) {
  if (p_.size() != rows_ * cols_) throw DimensionError("kernel entries must be rows x cols");
  for (std::size_t i = 0; i < rows_; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
      double v = p_[i * cols_ + j];
      if (!std::isfinite(v) || v < 0.0) {
        throw ValidationError({"kernel entry (" + std::to_string(i) + "," + std::to_string(j) + ") is negative"});
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) {
      throw ValidationError({"kernel row " + std::to_string(i) + " sums to " + std::to_string(sum) + ", not 1"});
    }
  }
}

FiniteKernel FiniteKernel::from_rows(const std::vector<std::vector<double>>& rows, std::size_t cols) {
  std::vector<double> entries;
  entries.reserve(rows.size() * cols);
  for (const auto& row : rows) {
    if (row.size() != cols) throw DimensionError("kernel row has the wrong length");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return FiniteKernel(rows.size(), cols, std::move(entries));
}

FiniteKernel FiniteKernel::renormalized(std::size_t rows, std::size_t cols, std::vector<double> entries,
                                        double max_drift) {
  if (entries.size() != rows * cols) throw DimensionError("kernel entries must be rows x cols");
  for (std::size_t i = 0; i < rows; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      double& v = entries[i * cols + j];
      if (v < -max_drift) throw ValidationError({"kernel row " + std::to_string(i) + " has a negative entry"});
      if (v < 0.0) v = 0.0;
      sum += v;
    }
    if (std::abs(sum - 1.0) > max_drift) {
      throw ValidationError({"kernel row " + std::to_string(i) + " sums to " + std::to_string(sum) +
                             ", beyond the renormalization threshold"});
    }
    for (std::size_t j = 0; j < cols; ++j) entries[i * cols + j] /= sum;
  }
  return FiniteKernel(rows, cols, std::move(entries));
}

std::vector<double> FiniteKernel::row(std::size_t i) const {
  return std::vector<double>(p_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                             p_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

JointMeasure::JointMeasure(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), m_(std::move(entries)) {
  if (m_.size() != rows_ * cols_) throw DimensionError("joint measure entries must be rows x cols");
  for (double v : m_) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError({"joint measure entries must be finite and nonnegative"});
  }
}

MeasureData JointMeasure::row_marginal() const {
  std::vector<double> out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j);
  }
  return MeasureData(std::move(out));
}

MeasureData JointMeasure::col_marginal() const {
  std::vector<double> out(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out[j] += (*this)(i, j);
  }
  return MeasureData(std::move(out));
}

FiniteKernel identity_kernel(std::size_t n) { return embed_function(identity_function(n), n); }

FiniteKernel uniform_kernel(std::size_t rows, std::size_t cols) {
  if (rows > 0 && cols == 0) throw DimensionError("no kernel from a nonempty set into the empty set");
  return FiniteKernel(rows, cols, std::vector<double>(rows * cols, cols ? 1.0 / static_cast<double>(cols) : 0.0));
}

FiniteKernel embed_function(const FiniteFunction& f, std::size_t cod) {
  std::vector<double> entries(f.size() * cod, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] >= cod) throw DimensionError("function value out of range at " + std::to_string(i));
    entries[i * cod + f[i]] = 1.0;
  }
  return FiniteKernel(f.size(), cod, std::move(entries));
}

bool is_deterministic(const FiniteKernel& m, double tol) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      double v = m(i, j);
      if (std::abs(v - 1.0) <= tol && !found) {
        found = true;
      } else if (std::abs(v) > tol) {
        return false;
      }
    }
    if (!found) return false;
  }
  return true;
}

FiniteKernel compose_kernels(const FiniteKernel& m, const FiniteKernel& n) {
  if (m.cols() != n.rows()) {
    throw DimensionError("cannot compose " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + " with " +
                         std::to_string(n.rows()) + "x" + std::to_string(n.cols()));
  }
  std::vector<double> out(m.rows() * n.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t k = 0; k < m.cols(); ++k) {
      double a = m(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < n.cols(); ++j) out[i * n.cols() + j] += a * n(k, j);
    }
  }
  return FiniteKernel(m.rows(), n.cols(), std::move(out), 1e-7);
}

MeasureData apply_measure(const MeasureData& mu, const FiniteKernel& m) {
  if (mu.size() != m.rows()) throw DimensionError("measure and kernel dimensions differ");
  std::vector<double> out(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += mu[i] * m(i, j);
  }
  return MeasureData(std::move(out));
}

JointMeasure product_measure(const MeasureData& mu, const FiniteKernel& m) {
  if (mu.size() != m.rows()) throw DimensionError("measure and kernel dimensions differ");
  std::vector<double> out(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out[i * m.cols() + j] = mu[i] * m(i, j);
  }
  return JointMeasure(m.rows(), m.cols(), std::move(out));
}

std::pair<MeasureData, FiniteKernel> disintegrate(const JointMeasure& pi) {
  MeasureData mu = pi.row_marginal();
  std::vector<double> k(pi.rows() * pi.cols());
  for (std::size_t i = 0; i < pi.rows(); ++i) {
    for (std::size_t j = 0; j < pi.cols(); ++j) {
      k[i * pi.cols() + j] = mu[i] > 0.0 ? pi(i, j) / mu[i] : 1.0 / static_cast<double>(pi.cols());
    }
  }
  return {std::move(mu), FiniteKernel(pi.rows(), pi.cols(), std::move(k), 1e-7)};
}

namespace {

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

bool is_coupling(const FiniteKernel& pi, const FiniteKernel& m, const FiniteKernel& n, double tol) {
  const std::size_t ny = m.cols(), nz = n.cols();
  if (m.rows() != n.rows() || pi.rows() != m.rows() || pi.cols() != ny * nz) {
    throw DimensionError("coupling dimensions do not match its marginals");
  }
  for (std::size_t x = 0; x < pi.rows(); ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      double s = 0.0;
      for (std::size_t z = 0; z < nz; ++z) s += pi(x, pair_index(y, z, nz));
      if (!close(s, m(x, y), tol)) return false;
    }
    for (std::size_t z = 0; z < nz; ++z) {
      double s = 0.0;
      for (std::size_t y = 0; y < ny; ++y) s += pi(x, pair_index(y, z, nz));
      if (!close(s, n(x, z), tol)) return false;
    }
  }
  return true;
}

bool is_product(const FiniteKernel& pi, const FiniteKernel& m, const FiniteKernel& n, double tol) {
  const std::size_t nw = m.rows(), nx = n.rows(), ny = m.cols(), nz = n.cols();
  if (pi.rows() != nw * nx || pi.cols() != ny * nz) throw DimensionError("product dimensions do not match its factors");
  for (std::size_t w = 0; w < nw; ++w) {
    for (std::size_t x = 0; x < nx; ++x) {
      const std::size_t r = pair_index(w, x, nx);
      for (std::size_t y = 0; y < ny; ++y) {
        double s = 0.0;
        for (std::size_t z = 0; z < nz; ++z) s += pi(r, pair_index(y, z, nz));
        if (!close(s, m(w, y), tol)) return false;
      }
      for (std::size_t z = 0; z < nz; ++z) {
        double s = 0.0;
        for (std::size_t y = 0; y < ny; ++y) s += pi(r, pair_index(y, z, nz));
        if (!close(s, n(x, z), tol)) return false;
      }
    }
  }
  return true;
}

FiniteKernel independent_product(const FiniteKernel& m, const FiniteKernel& n) {
  const std::size_t nw = m.rows(), nx = n.rows(), ny = m.cols(), nz = n.cols();
  std::vector<double> out(nw * nx * ny * nz);
  const std::size_t cols = ny * nz;
  for (std::size_t w = 0; w < nw; ++w) {
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) {
        for (std::size_t z = 0; z < nz; ++z) out[pair_index(w, x, nx) * cols + pair_index(y, z, nz)] = m(w, y) * n(x, z);
      }
    }
  }
  return FiniteKernel(nw * nx, cols, std::move(out), 1e-7);
}

FiniteKernel independent_coupling(const FiniteKernel& m, const FiniteKernel& n) {
  if (m.rows() != n.rows()) throw DimensionError("coupled kernels need a common domain");
  const std::size_t ny = m.cols(), nz = n.cols();
  std::vector<double> out(m.rows() * ny * nz);
  for (std::size_t x = 0; x < m.rows(); ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      for (std::size_t z = 0; z < nz; ++z) out[x * ny * nz + pair_index(y, z, nz)] = m(x, y) * n(x, z);
    }
  }
  return FiniteKernel(m.rows(), ny * nz, std::move(out), 1e-7);
}

FiniteKernel diagonal_coupling(const FiniteKernel& m) {
  const std::size_t ny = m.cols();
  std::vector<double> out(m.rows() * ny * ny, 0.0);
  for (std::size_t x = 0; x < m.rows(); ++x) {
    for (std::size_t y = 0; y < ny; ++y) out[x * ny * ny + pair_index(y, y, ny)] = m(x, y);
  }
  return FiniteKernel(m.rows(), ny * ny, std::move(out), 1e-7);
}

bool is_measure_decreasing(const FiniteKernel& m, const MeasureData& mu_x, const MeasureData& mu_y, double tol) {
  if (mu_y.size() != m.cols()) throw DimensionError("codomain measure has the wrong size");
  auto pushed = apply_measure(mu_x, m);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (pushed[j] > mu_y[j] + tol) return false;
  }
  return true;
}

}  // namespace cst

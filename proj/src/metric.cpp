#include "cset_transport/metric.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cset_transport/cset.hpp"
#include "cset_transport/error.hpp"

namespace cst {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_function(const FiniteFunction& f, std::size_t dom, std::size_t cod, const char* what) {
  if (f.size() != dom) {
    throw DimensionError(std::string(what) + ": function has domain size " + std::to_string(f.size()) +
                         ", expected " + std::to_string(dom));
  }
  for (auto v : f) {
    if (v >= cod) throw DimensionError(std::string(what) + ": function value out of range");
  }
}

}  // namespace

MetricData::MetricData(std::size_t n, std::vector<double> entries) : n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n_ * n_) throw DimensionError("metric matrix must be n x n");
}

MetricData MetricData::from_rows(const std::vector<std::vector<double>>& rows) {
  std::vector<double> entries;
  entries.reserve(rows.size() * rows.size());
  for (const auto& row : rows) {
    if (row.size() != rows.size()) throw DimensionError("metric matrix must be square");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return MetricData(rows.size(), std::move(entries));
}

bool MetricData::is_symmetric(double tol) const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      double a = raw(i, j), b = raw(j, i);
      if (std::isinf(a) != std::isinf(b)) return false;
      if (!std::isinf(a) && std::abs(a - b) > tol) return false;
    }
  }
  return true;
}

bool MetricData::is_discrete() const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (i != j && !std::isinf(raw(i, j))) return false;
    }
  }
  return true;
}

void MetricData::validate(double tol) const {
  std::vector<std::string> problems;
  for (std::size_t i = 0; i < n_ && problems.size() < 8; ++i) {
    if (raw(i, i) != 0.0) problems.push_back("metric diagonal d(" + std::to_string(i) + "," + std::to_string(i) + ") != 0");
    for (std::size_t j = 0; j < n_; ++j) {
      if (std::isnan(raw(i, j)) || raw(i, j) < 0.0) {
        problems.push_back("metric entry d(" + std::to_string(i) + "," + std::to_string(j) + ") is negative or NaN");
      }
    }
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t k = 0; k < n_; ++k) {
        if (!le_tol(at(i, k), at(i, j) + at(j, k), tol)) {
          problems.push_back("triangle inequality fails: d(" + std::to_string(i) + "," + std::to_string(k) + ") > d(" +
                             std::to_string(i) + "," + std::to_string(j) + ") + d(" + std::to_string(j) + "," +
                             std::to_string(k) + ")");
          if (problems.size() >= 8) throw ValidationError(std::move(problems));
        }
      }
    }
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
}

MeasureData::MeasureData(std::vector<double> weights) : weights_(std::move(weights)) {
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) throw ValidationError({"measure weights must be finite and nonnegative"});
  }
}

MeasureData MeasureData::counting(std::size_t n) { return MeasureData(std::vector<double>(n, 1.0)); }

MeasureData MeasureData::uniform(std::size_t n) {
  if (n == 0) return MeasureData();
  return MeasureData(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double MeasureData::total() const {
  double sum = 0.0;
  for (double w : weights_) sum += w;
  return sum;
}

MetricData discrete_metric(std::size_t n) {
  std::vector<double> entries(n * n, kInf);
  for (std::size_t i = 0; i < n; ++i) entries[i * n + i] = 0.0;
  return MetricData(n, std::move(entries));
}

MetricData line_metric(std::span<const double> points) {
  const std::size_t n = points.size();
  std::vector<double> entries(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) entries[i * n + j] = std::abs(points[i] - points[j]);
  }
  return MetricData(n, std::move(entries));
}

MetricData shortest_path_metric(std::size_t n, const FiniteFunction& src, const FiniteFunction& tgt,
                                std::optional<std::span<const double>> weights) {
  if (src.size() != tgt.size()) throw DimensionError("src and tgt must have the same number of edges");
  if (weights && weights->size() != src.size()) throw DimensionError("one weight per edge is required");
  std::vector<double> d(n * n, kInf);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
  for (std::size_t e = 0; e < src.size(); ++e) {
    if (src[e] >= n || tgt[e] >= n) throw DimensionError("edge endpoint out of range");
    double w = weights ? (*weights)[e] : 1.0;
    if (!(w >= 0.0)) throw Error("negative edge weight at edge " + std::to_string(e));
    double& slot = d[src[e] * n + tgt[e]];
    if (w < slot) slot = w;
  }
  // Floyd-Warshall sweep.
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      double dik = d[i * n + k];
      if (std::isinf(dik)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        double via = dik + d[k * n + j];
        if (via < d[i * n + j]) d[i * n + j] = via;
      }
    }
  }
  return MetricData(n, std::move(d));
}

MetricData shortest_path_metric(const Instance& x, std::optional<std::span<const double>> weights) {
  const auto& t = *x.theory;
  auto v = t.find_object("V");
  auto e = t.find_object("E");
  auto src = t.find_generator("src");
  auto tgt = t.find_generator("tgt");
  if (!v || !e || !src || !tgt || t.generators()[*src].dom != "E" || t.generators()[*src].cod != "V" ||
      t.generators()[*tgt].dom != "E" || t.generators()[*tgt].cod != "V") {
    throw Error("shortest-path metric needs a graph-like theory with src, tgt: E -> V");
  }
  return shortest_path_metric(x.sets[*v], x.maps[*src], x.maps[*tgt], weights);
}

bool is_short_map(const FiniteFunction& f, const MetricData& dx, const MetricData& dy, double tol) {
  check_function(f, dx.size(), dy.size(), "is_short_map");
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = 0; j < f.size(); ++j) {
      if (!le_tol(dy.at(f[i], f[j]), dx.at(i, j), tol)) return false;
    }
  }
  return true;
}

MeasureData pushforward(const FiniteFunction& f, const MeasureData& mu_x, std::size_t cod) {
  check_function(f, mu_x.size(), cod, "pushforward");
  std::vector<double> out(cod, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) out[f[i]] += mu_x[i];
  return MeasureData(std::move(out));
}

bool is_measure_decreasing(const FiniteFunction& f, const MeasureData& mu_x, const MeasureData& mu_y, double tol) {
  auto pushed = pushforward(f, mu_x, mu_y.size());
  for (std::size_t j = 0; j < mu_y.size(); ++j) {
    if (pushed[j] > mu_y[j] + tol) return false;
  }
  return true;
}

bool is_absolutely_continuous(const FiniteFunction& f, const MeasureData& mu_x, const MeasureData& mu_y) {
  check_function(f, mu_x.size(), mu_y.size(), "is_absolutely_continuous");
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (mu_x[i] > 0.0 && mu_y[f[i]] <= 0.0) return false;
  }
  return true;
}

ExtReal lp_distance(const FiniteFunction& f, const FiniteFunction& g, const MeasureData& mu_x, const MetricData& dy,
                    double p) {
  if (!(p >= 1.0)) throw Error("L^p order must be >= 1");
  check_function(f, mu_x.size(), dy.size(), "lp_distance");
  check_function(g, mu_x.size(), dy.size(), "lp_distance");
  ExtReal total;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (mu_x[i] <= 0.0) continue;
    ExtReal d = dy.at(f[i], g[i]);
    if (std::isinf(p)) {
      total = max(total, d);
    } else {
      total += ExtReal(mu_x[i]) * d.pow(p);
    }
  }
  return std::isinf(p) ? total : total.root(p);
}

ExtReal sup_distance(const FiniteFunction& f, const FiniteFunction& g, const MetricData& dy) {
  if (f.size() != g.size()) throw DimensionError("sup_distance: domain sizes differ");
  check_function(f, f.size(), dy.size(), "sup_distance");
  check_function(g, g.size(), dy.size(), "sup_distance");
  ExtReal total;
  for (std::size_t i = 0; i < f.size(); ++i) total = max(total, dy.at(f[i], g[i]));
  return total;
}

}  // namespace cst

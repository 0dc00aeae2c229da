#include "cset_transport/lp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "cset_transport/error.hpp"

namespace cst {

std::size_t LpModel::add_variable(std::string name, double upper) {
  vars_.push_back({std::move(name), upper});
  cost_.push_back(0.0);
  return vars_.size() - 1;
}

void LpModel::set_objective(std::size_t var, double coef) { cost_.at(var) = coef; }
void LpModel::add_objective(std::size_t var, double coef) { cost_.at(var) += coef; }
void LpModel::set_upper(std::size_t var, double upper) { vars_.at(var).upper = upper; }

std::size_t LpModel::add_constraint(std::string name, std::vector<LpTerm> terms, Relation relation, double rhs) {
  rows_.push_back({std::move(name), std::move(terms), relation, rhs});
  return rows_.size() - 1;
}

void LpModel::validate() const {
  std::vector<std::string> problems;
  std::set<std::string_view> names;
  for (const auto& v : vars_) {
    if (!names.insert(v.name).second) problems.push_back("duplicate variable " + v.name);
    if (std::isnan(v.upper) || v.upper < 0.0) problems.push_back("bad upper bound on " + v.name);
  }
  for (double c : cost_) {
    if (!std::isfinite(c)) problems.push_back("non-finite objective coefficient");
  }
  std::set<std::string_view> rnames;
  for (const auto& r : rows_) {
    if (!rnames.insert(r.name).second) problems.push_back("duplicate constraint " + r.name);
    if (!std::isfinite(r.rhs)) problems.push_back("non-finite right-hand side in " + r.name);
    for (const auto& t : r.terms) {
      if (t.var >= vars_.size()) problems.push_back("undeclared variable in " + r.name);
      if (!std::isfinite(t.coef)) problems.push_back("non-finite coefficient in " + r.name);
    }
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

namespace {

using Column = std::vector<std::pair<std::size_t, double>>;

// Equality-form problem: A x = b, x >= 0, b >= 0.
class Simplex {
 public:
  Simplex(const LpModel& model, const SolverOptions& opt) : opt_(opt) { build(model); }

  LpSolution run(const LpModel& model);

 private:
  enum class Kind { Structural, Slack, Artificial };

  void build(const LpModel& model);
  void refactor();
  void compute_duals(const std::vector<double>& cost, std::vector<double>& y) const;
  double reduced_cost(std::size_t j, const std::vector<double>& cost, const std::vector<double>& y) const;
  void ftran(std::size_t j, std::vector<double>& w) const;
  // Returns false when unbounded.
  bool optimize(const std::vector<double>& cost, bool allow_artificial);
  void pivot(std::size_t r, std::size_t q, const std::vector<double>& w);
  void drive_out_artificials();
  double basic_objective(const std::vector<double>& cost) const;

  SolverOptions opt_;
  std::size_t m_ = 0;
  std::vector<Column> cols_;
  std::vector<Kind> kind_;
  std::vector<double> b_;
  std::vector<std::size_t> structural_of_;  // model variable -> column, or npos
  std::vector<std::size_t> basis_;
  std::vector<bool> in_basis_;
  std::vector<double> binv_;  // m x m, row-major
  std::vector<double> xb_;
  std::size_t since_refactor_ = 0;
  std::size_t iterations_ = 0;
  std::size_t max_iterations_ = 0;
};

constexpr std::size_t kNone = static_cast<std::size_t>(-1);
constexpr std::size_t kDegenerateRunLimit = 50;

void Simplex::build(const LpModel& model) {
  const std::size_t nv = model.num_variables();
  structural_of_.assign(nv, kNone);
  struct Row {
    std::map<std::size_t, double> coefs;
    Relation rel;
    double rhs;
  };
  std::vector<Row> rows;
  for (std::size_t j = 0; j < nv; ++j) {
    if (model.variables()[j].upper == 0.0) continue;
    structural_of_[j] = cols_.size();
    cols_.emplace_back();
    kind_.push_back(Kind::Structural);
  }
  for (const auto& c : model.constraints()) {
    Row row{{}, c.relation, c.rhs};
    for (const auto& t : c.terms) {
      if (structural_of_[t.var] == kNone || t.coef == 0.0) continue;
      row.coefs[structural_of_[t.var]] += t.coef;
    }
    rows.push_back(std::move(row));
  }
  for (std::size_t j = 0; j < nv; ++j) {
    double u = model.variables()[j].upper;
    if (structural_of_[j] != kNone && std::isfinite(u)) rows.push_back({{{structural_of_[j], 1.0}}, Relation::Le, u});
  }
  m_ = rows.size();
  b_.resize(m_);
  basis_.assign(m_, kNone);
  for (std::size_t i = 0; i < m_; ++i) {
    Row& row = rows[i];
    double sign = row.rhs < 0.0 ? -1.0 : 1.0;
    if (sign < 0.0) {
      if (row.rel == Relation::Le) row.rel = Relation::Ge;
      else if (row.rel == Relation::Ge) row.rel = Relation::Le;
    }
    b_[i] = sign * row.rhs;
    for (auto [j, a] : row.coefs) {
      if (a != 0.0) cols_[j].emplace_back(i, sign * a);
    }
    if (row.rel != Relation::Eq) {
      cols_.push_back({{i, row.rel == Relation::Le ? 1.0 : -1.0}});
      kind_.push_back(Kind::Slack);
      if (row.rel == Relation::Le) basis_[i] = cols_.size() - 1;
    }
  }
  for (std::size_t i = 0; i < m_; ++i) {
    if (basis_[i] != kNone) continue;
    cols_.push_back({{i, 1.0}});
    kind_.push_back(Kind::Artificial);
    basis_[i] = cols_.size() - 1;
  }
  in_basis_.assign(cols_.size(), false);
  for (std::size_t j : basis_) in_basis_[j] = true;
  if (opt_.refactor_interval == 0) opt_.refactor_interval = std::max<std::size_t>(100, m_);
  max_iterations_ = opt_.max_iterations ? opt_.max_iterations : 50 * (m_ + cols_.size()) + 10000;
  refactor();
}

// Gauss-Jordan inversion of the basis with partial pivoting.
void Simplex::refactor() {
  const std::size_t m = m_;
  std::vector<double> a(m * m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    for (auto [i, v] : cols_[basis_[k]]) a[i * m + k] = v;
  }
  binv_.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) binv_[i * m + i] = 1.0;
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    double best = std::abs(a[col * m + col]);
    for (std::size_t r = col + 1; r < m; ++r) {
      if (std::abs(a[r * m + col]) > best) {
        best = std::abs(a[r * m + col]);
        piv = r;
      }
    }
    if (best < opt_.pivot_tolerance) throw SolverError("singular basis during refactorization");
    if (piv != col) {
      for (std::size_t k = 0; k < m; ++k) {
        std::swap(a[piv * m + k], a[col * m + k]);
        std::swap(binv_[piv * m + k], binv_[col * m + k]);
      }
    }
    double d = a[col * m + col];
    for (std::size_t k = 0; k < m; ++k) {
      a[col * m + k] /= d;
      binv_[col * m + k] /= d;
    }
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col) continue;
      double f = a[r * m + col];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < m; ++k) {
        a[r * m + k] -= f * a[col * m + k];
        binv_[r * m + k] -= f * binv_[col * m + k];
      }
    }
  }
  // Row k of the inverse now corresponds to basis position k.
  xb_.assign(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += binv_[k * m + i] * b_[i];
    xb_[k] = s < 0.0 && s > -opt_.feasibility_tolerance ? 0.0 : s;
  }
  since_refactor_ = 0;
}

void Simplex::compute_duals(const std::vector<double>& cost, std::vector<double>& y) const {
  y.assign(m_, 0.0);
  for (std::size_t k = 0; k < m_; ++k) {
    double c = cost[basis_[k]];
    if (c == 0.0) continue;
    const double* row = &binv_[k * m_];
    for (std::size_t i = 0; i < m_; ++i) y[i] += c * row[i];
  }
}

double Simplex::reduced_cost(std::size_t j, const std::vector<double>& cost, const std::vector<double>& y) const {
  double d = cost[j];
  for (auto [i, a] : cols_[j]) d -= y[i] * a;
  return d;
}

void Simplex::ftran(std::size_t j, std::vector<double>& w) const {
  w.assign(m_, 0.0);
  for (auto [i, a] : cols_[j]) {
    for (std::size_t k = 0; k < m_; ++k) w[k] += binv_[k * m_ + i] * a;
  }
}

void Simplex::pivot(std::size_t r, std::size_t q, const std::vector<double>& w) {
  const std::size_t m = m_;
  double theta = xb_[r] / w[r];
  for (std::size_t k = 0; k < m; ++k) {
    if (k == r) continue;
    xb_[k] -= theta * w[k];
    if (xb_[k] < 0.0 && xb_[k] > -opt_.feasibility_tolerance) xb_[k] = 0.0;
  }
  xb_[r] = theta;
  double* pr = &binv_[r * m];
  double inv = 1.0 / w[r];
  for (std::size_t i = 0; i < m; ++i) pr[i] *= inv;
  for (std::size_t k = 0; k < m; ++k) {
    if (k == r || w[k] == 0.0) continue;
    double f = w[k];
    double* pk = &binv_[k * m];
    for (std::size_t i = 0; i < m; ++i) pk[i] -= f * pr[i];
  }
  in_basis_[basis_[r]] = false;
  basis_[r] = q;
  in_basis_[q] = true;
  if (++since_refactor_ >= opt_.refactor_interval) refactor();
}

bool Simplex::optimize(const std::vector<double>& cost, bool allow_artificial) {
  std::vector<double> y, w;
  compute_duals(cost, y);
  std::size_t degenerate_run = 0;
  while (true) {
    if (++iterations_ > max_iterations_) throw SolverError("simplex iteration limit reached");
    // Dantzig pricing; after a run of degenerate pivots, Bland's rule (lowest
    // improving index) until the objective moves again, which rules out cycling.
    const bool bland = degenerate_run >= kDegenerateRunLimit;
    std::size_t q = kNone;
    double dq = -opt_.optimality_tolerance;
    for (std::size_t j = 0; j < cols_.size(); ++j) {
      if (in_basis_[j] || (!allow_artificial && kind_[j] == Kind::Artificial)) continue;
      double d = reduced_cost(j, cost, y);
      if (d < dq) {
        q = j;
        dq = d;
        if (bland) break;
      }
    }
    if (q == kNone) {
      // Confirm against freshly computed duals before declaring optimality.
      if (since_refactor_ == 0) return true;
      refactor();
      compute_duals(cost, y);
      degenerate_run = 0;
      continue;
    }
    ftran(q, w);
    // Ratio test; ties go to the lowest-index leaving column.
    std::size_t r = kNone;
    double best = 0.0;
    for (std::size_t k = 0; k < m_; ++k) {
      if (w[k] <= opt_.pivot_tolerance) continue;
      double ratio = xb_[k] / w[k];
      if (r == kNone || ratio < best - 1e-12) {
        best = ratio;
        r = k;
      } else if (ratio <= best + 1e-12 && basis_[k] < basis_[r]) {
        r = k;
      }
    }
    if (r == kNone) return false;
    degenerate_run = best <= 1e-12 ? degenerate_run + 1 : 0;
    // y += (d_q / w_r) * row r of the old inverse.
    const double step = dq / w[r];
    const double* row = &binv_[r * m_];
    for (std::size_t i = 0; i < m_; ++i) y[i] += step * row[i];
    pivot(r, q, w);
    if (since_refactor_ == 0) compute_duals(cost, y);
  }
}

// Pivots zero-valued artificials out of the basis where a non-artificial
// column has a nonzero entry in their row; otherwise the row is redundant and
// the artificial stays basic at zero.
void Simplex::drive_out_artificials() {
  std::vector<double> w;
  for (std::size_t r = 0; r < m_; ++r) {
    if (kind_[basis_[r]] != Kind::Artificial) continue;
    const double* row = &binv_[r * m_];
    for (std::size_t j = 0; j < cols_.size(); ++j) {
      if (in_basis_[j] || kind_[j] == Kind::Artificial) continue;
      double v = 0.0;
      for (auto [i, a] : cols_[j]) v += row[i] * a;
      if (std::abs(v) > 1e-7) {
        ftran(j, w);
        xb_[r] = 0.0;
        pivot(r, j, w);
        break;
      }
    }
  }
}

double Simplex::basic_objective(const std::vector<double>& cost) const {
  double s = 0.0;
  for (std::size_t k = 0; k < m_; ++k) s += cost[basis_[k]] * xb_[k];
  return s;
}

LpSolution Simplex::run(const LpModel& model) {
  LpSolution sol;
  std::vector<double> phase1(cols_.size(), 0.0);
  bool has_artificial = false;
  for (std::size_t j = 0; j < cols_.size(); ++j) {
    if (kind_[j] == Kind::Artificial) {
      phase1[j] = 1.0;
      has_artificial = true;
    }
  }
  if (has_artificial) {
    optimize(phase1, true);
    refactor();
    if (basic_objective(phase1) > opt_.feasibility_tolerance) {
      sol.status = LpStatus::Infeasible;
      sol.iterations = iterations_;
      return sol;
    }
    drive_out_artificials();
  }
  std::vector<double> cost(cols_.size(), 0.0);
  for (std::size_t j = 0; j < model.num_variables(); ++j) {
    if (structural_of_[j] != kNone) cost[structural_of_[j]] = model.objective()[j];
  }
  bool bounded = optimize(cost, false);
  sol.iterations = iterations_;
  if (!bounded) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }
  refactor();
  std::vector<double> x(cols_.size(), 0.0);
  for (std::size_t k = 0; k < m_; ++k) x[basis_[k]] = std::max(0.0, xb_[k]);
  sol.values.assign(model.num_variables(), 0.0);
  for (std::size_t j = 0; j < model.num_variables(); ++j) {
    if (structural_of_[j] != kNone) sol.values[j] = std::min(x[structural_of_[j]], model.variables()[j].upper);
  }
  double obj = 0.0;
  for (std::size_t j = 0; j < model.num_variables(); ++j) obj += model.objective()[j] * sol.values[j];
  sol.objective = obj;
  sol.status = LpStatus::Optimal;
  double res = max_residual(model, sol.values);
  if (res > opt_.feasibility_tolerance) {
    throw SolverError("solution violates constraints by " + std::to_string(res));
  }
  return sol;
}

}  // namespace

LpSolution solve(const LpModel& model, const SolverOptions& options) {
  model.validate();
  Simplex simplex(model, options);
  return simplex.run(model);
}

double snap_objective(const LpModel& model, double objective) {
  double scale = 1.0;
  for (double c : model.objective()) scale += std::abs(c);
  return std::abs(objective) <= 1e-12 * scale ? 0.0 : objective;
}

double max_residual(const LpModel& model, const std::vector<double>& values) {
  if (values.size() != model.num_variables()) throw DimensionError("value vector does not match the model");
  double worst = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    worst = std::max(worst, -values[j]);
    worst = std::max(worst, values[j] - model.variables()[j].upper);
  }
  for (const auto& c : model.constraints()) {
    double lhs = 0.0;
    for (const auto& t : c.terms) lhs += t.coef * values[t.var];
    double v = lhs - c.rhs;
    switch (c.relation) {
      case Relation::Eq: worst = std::max(worst, std::abs(v)); break;
      case Relation::Le: worst = std::max(worst, v); break;
      case Relation::Ge: worst = std::max(worst, -v); break;
    }
  }
  return worst;
}

// --- text format ---

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_terms(std::ostringstream& out, const std::vector<LpTerm>& terms, const LpModel& model) {
  bool first = true;
  for (const auto& t : terms) {
    if (t.coef == 0.0) continue;
    double c = t.coef;
    if (first) {
      out << fmt(c);
    } else {
      out << (c < 0 ? " - " : " + ") << fmt(std::abs(c));
    }
    out << ' ' << model.variables()[t.var].name;
    first = false;
  }
  if (first) out << '0';
}

}  // namespace

std::string export_lp(const LpModel& model) {
  std::ostringstream out;
  std::vector<bool> used(model.num_variables(), false);
  std::vector<LpTerm> obj;
  for (std::size_t j = 0; j < model.num_variables(); ++j) {
    if (model.objective()[j] != 0.0) {
      obj.push_back({j, model.objective()[j]});
      used[j] = true;
    }
  }
  out << "MINIMIZE ";
  write_terms(out, obj, model);
  out << '\n';
  if (model.num_constraints() > 0) {
    out << "SUBJECT TO\n";
    for (const auto& c : model.constraints()) {
      out << c.name << ": ";
      write_terms(out, c.terms, model);
      for (const auto& t : c.terms) {
        if (t.coef != 0.0) used[t.var] = true;
      }
      const char* rel = c.relation == Relation::Eq ? " = " : c.relation == Relation::Le ? " <= " : " >= ";
      out << rel << fmt(c.rhs) << '\n';
    }
  }
  std::ostringstream bounds;
  for (std::size_t j = 0; j < model.num_variables(); ++j) {
    const auto& v = model.variables()[j];
    if (std::isfinite(v.upper)) {
      bounds << v.name << " <= " << fmt(v.upper) << '\n';
    } else if (!used[j]) {
      bounds << v.name << " >= 0\n";
    }
  }
  if (!bounds.str().empty()) out << "BOUNDS\n" << bounds.str();
  out << "END\n";
  return out.str();
}

namespace {

class LpReader {
 public:
  explicit LpReader(std::string_view text) : text_(text) {}

  LpModel read();

 private:
  std::string_view next_line();
  [[noreturn]] void fail(const std::string& what, std::size_t col = 1) const { throw ParseError(what, line_no_, col); }
  std::size_t var(std::string_view name);
  double number(std::string_view tok) const;
  std::vector<LpTerm> terms(const std::vector<std::string_view>& toks, std::size_t begin, std::size_t end);

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
  LpModel model_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view LpReader::next_line() {
  ++line_no_;
  std::size_t end = text_.find('\n', pos_);
  if (end == std::string_view::npos) end = text_.size();
  std::string_view line = text_.substr(pos_, end - pos_);
  pos_ = std::min(end + 1, text_.size());
  return line;
}

std::size_t LpReader::var(std::string_view name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  std::size_t j = model_.add_variable(std::string(name));
  index_.emplace(std::string(name), j);
  return j;
}

double LpReader::number(std::string_view tok) const {
  if (tok == "inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) fail("expected a number, got '" + std::string(tok) + "'");
  return v;
}

std::vector<LpTerm> LpReader::terms(const std::vector<std::string_view>& toks, std::size_t begin, std::size_t end) {
  std::vector<LpTerm> out;
  if (end - begin == 1 && toks[begin] == "0") return out;
  double sign = 1.0;
  std::size_t i = begin;
  while (i < end) {
    if (toks[i] == "+" || toks[i] == "-") {
      if (i == begin) fail("leading sign operator");
      sign = toks[i] == "-" ? -1.0 : 1.0;
      ++i;
    } else if (i != begin) {
      fail("expected '+' or '-' between terms");
    }
    if (i + 1 >= end) fail("incomplete term");
    double c = sign * number(toks[i]);
    out.push_back({var(toks[i + 1]), c});
    i += 2;
  }
  return out;
}

LpModel LpReader::read() {
  enum class Section { None, Objective, Constraints, Bounds, Done } section = Section::None;
  while (pos_ < text_.size() && section != Section::Done) {
    auto toks = split(next_line());
    if (toks.empty()) continue;
    if (toks[0] == "MINIMIZE") {
      if (section != Section::None) fail("MINIMIZE must come first");
      auto obj = terms(toks, 1, toks.size());
      for (const auto& t : obj) model_.add_objective(t.var, t.coef);
      section = Section::Objective;
    } else if (toks.size() == 2 && toks[0] == "SUBJECT" && toks[1] == "TO") {
      if (section != Section::Objective) fail("misplaced SUBJECT TO");
      section = Section::Constraints;
    } else if (toks[0] == "BOUNDS") {
      if (section != Section::Objective && section != Section::Constraints) fail("misplaced BOUNDS");
      section = Section::Bounds;
    } else if (toks[0] == "END") {
      section = Section::Done;
    } else if (section == Section::Constraints) {
      if (toks.size() < 4 || toks[0].back() != ':') fail("expected 'name: terms rel rhs'");
      std::string name(toks[0].substr(0, toks[0].size() - 1));
      std::string_view rel = toks[toks.size() - 2];
      Relation r;
      if (rel == "=") r = Relation::Eq;
      else if (rel == "<=") r = Relation::Le;
      else if (rel == ">=") r = Relation::Ge;
      else fail("unknown relation '" + std::string(rel) + "'");
      auto row = terms(toks, 1, toks.size() - 2);
      model_.add_constraint(std::move(name), std::move(row), r, number(toks.back()));
    } else if (section == Section::Bounds) {
      if (toks.size() != 3) fail("expected 'name <= value' or 'name >= 0'");
      std::size_t j = var(toks[0]);
      if (toks[1] == "<=") {
        model_.set_upper(j, number(toks[2]));
      } else if (!(toks[1] == ">=" && number(toks[2]) == 0.0)) {
        fail("lower bounds other than 0 are not supported");
      }
    } else {
      fail("unexpected line");
    }
  }
  if (section != Section::Done) fail("missing END");
  model_.validate();
  return std::move(model_);
}

}  // namespace

LpModel parse_lp(std::string_view text) { return LpReader(text).read(); }

}  // namespace cst

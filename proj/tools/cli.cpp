#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "cset_transport/error.hpp"
#include "cset_transport/hausdorff.hpp"
#include "cset_transport/io.hpp"
#include "cset_transport/relax.hpp"
#include "cset_transport/transport.hpp"

namespace cst::cli {

namespace {

// Unreadable inputs count as usage errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string format = "text";
  double guard = kDefaultGuard;
  bool force = false;
  std::string x, y, input;
  std::string p = "1";
  std::string cls;
  std::string symmetrize = "none";
  std::string problem = "feasibility";
  bool measure_preserving = false;
  bool coupling = false;
  std::string output;
};

bool json_mode(const Options& o) { return o.format == "json"; }

std::string show(double v) {
  if (std::isinf(v)) return "inf";
  if (std::abs(v) < kTolerance) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string show(ExtReal v) { return show(v.value()); }

Json number(ExtReal v) {
  if (v.is_infinite()) return "inf";
  return std::abs(v.value()) < kTolerance ? 0.0 : v.value();
}

double parse_order(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  double p = 0;
  try {
    std::size_t used = 0;
    p = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
  } catch (const std::exception&) {
    throw UsageError("--p must be a number >= 1 or 'inf', got '" + s + "'");
  }
  if (!(p >= 1.0)) throw UsageError("--p must be at least 1");
  return p;
}

double parse_finite_order(const std::string& s) {
  double p = parse_order(s);
  if (std::isinf(p)) throw UsageError("--p must be finite for linear programs");
  return p;
}

SearchLimits limits(const Options& o) { return {o.guard, o.force}; }

Instance load(const std::string& source) {
  if (source.rfind("builtin:", 0) != 0 && !std::ifstream(source)) throw UsageError("cannot read " + source);
  return load_instance(source);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json header(const char* command) { return {{"schema", kSchema}, {"command", command}}; }

void emit(std::ostream& out, const Json& j) { out << j.dump() << '\n'; }

int cmd_validate(const Options& o, std::ostream& out) {
  std::string text = o.x.rfind("builtin:", 0) == 0 ? std::string() : read_file(o.x);
  std::size_t first = text.find_first_not_of(" \t\r\n");
  Json j = header("validate");
  if (!text.empty() && first != std::string::npos && text[first] != '{') {
    TheoryPresentation th = parse_theory(text);
    j["kind"] = "theory";
    j["name"] = th.name();
    j["objects"] = th.objects().size();
    j["generators"] = th.generators().size();
    j["equations"] = th.equations().size();
  } else {
    Instance x = text.empty() ? load_instance(o.x) : instance_from_json(parse_json(text));
    j["kind"] = "instance";
    j["theory"] = x.theory->name();
  }
  j["valid"] = true;
  if (json_mode(o)) emit(out, j);
  else out << "ok\n";
  return 0;
}

int cmd_hom(const Options& o, std::ostream& out) {
  Instance x = load(o.x), y = load(o.y);
  auto t = find_homomorphism(x, y, limits(o));
  if (json_mode(o)) {
    Json j = header("hom");
    j["exists"] = t.has_value();
    if (t) j["homomorphism"] = transformation_to_json(x, *t);
    emit(out, j);
  } else if (t) {
    out << transformation_to_json(x, *t).dump() << '\n';
  } else {
    out << "none\n";
  }
  return 0;
}

int cmd_feasible(const Options& o, std::ostream& out) {
  Instance x = load(o.x), y = load(o.y);
  auto phi = markov_feasible(x, y, o.measure_preserving);
  if (json_mode(o)) {
    Json j = header("markov-feasible");
    j["feasible"] = phi.has_value();
    j["measure_preserving"] = o.measure_preserving;
    if (phi) j["certificate"] = markov_to_json(x, *phi);
    emit(out, j);
  } else {
    out << (phi ? "feasible" : "infeasible") << '\n';
  }
  return 0;
}

HausdorffConfig hausdorff_config(const Options& o) {
  HausdorffConfig cfg;
  cfg.p = parse_order(o.p);
  auto cls = component_class_from_name(o.cls.empty() ? "mm" : o.cls);
  if (!cls) throw UsageError("--class must be met, mm, md or all");
  cfg.component_class = *cls;
  auto sym = symmetrize_from_name(o.symmetrize);
  if (!sym) throw UsageError("--symmetrize must be none, max or mean");
  cfg.symmetrize = *sym;
  cfg.limits = limits(o);
  return cfg;
}

int cmd_hausdorff(const Options& o, std::ostream& out) {
  Instance x = load(o.x), y = load(o.y);
  HausdorffResult r = hausdorff_distance(x, y, hausdorff_config(o));
  const auto& gens = x.theory->generators();
  if (json_mode(o)) {
    Json j = header("hausdorff");
    j["distance"] = number(r.distance);
    j["forward"] = number(r.forward);
    if (r.backward) j["backward"] = number(*r.backward);
    j["witness"] = r.witness ? transformation_to_json(x, *r.witness) : Json();
    Json w = Json::object();
    for (std::size_t g = 0; g < r.per_generator_weights.size(); ++g) w[gens[g].name] = number(r.per_generator_weights[g]);
    j["weights"] = w;
    emit(out, j);
    return 0;
  }
  out << show(r.distance) << '\n';
  if (r.witness) {
    out << "witness " << transformation_to_json(x, *r.witness).dump() << '\n';
    out << "weights";
    for (std::size_t g = 0; g < r.per_generator_weights.size(); ++g) {
      out << ' ' << gens[g].name << '=' << show(r.per_generator_weights[g]);
    }
    out << '\n';
  }
  return 0;
}

WassersteinClass wasserstein_class(const Options& o) {
  auto cls = wasserstein_class_from_name(o.cls.empty() ? "mm" : o.cls);
  if (!cls) throw UsageError("--class must be mm or noshort");
  return *cls;
}

int cmd_wasserstein(const Options& o, std::ostream& out) {
  Instance x = load(o.x), y = load(o.y);
  WassersteinResult r = wasserstein_cset_distance(x, y, parse_finite_order(o.p), wasserstein_class(o));
  if (json_mode(o)) {
    Json j = header("wasserstein");
    j["distance"] = number(r.distance);
    j["morphism"] = r.morphism ? markov_to_json(x, *r.morphism) : Json();
    emit(out, j);
  } else {
    out << show(r.distance) << '\n';
  }
  return 0;
}

int cmd_gap(const Options& o, std::ostream& out) {
  Instance x = load(o.x), y = load(o.y);
  HausdorffConfig cfg = hausdorff_config(o);
  cfg.p = parse_finite_order(o.p);
  RelaxationGap g = relaxation_gap(x, y, cfg.p, cfg);
  if (json_mode(o)) {
    Json j = header("gap");
    j["wasserstein"] = number(g.wasserstein);
    j["hausdorff"] = number(g.hausdorff);
    emit(out, j);
  } else {
    out << "wasserstein " << show(g.wasserstein) << "\nhausdorff " << show(g.hausdorff) << '\n';
  }
  return 0;
}

MetricData metric_field(const Json& j) {
  if (j.contains("metric")) return metric_from_json(j.at("metric"));
  throw ValidationError({"input needs a \"metric\" matrix"});
}

int cmd_ot(const Options& o, std::ostream& out) {
  Json in = parse_json(read_file(o.input));
  MeasureData mu = measure_from_json(in.at("mu")), nu = measure_from_json(in.at("nu"));
  OtResult r;
  if (in.contains("cost")) {
    std::vector<double> cost;
    for (const auto& row : in.at("cost")) {
      for (const auto& v : row) cost.push_back(v.is_string() && v.get<std::string>() == "inf" ? INFINITY : v.get<double>());
    }
    r = optimal_coupling(mu, nu, cost);
  } else {
    double p = in.contains("p") ? in.at("p").get<double>() : 1.0;
    MetricData d = metric_field(in);
    ExtReal w = wasserstein_measures(mu, nu, d, p);
    std::vector<double> cost(d.entries());
    for (double& v : cost) v = std::isinf(v) ? v : std::pow(v, p);
    r = optimal_coupling(mu, nu, cost);
    r.cost = w;
  }
  if (json_mode(o)) {
    Json j = header("ot");
    j["cost"] = number(r.cost);
    if (o.coupling) {
      Json c = Json::array();
      if (r.coupling) {
        for (std::size_t i = 0; i < r.coupling->rows(); ++i) {
          Json row = Json::array();
          for (std::size_t k = 0; k < r.coupling->cols(); ++k) row.push_back((*r.coupling)(i, k));
          c.push_back(row);
        }
      }
      j["coupling"] = r.coupling ? c : Json();
    }
    emit(out, j);
  } else {
    out << show(r.cost) << '\n';
    if (o.coupling && r.coupling) {
      for (std::size_t i = 0; i < r.coupling->rows(); ++i) {
        for (std::size_t k = 0; k < r.coupling->cols(); ++k) out << (k ? " " : "") << show((*r.coupling)(i, k));
        out << '\n';
      }
    }
  }
  return 0;
}

int cmd_wk(const Options& o, std::ostream& out) {
  Json in = parse_json(read_file(o.input));
  FiniteKernel m = kernel_from_json(in.at("m")), n = kernel_from_json(in.at("n"));
  MeasureData mu = measure_from_json(in.at("mu"));
  double p = in.contains("p") ? in.at("p").get<double>() : 1.0;
  KernelOtResult r = wasserstein_kernels(m, n, mu, metric_field(in), p);
  if (json_mode(o)) {
    Json j = header("wk");
    j["cost"] = number(r.cost);
    if (o.coupling) {
      Json rows = Json::array();
      for (const auto& c : r.couplings) {
        if (!c) {
          rows.push_back(nullptr);
          continue;
        }
        Json mat = Json::array();
        for (std::size_t i = 0; i < c->rows(); ++i) {
          Json row = Json::array();
          for (std::size_t k = 0; k < c->cols(); ++k) row.push_back((*c)(i, k));
          mat.push_back(row);
        }
        rows.push_back(mat);
      }
      j["couplings"] = rows;
    }
    emit(out, j);
  } else {
    out << show(r.cost) << '\n';
  }
  return 0;
}

int cmd_export(const Options& o, std::ostream& out) {
  Instance x = load(o.x), y = load(o.y);
  LpModel lp;
  if (o.problem == "feasibility") {
    lp = markov_feasibility_lp(x, y, o.measure_preserving);
  } else if (o.problem == "wasserstein") {
    WassersteinProgram prog = wasserstein_cset_lp(x, y, parse_finite_order(o.p), wasserstein_class(o));
    if (prog.infinite_reason) throw Error("no program to export: " + *prog.infinite_reason);
    lp = std::move(prog.model);
  } else {
    throw UsageError("--problem must be feasibility or wasserstein");
  }
  std::string text = export_lp(lp);
  if (o.output.empty()) {
    out << text;
  } else {
    std::ofstream f(o.output);
    if (!f) throw UsageError("cannot write " + o.output);
    f << text;
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and relaxed matchings between finite C-sets", "cset-transport"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--guard", o.guard, "Refuse enumerations larger than this");
  app.add_flag("--force", o.force, "Enumerate past the guard");

  auto pair = [&](CLI::App* sub) {
    sub->add_option("x", o.x, "Domain instance (file or builtin:<name>)")->required();
    sub->add_option("y", o.y, "Codomain instance")->required();
  };
  auto* validate = app.add_subcommand("validate", "Check an instance JSON or theory DSL file");
  validate->add_option("input", o.x, "File or builtin:<name>")->required();
  auto* hom = app.add_subcommand("hom", "Search for a C-set homomorphism");
  pair(hom);
  auto* feas = app.add_subcommand("markov-feasible", "Decide whether a Markov morphism exists");
  pair(feas);
  feas->add_flag("--measure-preserving", o.measure_preserving, "Require mu_X Phi = mu_Y");
  auto* haus = app.add_subcommand("hausdorff", "Hausdorff distance by exhaustive enumeration");
  pair(haus);
  haus->add_option("--p", o.p, "Order (number >= 1 or inf)");
  haus->add_option("--class", o.cls, "Component class: met, mm, md or all");
  haus->add_option("--symmetrize", o.symmetrize, "none, max or mean");
  auto* wass = app.add_subcommand("wasserstein", "Wasserstein distance via linear programming");
  pair(wass);
  wass->add_option("--p", o.p, "Order (finite, >= 1)");
  wass->add_option("--class", o.cls, "mm or noshort");
  auto* gap = app.add_subcommand("gap", "Wasserstein relaxation next to the Hausdorff distance");
  pair(gap);
  gap->add_option("--p", o.p, "Order (finite, >= 1)");
  gap->add_option("--class", o.cls, "Hausdorff class: mm or md");
  auto* ot = app.add_subcommand("ot", "Optimal transport between two measures");
  ot->add_option("input", o.input, "JSON with mu, nu and cost (or metric and p)")->required();
  ot->add_flag("--coupling", o.coupling, "Also print the optimal coupling");
  auto* wk = app.add_subcommand("wk", "Wasserstein distance between two kernels");
  wk->add_option("input", o.input, "JSON with m, n, mu, metric and p")->required();
  wk->add_flag("--coupling", o.coupling, "Also print the per-row couplings");
  auto* exp = app.add_subcommand("export-lp", "Write a linear program in text form");
  pair(exp);
  exp->add_option("--problem", o.problem, "feasibility or wasserstein");
  exp->add_flag("--measure-preserving", o.measure_preserving, "Feasibility with measure preservation");
  exp->add_option("--p", o.p, "Order for the Wasserstein program");
  exp->add_option("--class", o.cls, "mm or noshort");
  exp->add_option("-o,--output", o.output, "Output file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) return cmd_validate(o, out);
    if (*hom) return cmd_hom(o, out);
    if (*feas) return cmd_feasible(o, out);
    if (*haus) return cmd_hausdorff(o, out);
    if (*wass) return cmd_wasserstein(o, out);
    if (*gap) return cmd_gap(o, out);
    if (*ot) return cmd_ot(o, out);
    if (*wk) return cmd_wk(o, out);
    if (*exp) return cmd_export(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const cst::ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "malformed input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace cst::cli

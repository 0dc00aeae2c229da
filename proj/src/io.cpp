#include "cset_transport/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "cset_transport/error.hpp"

namespace cst {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double number_or_inf(const Json& v) {
  if (v.is_string() && v.get<std::string>() == "inf") return kInf;
  if (!v.is_number()) throw ValidationError({"expected a number or \"inf\""});
  return v.get<double>();
}

std::shared_ptr<const TheoryPresentation> theory_from_json(const Json& j) {
  if (!j.is_string()) throw ValidationError({"\"theory\" must be a builtin name or theory DSL text"});
  auto text = j.get<std::string>();
  if (builtin_theory_from_name(text)) return std::make_shared<const TheoryPresentation>(builtin_theory(text));
  if (text.find('{') != std::string::npos) return std::make_shared<const TheoryPresentation>(parse_theory(text));
  throw ValidationError({"unknown theory " + text});
}

MetricData metric_for(const Instance& x, std::size_t c, const Json& spec) {
  const std::string kind = spec.value("kind", "");
  const std::size_t n = x.sets[c];
  if (kind == "discrete") return discrete_metric(n);
  if (kind == "shortest_path") {
    if (x.theory->objects()[c] != "V") throw ValidationError({"shortest_path metrics live on the V object"});
    if (spec.contains("weights")) {
      auto w = spec.at("weights").get<std::vector<double>>();
      return shortest_path_metric(x, std::span<const double>(w));
    }
    return shortest_path_metric(x);
  }
  if (kind == "line") {
    auto pts = spec.at("points").get<std::vector<double>>();
    if (pts.size() != n) throw ValidationError({"line metric needs one point per element"});
    return line_metric(pts);
  }
  if (kind == "explicit") {
    MetricData d = metric_from_json(spec.at("matrix"));
    if (d.size() != n) throw ValidationError({"metric matrix has the wrong size"});
    return d;
  }
  throw ValidationError({"unknown metric kind '" + kind + "'"});
}

MeasureData measure_for(std::size_t n, const Json& spec) {
  const std::string kind = spec.value("kind", "");
  if (kind == "counting") return MeasureData::counting(n);
  if (kind == "uniform") return MeasureData::uniform(n);
  if (kind == "explicit") {
    MeasureData mu = measure_from_json(spec.at("weights"));
    if (mu.size() != n) throw ValidationError({"measure has the wrong size"});
    return mu;
  }
  throw ValidationError({"unknown measure kind '" + kind + "'"});
}

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(e.what(), line, col);
  }
}

MetricData metric_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError({"metric matrix must be an array of rows"});
  std::vector<std::vector<double>> rows;
  for (const auto& r : j) {
    std::vector<double> row;
    for (const auto& v : r) row.push_back(number_or_inf(v));
    rows.push_back(std::move(row));
  }
  MetricData d = MetricData::from_rows(rows);
  d.validate();
  return d;
}

Json ext_real_to_json(ExtReal v) {
  if (v.is_infinite()) return "inf";
  return v.value();
}

Json metric_to_json(const MetricData& d) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < d.size(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < d.size(); ++k) row.push_back(ext_real_to_json(d.at(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

MeasureData measure_from_json(const Json& j) { return MeasureData(j.get<std::vector<double>>()); }
Json measure_to_json(const MeasureData& mu) { return mu.weights(); }

Instance instance_from_json(const Json& j) {
  try {
    Instance x = Instance::empty(theory_from_json(j.at("theory")));
    const auto& th = *x.theory;
    for (const auto& [name, n] : j.at("sets").items()) {
      if (!th.find_object(name)) throw ValidationError({"undeclared object " + name});
      x.set_size(name, n.get<std::size_t>());
    }
    if (j.contains("maps")) {
      for (const auto& [name, f] : j.at("maps").items()) {
        if (!th.find_generator(name)) throw ValidationError({"undeclared generator " + name});
        x.set_map(name, f.get<FiniteFunction>());
      }
    }
    for (std::size_t g = 0; g < th.generators().size(); ++g) {
      if (x.maps[g].size() != x.sets[th.dom_index(g)]) {
        throw ValidationError({"map " + th.generators()[g].name + " is missing or has the wrong length"});
      }
      for (std::size_t v : x.maps[g]) {
        if (v >= x.sets[th.cod_index(g)]) throw ValidationError({"map " + th.generators()[g].name + " is out of range"});
      }
    }
    if (j.contains("fixed")) {
      for (const auto& name : j.at("fixed")) x.set_fixed(name.get<std::string>());
    }
    if (j.contains("metrics")) {
      for (const auto& [name, spec] : j.at("metrics").items()) {
        if (!th.find_object(name)) throw ValidationError({"undeclared object " + name});
        std::size_t c = x.object(name);
        x.metrics[c] = metric_for(x, c, spec);
      }
    }
    if (j.contains("measures")) {
      for (const auto& [name, spec] : j.at("measures").items()) {
        if (!th.find_object(name)) throw ValidationError({"undeclared object " + name});
        std::size_t c = x.object(name);
        x.measures[c] = measure_for(x.sets[c], spec);
      }
    }
    validate_instance(x);
    return x;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError({std::string("malformed instance: ") + e.what()});
  }
}

Json instance_to_json(const Instance& x) {
  const auto& th = *x.theory;
  Json j;
  j["theory"] = builtin_theory_from_name(th.name()) && builtin_theory(th.name()) == th ? th.name() : render_theory(th);
  Json sets = Json::object(), maps = Json::object(), metrics = Json::object(), measures = Json::object();
  Json fixed = Json::array();
  for (std::size_t c = 0; c < th.objects().size(); ++c) {
    const auto& ob = th.objects()[c];
    sets[ob] = x.sets[c];
    if (x.metrics[c]) metrics[ob] = {{"kind", "explicit"}, {"matrix", metric_to_json(*x.metrics[c])}};
    if (x.measures[c]) measures[ob] = {{"kind", "explicit"}, {"weights", measure_to_json(*x.measures[c])}};
    if (x.fixed[c]) fixed.push_back(ob);
  }
  for (std::size_t g = 0; g < th.generators().size(); ++g) maps[th.generators()[g].name] = x.maps[g];
  j["sets"] = sets;
  j["maps"] = maps;
  j["metrics"] = metrics;
  j["measures"] = measures;
  j["fixed"] = fixed;
  return j;
}

Instance load_instance(const std::string& source) {
  constexpr std::string_view prefix = "builtin:";
  if (source.rfind(prefix, 0) == 0) return builtin_instance(std::string_view(source).substr(prefix.size()));
  std::ifstream in(source);
  if (!in) throw Error("cannot read " + source);
  std::stringstream ss;
  ss << in.rdbuf();
  return instance_from_json(parse_json(ss.str()));
}

FiniteKernel kernel_from_json(const Json& j) {
  try {
    auto rows = j.at("rows").get<std::size_t>();
    auto cols = j.at("cols").get<std::size_t>();
    auto p = j.at("p").get<std::vector<std::vector<double>>>();
    if (p.size() != rows) throw DimensionError("kernel has the wrong number of rows");
    return FiniteKernel::from_rows(p, cols);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError({std::string("malformed kernel: ") + e.what()});
  }
}

Json kernel_to_json(const FiniteKernel& k) {
  Json p = Json::array();
  for (std::size_t i = 0; i < k.rows(); ++i) p.push_back(k.row(i));
  return {{"rows", k.rows()}, {"cols", k.cols()}, {"p", p}};
}

Json transformation_to_json(const Instance& x, const Transformation& t) {
  Json j = Json::object();
  for (std::size_t c = 0; c < t.components.size(); ++c) j[x.theory->objects()[c]] = t.components[c];
  return j;
}

Json markov_to_json(const Instance& x, const MarkovTransformation& phi) {
  Json j = Json::object();
  for (std::size_t c = 0; c < phi.components.size(); ++c) j[x.theory->objects()[c]] = kernel_to_json(phi.components[c]);
  return j;
}

// --- builtin instances ---

namespace {

Instance graph(std::size_t nv, FiniteFunction src, FiniteFunction tgt) {
  Instance x = Instance::empty(std::make_shared<const TheoryPresentation>(builtin_theory(BuiltinTheory::Graph)));
  x.set_size("V", nv);
  x.set_size("E", src.size());
  x.set_map("src", std::move(src));
  x.set_map("tgt", std::move(tgt));
  x.set_metric("V", shortest_path_metric(x));
  x.set_metric("E", discrete_metric(x.size("E")));
  x.set_measure("V", MeasureData::counting(nv));
  x.set_measure("E", MeasureData::counting(x.size("E")));
  validate_instance(x);
  return x;
}

Instance attributed_set(FiniteFunction attr) {
  Instance x = Instance::empty(std::make_shared<const TheoryPresentation>(builtin_theory(BuiltinTheory::ASet)));
  std::vector<double> pts;
  for (int i = 0; i <= 10; ++i) pts.push_back(i);
  x.set_size("A", pts.size());
  x.set_size("P", attr.size());
  x.set_map("attr", std::move(attr));
  x.set_fixed("A");
  x.set_metric("A", line_metric(pts));
  x.set_metric("P", discrete_metric(x.size("P")));
  x.set_measure("P", MeasureData::uniform(x.size("P")));
  validate_instance(x);
  return x;
}

}  // namespace

Instance cycle_graph(std::size_t n) {
  FiniteFunction src(n), tgt(n);
  for (std::size_t i = 0; i < n; ++i) {
    src[i] = i;
    tgt[i] = (i + 1) % n;
  }
  return graph(n, std::move(src), std::move(tgt));
}

Instance builtin_instance(std::string_view name) {
  if (name == "fig5x") return graph(3, {0, 1}, {1, 2});
  if (name == "fig5y") return graph(4, {0, 0, 1, 2}, {1, 2, 3, 3});
  if (name == "fig6x" || name == "fig7x" || name == "fig8y") return graph(1, {0}, {0});
  if (name == "fig6y") return graph(3, {1, 1, 2}, {0, 2, 0});
  if (name == "fig7y") return cycle_graph(3);
  if (name == "fig9x") return cycle_graph(2);
  if (name == "fig9y") return cycle_graph(4);
  if (name == "asetx") return attributed_set({0, 10});
  if (name == "asety") return attributed_set({1, 8});
  if (name.size() > 1 && name[0] == 'C') {
    std::size_t n = 0;
    for (char ch : name.substr(1)) {
      if (ch < '0' || ch > '9' || n > 1000) throw Error("unknown builtin instance " + std::string(name));
      n = n * 10 + static_cast<std::size_t>(ch - '0');
    }
    if (n == 0) throw Error("cycles need at least one vertex");
    return cycle_graph(n);
  }
  throw Error("unknown builtin instance " + std::string(name));
}

std::vector<std::string> builtin_instance_names() {
  return {"fig5x", "fig5y", "fig6x", "fig6y", "fig7x", "fig7y", "fig8y", "fig9x", "fig9y", "asetx", "asety", "C<n>"};
}

}  // namespace cst

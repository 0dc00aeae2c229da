#include "cset_transport/theory.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <sstream>

#include "cset_transport/error.hpp"

namespace cst {

TheoryPresentation::TheoryPresentation(std::string name, std::vector<std::string> objects,
                                       std::vector<Generator> generators, std::vector<Equation> equations)
    : name_(std::move(name)),
      objects_(std::move(objects)),
      generators_(std::move(generators)),
      equations_(std::move(equations)) {}

std::optional<std::size_t> TheoryPresentation::find_object(std::string_view name) const {
  auto it = std::find(objects_.begin(), objects_.end(), name);
  if (it == objects_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - objects_.begin());
}

std::optional<std::size_t> TheoryPresentation::find_generator(std::string_view name) const {
  auto it = std::find_if(generators_.begin(), generators_.end(), [&](const Generator& g) { return g.name == name; });
  if (it == generators_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - generators_.begin());
}

std::size_t TheoryPresentation::object_index(std::string_view name) const {
  if (auto idx = find_object(name)) return *idx;
  throw Error("theory " + name_ + " has no object '" + std::string(name) + "'");
}

std::size_t TheoryPresentation::generator_index(std::string_view name) const {
  if (auto idx = find_generator(name)) return *idx;
  throw Error("theory " + name_ + " has no generator '" + std::string(name) + "'");
}

std::string TheoryPresentation::path_cod(const Path& path) const {
  if (path.steps.empty()) return path.dom;
  return generators_[generator_index(path.steps.back())].cod;
}

namespace {

std::string render_path(const Path& path) {
  if (path.steps.empty()) return "id(" + path.dom + ")";
  std::string out;
  for (const auto& step : path.steps) {
    if (!out.empty()) out += ".";
    out += step;
  }
  return out;
}

// Checks a path against the declared generators; returns its codomain or an
// error message.
std::optional<std::string> check_path(const TheoryPresentation& t, const Path& path, std::string& problem) {
  if (!t.find_object(path.dom)) {
    problem = "undeclared object '" + path.dom + "' in path " + render_path(path);
    return std::nullopt;
  }
  std::string at = path.dom;
  for (const auto& step : path.steps) {
    auto g = t.find_generator(step);
    if (!g) {
      problem = "undeclared generator '" + step + "' in path " + render_path(path);
      return std::nullopt;
    }
    const auto& gen = t.generators()[*g];
    if (gen.dom != at) {
      problem = "non-composable path " + render_path(path) + ": '" + step + "' starts at " + gen.dom +
                " but the path is at " + at;
      return std::nullopt;
    }
    at = gen.cod;
  }
  return at;
}

}  // namespace

void validate_theory(const TheoryPresentation& t) {
  std::vector<std::string> problems;
  std::set<std::string> seen;
  for (const auto& ob : t.objects()) {
    if (!seen.insert(ob).second) problems.push_back("duplicate object '" + ob + "'");
  }
  std::set<std::string> gens;
  for (const auto& g : t.generators()) {
    if (!gens.insert(g.name).second) problems.push_back("duplicate generator '" + g.name + "'");
    if (seen.count(g.name)) problems.push_back("generator '" + g.name + "' shadows an object name");
    if (!t.find_object(g.dom)) problems.push_back("undeclared object '" + g.dom + "' as domain of '" + g.name + "'");
    if (!t.find_object(g.cod)) problems.push_back("undeclared object '" + g.cod + "' as codomain of '" + g.name + "'");
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));

  for (std::size_t i = 0; i < t.equations().size(); ++i) {
    const auto& eq = t.equations()[i];
    std::string problem;
    auto lhs_cod = check_path(t, eq.lhs, problem);
    if (!lhs_cod) {
      problems.push_back("equation " + std::to_string(i) + ": " + problem);
      continue;
    }
    auto rhs_cod = check_path(t, eq.rhs, problem);
    if (!rhs_cod) {
      problems.push_back("equation " + std::to_string(i) + ": " + problem);
      continue;
    }
    if (eq.lhs.dom != eq.rhs.dom || *lhs_cod != *rhs_cod) {
      problems.push_back("equation endpoint mismatch in " + render_path(eq.lhs) + " = " + render_path(eq.rhs) + " (" +
                         eq.lhs.dom + " -> " + *lhs_cod + " vs " + eq.rhs.dom + " -> " + *rhs_cod + ")");
    }
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
}

std::string render_theory(const TheoryPresentation& t) {
  std::ostringstream out;
  out << "theory " << t.name() << " {\n";
  if (!t.objects().empty()) {
    out << "  ob ";
    for (std::size_t i = 0; i < t.objects().size(); ++i) out << (i ? ", " : "") << t.objects()[i];
    out << "\n";
  }
  for (const auto& g : t.generators()) out << "  hom " << g.name << ": " << g.dom << " -> " << g.cod << "\n";
  for (const auto& eq : t.equations()) out << "  eq " << render_path(eq.lhs) << " = " << render_path(eq.rhs) << "\n";
  out << "}\n";
  return out.str();
}

// --- DSL parser -------------------------------------------------------------

namespace {

struct Token {
  enum Kind { Ident, Symbol, End } kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) {
        tokens.push_back({Token::End, "", line_, column_});
        return tokens;
      }
      char c = text_[pos_];
      std::size_t line = line_, column = column_;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
          advance();
        }
        tokens.push_back({Token::Ident, std::string(text_.substr(start, pos_ - start)), line, column});
      } else if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
        advance();
        advance();
        tokens.push_back({Token::Symbol, "->", line, column});
      } else if (std::string_view("{},:.=()").find(c) != std::string_view::npos) {
        advance();
        tokens.push_back({Token::Symbol, std::string(1, c), line, column});
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", line, column);
      }
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  TheoryPresentation run() {
    expect_keyword("theory");
    std::string name = expect_ident("theory name");
    expect_symbol("{");
    while (!peek_symbol("}")) {
      const Token& tok = peek();
      if (tok.kind != Token::Ident) fail("expected 'ob', 'hom', 'eq' or '}'", tok);
      if (tok.text == "ob") {
        next();
        parse_objects();
      } else if (tok.text == "hom") {
        next();
        parse_homs();
      } else if (tok.text == "eq") {
        next();
        parse_equation();
      } else {
        fail("expected 'ob', 'hom', 'eq' or '}', found '" + tok.text + "'", tok);
      }
    }
    expect_symbol("}");
    if (peek().kind != Token::End) fail("trailing input after theory", peek());

    TheoryPresentation theory(std::move(name), std::move(objects_), std::move(generators_), {});
    // Equation domains need the generator table, so they are resolved last.
    std::vector<Equation> equations;
    for (auto& raw : raw_equations_) {
      equations.push_back({resolve(theory, raw.lhs), resolve(theory, raw.rhs)});
    }
    TheoryPresentation out(theory.name(), theory.objects(), theory.generators(), std::move(equations));
    validate_theory(out);
    return out;
  }

 private:
  struct RawPath {
    std::optional<std::string> identity_of;
    std::vector<std::string> steps;
    Token at;
  };
  struct RawEquation {
    RawPath lhs;
    RawPath rhs;
  };

  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }
  bool peek_symbol(std::string_view s) const { return peek().kind == Token::Symbol && peek().text == s; }

  [[noreturn]] static void fail(const std::string& what, const Token& at) { throw ParseError(what, at.line, at.column); }

  void expect_keyword(std::string_view kw) {
    const Token& tok = next();
    if (tok.kind != Token::Ident || tok.text != kw) fail("expected '" + std::string(kw) + "'", tok);
  }
  void expect_symbol(std::string_view s) {
    const Token& tok = next();
    if (tok.kind != Token::Symbol || tok.text != s) fail("expected '" + std::string(s) + "'", tok);
  }
  std::string expect_ident(std::string_view what) {
    const Token& tok = next();
    if (tok.kind != Token::Ident) fail("expected " + std::string(what), tok);
    return tok.text;
  }

  void parse_objects() {
    objects_.push_back(expect_ident("object name"));
    while (peek_symbol(",")) {
      next();
      objects_.push_back(expect_ident("object name"));
    }
  }

  // hom f, g: A -> B
  void parse_homs() {
    std::vector<std::string> names{expect_ident("generator name")};
    while (peek_symbol(",")) {
      next();
      names.push_back(expect_ident("generator name"));
    }
    expect_symbol(":");
    std::string dom = expect_ident("domain object");
    expect_symbol("->");
    std::string cod = expect_ident("codomain object");
    for (auto& n : names) generators_.push_back({std::move(n), dom, cod});
  }

  RawPath parse_path() {
    RawPath path{std::nullopt, {}, peek()};
    std::string first = expect_ident("path");
    if (first == "id" && peek_symbol("(")) {
      next();
      path.identity_of = expect_ident("object name");
      expect_symbol(")");
      return path;
    }
    path.steps.push_back(std::move(first));
    while (peek_symbol(".")) {
      next();
      path.steps.push_back(expect_ident("generator name"));
    }
    return path;
  }

  void parse_equation() {
    RawPath lhs = parse_path();
    expect_symbol("=");
    RawPath rhs = parse_path();
    raw_equations_.push_back({std::move(lhs), std::move(rhs)});
  }

  static Path resolve(const TheoryPresentation& t, const RawPath& raw) {
    if (raw.identity_of) {
      if (!t.find_object(*raw.identity_of)) fail("undeclared object '" + *raw.identity_of + "'", raw.at);
      return Path{*raw.identity_of, {}};
    }
    auto g = t.find_generator(raw.steps.front());
    if (!g) fail("undeclared generator '" + raw.steps.front() + "'", raw.at);
    for (const auto& step : raw.steps) {
      if (!t.find_generator(step)) fail("undeclared generator '" + step + "'", raw.at);
    }
    return Path{t.generators()[*g].dom, raw.steps};
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<std::string> objects_;
  std::vector<Generator> generators_;
  std::vector<RawEquation> raw_equations_;
};

}  // namespace

TheoryPresentation parse_theory(std::string_view text) { return Parser(Lexer(text).run()).run(); }

// --- builtins ----------------------------------------------------------------

namespace {

Path p(std::string dom, std::vector<std::string> steps) { return Path{std::move(dom), std::move(steps)}; }

}  // namespace

TheoryPresentation builtin_theory(BuiltinTheory which) {
  using B = BuiltinTheory;
  switch (which) {
    case B::One:
      return {"One", {"P"}, {}, {}};
    case B::Two:
      return {"Two", {"P", "Q"}, {}, {}};
    case B::Graph:
      return {"Graph", {"E", "V"}, {{"src", "E", "V"}, {"tgt", "E", "V"}}, {}};
    case B::SGraph:
      return {"SGraph",
              {"E", "V"},
              {{"src", "E", "V"}, {"tgt", "E", "V"}, {"inv", "E", "E"}},
              {{p("E", {"inv", "inv"}), p("E", {})},
               {p("E", {"inv", "src"}), p("E", {"tgt"})},
               {p("E", {"inv", "tgt"}), p("E", {"src"})}}};
    case B::RGraph:
      return {"RGraph",
              {"E", "V"},
              {{"src", "E", "V"}, {"tgt", "E", "V"}, {"refl", "V", "E"}},
              {{p("V", {"refl", "src"}), p("V", {})}, {p("V", {"refl", "tgt"}), p("V", {})}}};
    case B::SRGraph:
      return {"SRGraph",
              {"E", "V"},
              {{"src", "E", "V"}, {"tgt", "E", "V"}, {"inv", "E", "E"}, {"refl", "V", "E"}},
              {{p("E", {"inv", "inv"}), p("E", {})},
               {p("E", {"inv", "src"}), p("E", {"tgt"})},
               {p("E", {"inv", "tgt"}), p("E", {"src"})},
               {p("V", {"refl", "src"}), p("V", {})},
               {p("V", {"refl", "tgt"}), p("V", {})},
               {p("V", {"refl", "inv"}), p("V", {"refl"})}}};
    case B::BGraph:
      return {"BGraph", {"U", "E", "V"}, {{"src", "E", "U"}, {"tgt", "E", "V"}}, {}};
    case B::Delta2:
      return {"Delta2",
              {"T", "E", "V"},
              {{"e0", "T", "E"}, {"e1", "T", "E"}, {"e2", "T", "E"}, {"v0", "E", "V"}, {"v1", "E", "V"}},
              {{p("T", {"e1", "v0"}), p("T", {"e0", "v0"})},
               {p("T", {"e2", "v0"}), p("T", {"e0", "v1"})},
               {p("T", {"e2", "v1"}), p("T", {"e1", "v1"})}}};
    case B::DDS:
      return {"DDS", {"P"}, {{"T", "P", "P"}}, {}};
    case B::ASet:
      return {"ASet", {"P", "A"}, {{"attr", "P", "A"}}, {}};
    case B::VGraph:
      return {"VGraph", {"E", "V", "A"}, {{"src", "E", "V"}, {"tgt", "E", "V"}, {"attr", "V", "A"}}, {}};
  }
  throw Error("unknown builtin theory");
}

const std::vector<std::string_view>& builtin_theory_names() {
  static const std::vector<std::string_view> names{"One",    "Two",    "Graph", "SGraph", "RGraph", "SRGraph",
                                                   "BGraph", "Delta2", "DDS",   "ASet",   "VGraph"};
  return names;
}

std::optional<BuiltinTheory> builtin_theory_from_name(std::string_view name) {
  const auto& names = builtin_theory_names();
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<BuiltinTheory>(it - names.begin());
}

TheoryPresentation builtin_theory(std::string_view name) {
  if (auto which = builtin_theory_from_name(name)) return builtin_theory(*which);
  throw Error("unknown builtin theory '" + std::string(name) + "'");
}

}  // namespace cst

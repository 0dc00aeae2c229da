#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cst {

/// A composite of generators in diagrammatic order ("f.g" is f then g).
/// An empty step list is the identity on `dom`.
struct Path {
  std::string dom;
  std::vector<std::string> steps;

  friend bool operator==(const Path&, const Path&) = default;
};

struct Generator {
  std::string name;
  std::string dom;
  std::string cod;

  friend bool operator==(const Generator&, const Generator&) = default;
};

struct Equation {
  Path lhs;
  Path rhs;

  friend bool operator==(const Equation&, const Equation&) = default;
};

/// A finitely presented category: objects, generating morphisms and path
/// equations. Equations are checked on instances, never rewritten.
class TheoryPresentation {
 public:
  TheoryPresentation() = default;
  TheoryPresentation(std::string name, std::vector<std::string> objects, std::vector<Generator> generators,
                     std::vector<Equation> equations);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& objects() const { return objects_; }
  const std::vector<Generator>& generators() const { return generators_; }
  const std::vector<Equation>& equations() const { return equations_; }

  std::optional<std::size_t> find_object(std::string_view name) const;
  std::optional<std::size_t> find_generator(std::string_view name) const;
  /// Like the find_* variants but throws cst::Error for unknown names.
  std::size_t object_index(std::string_view name) const;
  std::size_t generator_index(std::string_view name) const;

  std::size_t dom_index(std::size_t generator) const { return object_index(generators_[generator].dom); }
  std::size_t cod_index(std::size_t generator) const { return object_index(generators_[generator].cod); }

  /// Codomain object of a well-formed path.
  std::string path_cod(const Path& path) const;

  friend bool operator==(const TheoryPresentation&, const TheoryPresentation&) = default;

 private:
  std::string name_;
  std::vector<std::string> objects_;
  std::vector<Generator> generators_;
  std::vector<Equation> equations_;
};

enum class BuiltinTheory { One, Two, Graph, SGraph, RGraph, SRGraph, BGraph, Delta2, DDS, ASet, VGraph };

/// Parses the theory DSL and validates the result.
TheoryPresentation parse_theory(std::string_view text);

/// Serializes to the DSL; parse_theory(render_theory(t)) == t.
std::string render_theory(const TheoryPresentation& theory);

/// Throws ValidationError listing every violated invariant.
void validate_theory(const TheoryPresentation& theory);

TheoryPresentation builtin_theory(BuiltinTheory which);
/// Looks a builtin up by name ("Graph", "SGraph", ...); throws on unknown names.
TheoryPresentation builtin_theory(std::string_view name);
std::optional<BuiltinTheory> builtin_theory_from_name(std::string_view name);
const std::vector<std::string_view>& builtin_theory_names();

}  // namespace cst

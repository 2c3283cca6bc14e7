#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "omerdf/rdf/term.hpp"

namespace omerdf::rdf {

/// Subject is an IRI or blank node, never a literal.
class Triple {
 public:
  /// Throws Error(InvalidLiteral) if the subject is a literal.
  Triple(Term subject, Iri predicate, Term object);

  const Term& subject() const noexcept { return subject_; }
  const Iri& predicate() const noexcept { return predicate_; }
  const Term& object() const noexcept { return object_; }

  friend auto operator<=>(const Triple&, const Triple&) = default;
  friend bool operator==(const Triple&, const Triple&) = default;

 private:
  Term subject_;
  Iri predicate_;
  Term object_;
};

/// Single N-Triples statement line, without the trailing newline.
std::string to_ntriples(const Triple& triple);

/// Empty, or [A-Za-z][A-Za-z0-9_-]*.
bool is_valid_prefix_name(std::string_view prefix) noexcept;

/// A set of triples plus a prefix map used for Turtle output.
class Graph {
 public:
  using TripleSet = std::set<Triple>;
  using PrefixMap = std::map<std::string, Iri>;

  /// Returns true when the triple was not already present.
  bool insert(Triple triple);
  bool contains(const Triple& triple) const { return triples_.contains(triple); }

  /// Binds (or rebinds) a prefix. Throws Error(SyntaxError) for an invalid
  /// prefix name.
  void set_prefix(std::string prefix, Iri ns);

  const TripleSet& triples() const noexcept { return triples_; }
  const PrefixMap& prefixes() const noexcept { return prefixes_; }
  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }

  /// Sorted distinct blank node labels appearing in the graph.
  std::vector<std::string> blank_labels() const;

 private:
  TripleSet triples_;
  PrefixMap prefixes_;
};

/// Value-returning insert.
Graph graph_insert(Graph g, Triple t);

struct MergeOptions {
  /// Rename colliding blank nodes of the second graph instead of failing.
  bool relabel_blank_nodes = false;
};

/// Union of both graphs. A prefix of `b` bound to a different namespace in
/// `a` is renamed by appending the smallest free numeric suffix. Throws
/// Error(BlankNodeCollision) when blank labels overlap and relabeling is off.
Graph graph_merge(const Graph& a, const Graph& b, MergeOptions options = {});

}  // namespace omerdf::rdf

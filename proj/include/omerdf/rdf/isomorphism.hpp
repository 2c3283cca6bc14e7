#pragma once

#include <cstddef>
#include <optional>

#include "omerdf/rdf/graph.hpp"

namespace omerdf::rdf {

/// Largest blank-node count handled by the exhaustive bijection search.
inline constexpr std::size_t kBruteForceBlankLimit = 12;

/// Exhaustive backtracking search over blank-node bijections.
/// Throws Error(TooLargeForExactCheck) above kBruteForceBlankLimit.
bool isomorphic_brute_force(const Graph& a, const Graph& b);

/// Joint colour refinement of the blank nodes of both graphs. Returns false
/// when the colour histograms differ, true when the refined partition is
/// discrete and the induced bijection maps one triple set onto the other,
/// and nullopt when the partition stays ambiguous.
std::optional<bool> isomorphic_by_refinement(const Graph& a, const Graph& b);

/// Triple-set equality up to blank-node renaming; prefixes are ignored.
/// Uses the brute-force search within its bound and refinement beyond it.
/// Throws Error(TooLargeForExactCheck) when refinement is inconclusive on a
/// graph too large for brute force.
bool graph_isomorphic(const Graph& a, const Graph& b);

}  // namespace omerdf::rdf

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "omerdf/rdf/graph.hpp"

namespace omerdf::rdf {

enum class Format { Turtle, NTriples };

std::string_view to_string(Format format);
/// Accepts "turtle"/"ttl" and "ntriples"/"nt".
std::optional<Format> parse_format(std::string_view name);
/// Guesses from a file extension (.ttl / .nt); nullopt when unknown.
std::optional<Format> format_from_path(std::string_view path);

/// Canonical N-Triples lines, sorted by byte and without newlines.
std::vector<std::string> canonical_lines(const Graph& g);

/// Canonical output. N-Triples: one triple per sorted line, every line
/// LF-terminated, nothing else. Turtle: sorted @prefix block, then one
/// statement block per subject in subject order.
std::string serialize(const Graph& g, Format format);

/// Parses the supported subset: prefix declarations, IRIs, prefixed names,
/// blank node labels, plain/typed/language literals and (Turtle only) bare
/// numbers and booleans. Throws Error(SyntaxError) with position, or
/// Error(UnsupportedConstruct) for collections, anonymous blank nodes,
/// quoted triples and base declarations.
Graph parse(std::string_view text, Format format);

}  // namespace omerdf::rdf

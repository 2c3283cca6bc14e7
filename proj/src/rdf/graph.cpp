#include "omerdf/rdf/graph.hpp"

#include <algorithm>

#include "omerdf/error.hpp"

namespace omerdf::rdf {

Triple::Triple(Term subject, Iri predicate, Term object)
    : subject_(std::move(subject)),
      predicate_(std::move(predicate)),
      object_(std::move(object)) {
  if (is_literal(subject_)) {
    throw Error(ErrorCode::InvalidLiteral, "triple subject cannot be a literal");
  }
}

std::string to_ntriples(const Triple& triple) {
  std::string line = to_ntriples(triple.subject());
  line += ' ';
  line += to_ntriples(triple.predicate());
  line += ' ';
  line += to_ntriples(triple.object());
  line += " .";
  return line;
}

bool Graph::insert(Triple triple) { return triples_.insert(std::move(triple)).second; }

bool is_valid_prefix_name(std::string_view prefix) noexcept {
  if (prefix.empty()) return true;
  const auto alpha = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
  };
  if (!alpha(prefix.front())) return false;
  return std::all_of(prefix.begin(), prefix.end(), [&](char c) {
    return alpha(c) || (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

void Graph::set_prefix(std::string prefix, Iri ns) {
  if (!is_valid_prefix_name(prefix)) {
    throw Error(ErrorCode::SyntaxError, "invalid prefix name '" + prefix + "'");
  }
  prefixes_.insert_or_assign(std::move(prefix), std::move(ns));
}

std::vector<std::string> Graph::blank_labels() const {
  std::set<std::string> labels;
  for (const auto& t : triples_) {
    if (const auto* b = std::get_if<BlankNode>(&t.subject())) labels.insert(b->label());
    if (const auto* b = std::get_if<BlankNode>(&t.object())) labels.insert(b->label());
  }
  return {labels.begin(), labels.end()};
}

Graph graph_insert(Graph g, Triple t) {
  g.insert(std::move(t));
  return g;
}

namespace {

Term rename(const Term& term, const std::map<std::string, std::string>& renames) {
  if (const auto* b = std::get_if<BlankNode>(&term)) {
    if (auto it = renames.find(b->label()); it != renames.end()) {
      return BlankNode::make(it->second);
    }
  }
  return term;
}

}  // namespace

Graph graph_merge(const Graph& a, const Graph& b, MergeOptions options) {
  Graph out = a;

  const auto labels_a = a.blank_labels();
  const auto labels_b = b.blank_labels();
  std::set<std::string> taken(labels_a.begin(), labels_a.end());
  taken.insert(labels_b.begin(), labels_b.end());

  std::map<std::string, std::string> renames;
  for (const auto& label : labels_b) {
    if (!std::binary_search(labels_a.begin(), labels_a.end(), label)) continue;
    if (!options.relabel_blank_nodes) {
      throw Error(ErrorCode::BlankNodeCollision,
                  "blank node _:" + label + " appears in both graphs");
    }
    for (int n = 1;; ++n) {
      auto candidate = label + std::to_string(n);
      if (!taken.contains(candidate)) {
        taken.insert(candidate);
        renames.emplace(label, std::move(candidate));
        break;
      }
    }
  }

  for (const auto& t : b.triples()) {
    if (renames.empty()) {
      out.insert(t);
    } else {
      out.insert(Triple(rename(t.subject(), renames), t.predicate(),
                        rename(t.object(), renames)));
    }
  }

  for (const auto& [prefix, ns] : b.prefixes()) {
    const auto& existing = out.prefixes();
    auto it = existing.find(prefix);
    if (it == existing.end()) {
      out.set_prefix(prefix, ns);
      continue;
    }
    if (it->second == ns) continue;
    for (int n = 1;; ++n) {
      auto candidate = prefix + std::to_string(n);
      auto hit = existing.find(candidate);
      if (hit == existing.end()) {
        out.set_prefix(std::move(candidate), ns);
        break;
      }
      if (hit->second == ns) break;
    }
  }
  return out;
}

}  // namespace omerdf::rdf

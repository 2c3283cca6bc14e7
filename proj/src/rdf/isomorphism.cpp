#include "omerdf/rdf/isomorphism.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "omerdf/error.hpp"

namespace omerdf::rdf {

namespace {

bool has_blank(const Triple& t) { return is_blank(t.subject()) || is_blank(t.object()); }

struct Split {
  std::vector<const Triple*> ground;
  std::vector<const Triple*> blank;
  std::vector<std::string> labels;
};

Split split(const Graph& g) {
  Split out;
  for (const auto& t : g.triples()) {
    (has_blank(t) ? out.blank : out.ground).push_back(&t);
  }
  out.labels = g.blank_labels();
  return out;
}

// Cheap necessary conditions shared by both strategies.
bool prechecks_pass(const Graph& a, const Graph& b, const Split& sa, const Split& sb) {
  if (a.size() != b.size()) return false;
  if (sa.labels.size() != sb.labels.size()) return false;
  if (sa.ground.size() != sb.ground.size()) return false;
  for (const auto* t : sa.ground) {
    if (!b.contains(*t)) return false;
  }
  return true;
}

std::size_t index_of(const std::vector<std::string>& sorted, const std::string& label) {
  return static_cast<std::size_t>(
      std::lower_bound(sorted.begin(), sorted.end(), label) - sorted.begin());
}

Term map_term(const Term& term, const std::vector<std::string>& labels_a,
              const std::vector<std::string>& labels_b,
              const std::vector<std::size_t>& mapping) {
  if (const auto* bn = std::get_if<BlankNode>(&term)) {
    return BlankNode::make(labels_b[mapping[index_of(labels_a, bn->label())]]);
  }
  return term;
}

bool maps_into(const Triple& t, const Graph& b, const std::vector<std::string>& labels_a,
               const std::vector<std::string>& labels_b,
               const std::vector<std::size_t>& mapping) {
  return b.contains(Triple(map_term(t.subject(), labels_a, labels_b, mapping),
                           t.predicate(),
                           map_term(t.object(), labels_a, labels_b, mapping)));
}

class BijectionSearch {
 public:
  BijectionSearch(const Graph& b, const Split& sa, const Split& sb)
      : b_(b), sa_(sa), sb_(sb), mapping_(sa.labels.size()),
        used_(sa.labels.size(), false), checks_(sa.labels.size()) {
    // Each blank triple is checked once, as soon as its highest-indexed
    // blank node has been assigned.
    for (const auto* t : sa.blank) {
      std::size_t top = 0;
      if (const auto* s = std::get_if<BlankNode>(&t->subject())) {
        top = std::max(top, index_of(sa.labels, s->label()));
      }
      if (const auto* o = std::get_if<BlankNode>(&t->object())) {
        top = std::max(top, index_of(sa.labels, o->label()));
      }
      checks_[top].push_back(t);
    }
  }

  bool run(std::size_t depth = 0) {
    if (depth == mapping_.size()) return true;
    for (std::size_t candidate = 0; candidate < used_.size(); ++candidate) {
      if (used_[candidate]) continue;
      mapping_[depth] = candidate;
      used_[candidate] = true;
      const bool consistent = std::all_of(
          checks_[depth].begin(), checks_[depth].end(), [&](const Triple* t) {
            return maps_into(*t, b_, sa_.labels, sb_.labels, mapping_);
          });
      if (consistent && run(depth + 1)) return true;
      used_[candidate] = false;
    }
    return false;
  }

 private:
  const Graph& b_;
  const Split& sa_;
  const Split& sb_;
  std::vector<std::size_t> mapping_;
  std::vector<bool> used_;
  std::vector<std::vector<const Triple*>> checks_;
};

// Colours for the blank nodes of both graphs, indexed like Split::labels.
struct Colouring {
  std::vector<int> a;
  std::vector<int> b;
};

std::string blank_edge(char direction, const Triple& t, const Term& other,
                       const std::vector<std::string>& labels,
                       const std::vector<int>& colours) {
  std::string edge(1, direction);
  edge += to_ntriples(t.predicate());
  if (const auto* bn = std::get_if<BlankNode>(&other)) {
    edge += "#" + std::to_string(colours[index_of(labels, bn->label())]);
  } else {
    edge += to_ntriples(other);
  }
  return edge;
}

std::vector<std::string> signatures(const Split& s, const std::vector<int>& colours) {
  std::vector<std::vector<std::string>> edges(s.labels.size());
  for (const auto* t : s.blank) {
    if (const auto* sub = std::get_if<BlankNode>(&t->subject())) {
      edges[index_of(s.labels, sub->label())].push_back(
          blank_edge('>', *t, t->object(), s.labels, colours));
    }
    if (const auto* obj = std::get_if<BlankNode>(&t->object())) {
      edges[index_of(s.labels, obj->label())].push_back(
          blank_edge('<', *t, t->subject(), s.labels, colours));
    }
  }
  std::vector<std::string> out(s.labels.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::sort(edges[i].begin(), edges[i].end());
    out[i] = std::to_string(colours[i]);
    for (const auto& e : edges[i]) out[i] += "|" + e;
  }
  return out;
}

Colouring refine(const Split& sa, const Split& sb) {
  Colouring c{std::vector<int>(sa.labels.size(), 0),
              std::vector<int>(sb.labels.size(), 0)};
  std::size_t classes = 1;
  while (true) {
    const auto sig_a = signatures(sa, c.a);
    const auto sig_b = signatures(sb, c.b);
    std::map<std::string, int> ids;
    for (const auto& s : sig_a) ids.emplace(s, 0);
    for (const auto& s : sig_b) ids.emplace(s, 0);
    int next = 0;
    for (auto& [sig, id] : ids) id = next++;
    for (std::size_t i = 0; i < sig_a.size(); ++i) c.a[i] = ids[sig_a[i]];
    for (std::size_t i = 0; i < sig_b.size(); ++i) c.b[i] = ids[sig_b[i]];
    if (ids.size() <= classes) break;
    classes = ids.size();
  }
  return c;
}

}  // namespace

bool isomorphic_brute_force(const Graph& a, const Graph& b) {
  const auto sa = split(a);
  const auto sb = split(b);
  if (sa.labels.size() > kBruteForceBlankLimit ||
      sb.labels.size() > kBruteForceBlankLimit) {
    throw Error(ErrorCode::TooLargeForExactCheck,
                "brute-force isomorphism limited to " +
                    std::to_string(kBruteForceBlankLimit) + " blank nodes");
  }
  if (!prechecks_pass(a, b, sa, sb)) return false;
  return BijectionSearch(b, sa, sb).run();
}

std::optional<bool> isomorphic_by_refinement(const Graph& a, const Graph& b) {
  const auto sa = split(a);
  const auto sb = split(b);
  if (!prechecks_pass(a, b, sa, sb)) return false;

  const auto colours = refine(sa, sb);
  auto hist_a = colours.a;
  auto hist_b = colours.b;
  std::sort(hist_a.begin(), hist_a.end());
  std::sort(hist_b.begin(), hist_b.end());
  if (hist_a != hist_b) return false;
  if (std::adjacent_find(hist_a.begin(), hist_a.end()) != hist_a.end()) {
    return std::nullopt;
  }

  std::map<int, std::size_t> by_colour_b;
  for (std::size_t i = 0; i < colours.b.size(); ++i) by_colour_b[colours.b[i]] = i;
  std::vector<std::size_t> mapping(colours.a.size());
  for (std::size_t i = 0; i < colours.a.size(); ++i) {
    mapping[i] = by_colour_b.at(colours.a[i]);
  }
  return std::all_of(sa.blank.begin(), sa.blank.end(), [&](const Triple* t) {
    return maps_into(*t, b, sa.labels, sb.labels, mapping);
  });
}

bool graph_isomorphic(const Graph& a, const Graph& b) {
  const auto blanks_a = a.blank_labels().size();
  const auto blanks_b = b.blank_labels().size();
  if (blanks_a != blanks_b) return false;
  if (blanks_a <= kBruteForceBlankLimit) return isomorphic_brute_force(a, b);
  if (auto verdict = isomorphic_by_refinement(a, b)) return *verdict;
  throw Error(ErrorCode::TooLargeForExactCheck,
              "colour refinement inconclusive for " + std::to_string(blanks_a) +
                  " blank nodes");
}

}  // namespace omerdf::rdf

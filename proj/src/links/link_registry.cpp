#include "omerdf/links/link_registry.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "omerdf/error.hpp"

namespace omerdf::links {

namespace {

bool is_valid_prefix(std::string_view p) {
  if (p.empty() || p.front() < 'a' || p.front() > 'z') return false;
  return std::all_of(p.begin(), p.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

std::string entry_line(const LinkEntry& e) {
  return e.prefix + "\t" + e.base.value() + "\t" + e.id_pattern;
}

}  // namespace

LinkEntry LinkRegistry::make_entry(std::string prefix, std::string_view base,
                                   std::string id_pattern) {
  if (!is_valid_prefix(prefix)) {
    throw Error(ErrorCode::InvalidLinkRegistry,
                "prefix '" + prefix + "' must match [a-z][a-z0-9_]*");
  }
  if (!rdf::Iri::is_valid(base)) {
    throw Error(ErrorCode::InvalidLinkRegistry, "invalid base IRI '" + std::string(base) + "'");
  }
  if (base.ends_with('/') || base.ends_with('#')) {
    throw Error(ErrorCode::InvalidLinkRegistry,
                "base IRI '" + std::string(base) + "' must not end with '/' or '#'");
  }
  if (id_pattern.empty()) {
    throw Error(ErrorCode::InvalidLinkRegistry, "empty id pattern for '" + prefix + "'");
  }
  std::regex compiled;
  try {
    compiled = std::regex(id_pattern, std::regex::ECMAScript);
  } catch (const std::regex_error& e) {
    throw Error(ErrorCode::InvalidLinkRegistry,
                "id pattern '" + id_pattern + "' does not compile: " + e.what());
  }
  return {std::move(prefix), rdf::Iri::make(base), std::move(id_pattern), std::move(compiled)};
}

LinkRegistry LinkRegistry::default_registry() { return load(kDefaultRegistryText); }

LinkRegistry LinkRegistry::load(std::string_view text) {
  LinkRegistry reg;
  if (text.empty()) {
    reg.trailing_newline_ = false;
    return reg;
  }
  reg.trailing_newline_ = text.back() == '\n';
  if (reg.trailing_newline_) text.remove_suffix(1);

  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find('\n', start), text.size());
    const auto raw = text.substr(start, end - start);
    ++line_no;
    reg.lines_.emplace_back(raw);
    auto line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const bool blank = line.find_first_not_of(" \t") == std::string_view::npos;
    if (!blank && line.front() != '#') {
      std::vector<std::string_view> fields;
      std::size_t f = 0;
      while (true) {
        const auto tab = line.find('\t', f);
        fields.push_back(line.substr(f, tab == std::string_view::npos ? tab : tab - f));
        if (tab == std::string_view::npos) break;
        f = tab + 1;
      }
      if (fields.size() != 3) {
        throw Error(ErrorCode::InvalidLinkRegistry,
                    "expected prefix<TAB>baseIri<TAB>idPattern, found " +
                        std::to_string(fields.size()) + " fields",
                    line_no, std::nullopt);
      }
      try {
        auto e = make_entry(std::string(fields[0]), fields[1], std::string(fields[2]));
        if (reg.entries_.count(e.prefix)) {
          throw Error(ErrorCode::InvalidLinkRegistry, "duplicate prefix '" + e.prefix + "'");
        }
        auto key = e.prefix;
        reg.entries_.emplace(std::move(key), std::move(e));
      } catch (const Error& e) {
        if (e.line()) throw;
        throw Error(e.code(), e.what(), line_no, std::nullopt);
      }
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return reg;
}

std::string LinkRegistry::save() const {
  std::string out;
  for (std::size_t i = 0; i < lines_.size(); ++i) {
    out += lines_[i];
    if (i + 1 < lines_.size() || trailing_newline_) out += '\n';
  }
  return out;
}

void LinkRegistry::add(std::string prefix, std::string_view base, std::string id_pattern) {
  auto e = make_entry(std::move(prefix), base, std::move(id_pattern));
  if (entries_.count(e.prefix)) {
    throw Error(ErrorCode::InvalidLinkRegistry, "duplicate prefix '" + e.prefix + "'");
  }
  lines_.push_back(entry_line(e));
  trailing_newline_ = true;
  auto key = e.prefix;
  entries_.emplace(std::move(key), std::move(e));
}

const LinkEntry* LinkRegistry::find(std::string_view prefix) const {
  const auto it = entries_.find(prefix);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> LinkRegistry::prefixes() const {
  std::vector<std::string> out;
  for (const auto& [p, e] : entries_) out.push_back(p);
  return out;
}

std::vector<std::string> LinkRegistry::namespaces() const {
  std::vector<std::string> out;
  for (const auto& [p, e] : entries_) out.push_back(e.base.value() + "/");
  return out;
}

bool LinkRegistry::is_external(std::string_view iri) const {
  for (const auto& [p, e] : entries_) {
    const auto& b = e.base.value();
    if (iri.size() > b.size() + 1 && iri.starts_with(b) && iri[b.size()] == '/') return true;
  }
  return false;
}

rdf::Iri LinkRegistry::resolve(std::string_view curie) const {
  const auto colon = curie.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == curie.size()) {
    throw Error(ErrorCode::MalformedCurie,
                "'" + std::string(curie) + "' is not of the form prefix:localId");
  }
  const auto prefix = curie.substr(0, colon);
  const auto local = std::string(curie.substr(colon + 1));
  const auto* e = find(prefix);
  if (!e) {
    throw Error(ErrorCode::UnknownPrefix, "no link registry entry for prefix '" +
                                              std::string(prefix) + "'");
  }
  if (!std::regex_match(local, e->compiled)) {
    throw Error(ErrorCode::IdPatternMismatch, "local id '" + local + "' does not match " +
                                                  e->id_pattern + " for prefix '" +
                                                  e->prefix + "'");
  }
  return rdf::Iri::make(e->base.value() + "/" + local);
}

std::string_view to_string(LinkStatus s) {
  switch (s) {
    case LinkStatus::Ok: return "ok";
    case LinkStatus::Unreachable: return "unreachable";
    case LinkStatus::NotChecked: return "notChecked";
  }
  return "";
}

std::vector<LinkCheckResult> check_links(const std::vector<rdf::Iri>& iris, Fetcher* fetcher,
                                         const CheckOptions& opts) {
  std::vector<LinkCheckResult> results;
  results.reserve(iris.size());
  for (const auto& iri : iris) results.push_back({iri, LinkStatus::NotChecked, std::nullopt});
  if (opts.offline || !fetcher || iris.empty()) return results;

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto i = next++; i < iris.size(); i = next++) {
      auto& r = results[i];
      r.status = LinkStatus::Unreachable;
      try {
        const auto outcome = fetcher->fetch(iris[i], opts.timeout);
        if (outcome.http_status && !outcome.timed_out) {
          r.http_status = outcome.http_status;
          if (*outcome.http_status >= 200 && *outcome.http_status < 400) {
            r.status = LinkStatus::Ok;
          }
        }
      } catch (...) {
        // network failures are reported, never thrown
      }
    }
  };
  {
    const auto n = std::clamp<std::size_t>(opts.parallelism, 1, iris.size());
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  return results;
}

}  // namespace omerdf::links

#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "omerdf/rdf/term.hpp"

namespace omerdf::links {

struct LinkEntry {
  std::string prefix;
  rdf::Iri base;
  /// Matched against the whole local id.
  std::string id_pattern;
  std::regex compiled;
};

/// Registry file contents shipped as data/link-registry.tsv.
inline constexpr std::string_view kDefaultRegistryText =
    "# prefix\tbaseIri\tidPattern\n"
    "rikenbrc_mouse\thttp://metadb.riken.jp/metadb/db/rikenbrc_mouse\t"
    "[A-Za-z0-9][A-Za-z0-9_.-]*\n";

/// CURIE prefix -> external database namespace. Loaded from a text file
/// with one `prefix<TAB>baseIri<TAB>idPattern` line per entry; '#' comment
/// lines and blank lines are kept so save() reproduces the input.
class LinkRegistry {
 public:
  LinkRegistry() = default;

  static LinkRegistry default_registry();
  /// Throws Error(InvalidLinkRegistry) with the offending line.
  static LinkRegistry load(std::string_view text);
  std::string save() const;

  /// Throws Error(InvalidLinkRegistry) for a bad prefix (must match
  /// [a-z][a-z0-9_]*), a duplicate, a base IRI ending in '/' or '#', or a
  /// pattern that does not compile.
  void add(std::string prefix, std::string_view base, std::string id_pattern);

  const LinkEntry* find(std::string_view prefix) const;
  std::size_t size() const noexcept { return entries_.size(); }
  /// Sorted prefixes.
  std::vector<std::string> prefixes() const;
  /// base + "/" for every entry; IRIs under these are external links.
  std::vector<std::string> namespaces() const;
  bool is_external(std::string_view iri) const;

  /// "prefix:localId" -> base + "/" + localId. Throws Error with
  /// MalformedCurie, UnknownPrefix or IdPatternMismatch.
  rdf::Iri resolve(std::string_view curie) const;

 private:
  static LinkEntry make_entry(std::string prefix, std::string_view base,
                              std::string id_pattern);

  std::map<std::string, LinkEntry, std::less<>> entries_;
  std::vector<std::string> lines_;
  bool trailing_newline_ = true;
};

// --- liveness checking ------------------------------------------------------

enum class LinkStatus { Ok, Unreachable, NotChecked };

std::string_view to_string(LinkStatus s);

struct LinkCheckResult {
  rdf::Iri iri;
  LinkStatus status = LinkStatus::NotChecked;
  std::optional<int> http_status;
};

/// Outcome of one request: an HTTP status, or nothing on network failure
/// or timeout.
struct FetchOutcome {
  std::optional<int> http_status;
  bool timed_out = false;
};

/// Issues a single request. Implementations must honour the timeout and
/// may be called from several threads at once.
class Fetcher {
 public:
  virtual ~Fetcher() = default;
  virtual FetchOutcome fetch(const rdf::Iri& iri, std::chrono::milliseconds timeout) = 0;
};

/// HTTP(S) GET via cpp-httplib; redirects are not followed.
std::unique_ptr<Fetcher> make_http_fetcher();

struct CheckOptions {
  bool offline = false;
  std::size_t parallelism = 8;
  std::chrono::milliseconds timeout{5000};
};

/// One result per input in input order. 2xx and 3xx are Ok; other
/// statuses, failures, timeouts and fetcher exceptions are Unreachable.
/// Offline mode (or a null fetcher) yields NotChecked everywhere.
std::vector<LinkCheckResult> check_links(const std::vector<rdf::Iri>& iris, Fetcher* fetcher,
                                         const CheckOptions& opts = {});

}  // namespace omerdf::links

#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "omerdf/error.hpp"
#include "omerdf/links/link_registry.hpp"
#include "omerdf/mapper/mapper.hpp"
#include "omerdf/ontology/ontology.hpp"
#include "omerdf/rdf/serialization.hpp"

namespace omerdf::ingest {

struct InputPair {
  std::filesystem::path ome;
  std::optional<std::filesystem::path> sidecar;

  friend bool operator==(const InputPair&, const InputPair&) = default;
};

/// Every `*.ome.xml` below `dir` (recursively), paired with the
/// `*.ann.tsv` of the same stem in the same directory when one exists.
/// Sorted by path. Throws Error(DirNotFound).
std::vector<InputPair> scan_inputs(const std::filesystem::path& dir);

/// Logical CPU count, at least 1.
std::size_t default_parallelism();

struct IngestConfig {
  std::filesystem::path input_dir;
  std::filesystem::path output_dir;
  std::size_t shard_size = 1000;
  std::size_t parallelism = default_parallelism();
  bool skip_errors = false;
  rdf::Format format = rdf::Format::NTriples;

  /// Throws Error(InvalidConfig) for a zero shard size or parallelism.
  void check() const;
};

struct IngestStats {
  std::size_t files_scanned = 0;
  std::size_t images_converted = 0;
  std::size_t images_skipped = 0;
  std::size_t duplicates_dropped = 0;
  std::size_t triples_emitted = 0;
  std::size_t external_links_emitted = 0;
  std::chrono::milliseconds wall_time{0};

  std::size_t images_encountered() const {
    return images_converted + images_skipped + duplicates_dropped;
  }
};

/// One errors.tsv row. `image_id` is "-" when the whole file failed before
/// any image could be read.
struct IngestError {
  std::string file;
  std::string image_id;
  ErrorCode code;
  std::string message;
};

struct IngestResult {
  IngestStats stats;
  std::vector<IngestError> errors;
  std::vector<std::filesystem::path> shards;
};

/// Converts every input pair into sharded canonical output under
/// `output_dir`: `shard-NNNNN.nt` (or `.ttl`), `stats.tsv` and `errors.tsv`.
///
/// Records are numbered in sorted input order; a record whose canonical
/// N-Triples is byte-identical to an earlier one is dropped as a duplicate,
/// and the k-th kept record goes to shard k / shard_size. The output is
/// therefore independent of `parallelism`.
///
/// Unreadable inputs and unwritable outputs throw Error(IoError). Other
/// failures are recorded and skipped with `skip_errors`, otherwise the
/// first one (in input order) is rethrown with the file name prefixed.
/// Existing shard files in `output_dir` are removed first.
IngestResult ingest(const IngestConfig& config, const ontology::OntologyRegistry& registry,
                    const mapper::MintingPolicy& policy, const links::LinkRegistry& links);

/// `key: value` lines in fixed order.
std::string stats_report(const IngestStats& stats);
/// `key<TAB>value` lines in the same order, as written to stats.tsv.
std::string stats_tsv(const IngestStats& stats);
/// Inverse of stats_tsv. Throws Error(BadValue) for unknown or missing keys.
IngestStats parse_stats_tsv(std::string_view text);

/// `file<TAB>imageId<TAB>code` lines, as written to errors.tsv.
std::string errors_tsv(const std::vector<IngestError>& errors);

}  // namespace omerdf::ingest

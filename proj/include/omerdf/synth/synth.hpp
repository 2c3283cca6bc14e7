#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "omerdf/ome/ome.hpp"

namespace omerdf::synth {

/// Synthetic OME-XML + sidecar corpora for scale and property tests.
struct SynthOptions {
  std::uint64_t seed = 1;
  /// Total images across all files.
  std::size_t records = 100;
  std::size_t images_per_file = 1;
  /// Share of files whose instrument is an electron microscope.
  double em_fraction = 0.7;
  /// Files per subdirectory; 0 writes everything into the root.
  std::size_t files_per_dir = 1000;
};

/// What a generated corpus contains, counted while generating.
struct SynthLedger {
  std::size_t files = 0;
  std::size_t sidecars = 0;
  std::size_t images = 0;
  std::size_t em_images = 0;
  std::size_t annotated_images = 0;
  std::size_t strain_links = 0;

  friend bool operator==(const SynthLedger&, const SynthLedger&) = default;
};

struct SynthFile {
  /// Relative path without extension, e.g. "batch-000/rec-000042".
  std::string stem;
  std::string ome_xml;
  /// Absent when no image of the file is annotated.
  std::optional<std::string> sidecar;
  SynthLedger counts;
};

/// File `index` of the corpus. Depends only on (opts, index).
SynthFile make_file(const SynthOptions& opts, std::size_t index);

std::size_t file_count(const SynthOptions& opts);

/// Writes every file under `dir` (created if missing) and returns the
/// summed ledger. Throws Error(IoError).
SynthLedger write_corpus(const std::filesystem::path& dir, const SynthOptions& opts);

/// `key<TAB>value` lines in declaration order.
std::string format_ledger(const SynthLedger& ledger);

/// Random but well-formed sidecar rows with distinct image ids, covering
/// absent optional cells, non-ASCII text and multi-phenotype lists.
std::vector<ome::EmAnnotation> random_annotations(std::uint64_t seed, std::size_t n);

}  // namespace omerdf::synth

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "omerdf/error.hpp"
#include "omerdf/links/link_registry.hpp"
#include "omerdf/ome/ome.hpp"
#include "omerdf/ontology/ontology.hpp"
#include "omerdf/rdf/graph.hpp"

namespace omerdf::mapper {

inline constexpr std::string_view kDefaultInstanceBase = "https://w3id.org/ome-rdf/instance/";

/// Instance IRIs are always skolem IRIs under `instance_base`; the mapper
/// never emits blank nodes.
struct MintingPolicy {
  rdf::Iri instance_base;
  bool skolemize = true;

  /// Throws Error(InvalidPolicy) unless `base` is a valid IRI ending in '/'
  /// or '#'.
  static MintingPolicy make(std::string_view base = kDefaultInstanceBase);
};

/// Percent-encodes every byte outside A-Z a-z 0-9 - . _ ~.
std::string percent_encode(std::string_view s);

/// base + lowercase(class label) + "/" + encoded local id. Throws
/// Error(EmptyLocalId) for an empty id, Error(InvalidPolicy) when the
/// policy does not skolemize.
rdf::Iri mint_iri(const MintingPolicy& policy, const ontology::OntologyClass& cls,
                  std::string_view local_id);
/// Same with several path segments, each encoded separately.
rdf::Iri mint_iri(const MintingPolicy& policy, const ontology::OntologyClass& cls,
                  const std::vector<std::string>& segments);

struct MappedRecord {
  rdf::Iri image_iri;
  rdf::Graph graph;
  std::size_t triple_count = 0;
  /// Resolved strain IRIs, sorted.
  std::vector<rdf::Iri> external_links;
};

/// Builds the instance graph for one image. `doc`, when given, supplies the
/// instrument and experimenter the image refers to.
///
/// Throws Error(UnresolvableStrain) when the strain CURIE cannot be
/// resolved, Error(UnknownClassInRegistry) when the registry lacks a class
/// or property the mapping needs.
MappedRecord map_pair(const ome::OmeImage& img, const std::optional<ome::EmAnnotation>& ann,
                      const ontology::OntologyRegistry& registry, const MintingPolicy& policy,
                      const links::LinkRegistry& links, const ome::OmeDocument* doc = nullptr);

struct MapOptions {
  /// Record failures in `skipped` instead of throwing.
  bool skip_errors = false;
};

struct SkippedRecord {
  std::string image_id;
  ErrorCode code;
  std::string message;
};

struct MapAllResult {
  rdf::Graph graph;
  std::vector<MappedRecord> records;
  std::vector<SkippedRecord> skipped;
};

/// Maps every pair in order and unions the graphs. Without skip_errors the
/// first failure is rethrown with the image id prefixed to its message.
MapAllResult map_all(const std::vector<ome::ImageRecord>& pairs,
                     const ontology::OntologyRegistry& registry, const MintingPolicy& policy,
                     const links::LinkRegistry& links, const ome::OmeDocument* doc = nullptr,
                     const MapOptions& opts = {});

}  // namespace omerdf::mapper

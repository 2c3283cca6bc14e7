#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "omerdf/rdf/graph.hpp"

namespace omerdf::ontology {

inline constexpr std::string_view kDefaultNamespace = "https://w3id.org/ome-rdf/ontology#";
/// Fixed vocabulary for schema annotations (category, origin, cardinality,
/// value bounds). Kept apart from the configurable ontology namespace so
/// translated property names can never shadow it.
inline constexpr std::string_view kMetaNamespace = "https://w3id.org/ome-rdf/meta#";

enum class Category { Image, Experimenter, Instrument, BioSample, Screening };
inline constexpr std::size_t kCategoryCount = 5;

std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view s);

/// Translated classes come from the OME data model, extended ones are the
/// biosample and electron-microscopy additions.
enum class Origin { Translated, Extended };

std::string_view to_string(Origin o);
std::optional<Origin> parse_origin(std::string_view s);

struct OntologyClass {
  rdf::Iri iri;
  std::string label;
  /// Always set in the core ontology; translated fragments leave it empty.
  std::optional<Category> category;
  Origin origin = Origin::Translated;
  std::optional<rdf::Iri> superclass;
};

enum class PropertyKind { Object, Datatype };

/// Numeric bounds on datatype property values.
struct ValueRange {
  std::optional<double> min;
  bool min_inclusive = true;
  std::optional<double> max;
  bool max_inclusive = true;

  bool contains(double v) const;
  /// e.g. "(0, 1000]".
  std::string describe() const;
};

/// minCount only applies to subjects linked through `via` to a node typed
/// `target_class`.
struct RequiredWhen {
  rdf::Iri via;
  rdf::Iri target_class;
};

struct PropertyDef {
  rdf::Iri iri;
  std::string label;
  PropertyKind kind = PropertyKind::Datatype;
  rdf::Iri domain;
  /// A class IRI for object properties, a datatype IRI otherwise.
  rdf::Iri range;
  /// Further classes accepted as subject/object type.
  std::vector<rdf::Iri> extra_domains;
  std::vector<rdf::Iri> extra_ranges;
  std::size_t min_count = 0;
  std::optional<std::size_t> max_count;  // nullopt = unbounded
  std::optional<ValueRange> value_range;
  std::optional<std::string> unit;
  std::optional<RequiredWhen> required_when;
};

/// Classes and properties of one ontology namespace. Lookup by IRI is
/// constant time; iteration follows insertion order.
class OntologyRegistry {
 public:
  explicit OntologyRegistry(rdf::Iri ns, std::string title = "");

  const rdf::Iri& ontology_namespace() const noexcept { return ns_; }
  const std::string& title() const noexcept { return title_; }
  /// Ontology namespace + local name.
  rdf::Iri term(std::string_view local) const;

  /// Throws Error(InvalidRegistry) on a duplicate IRI.
  void add_class(OntologyClass c);
  void add_property(PropertyDef p);

  const std::vector<OntologyClass>& classes() const noexcept { return classes_; }
  const std::vector<PropertyDef>& properties() const noexcept { return properties_; }

  const OntologyClass* find_class(const rdf::Iri& iri) const;
  const PropertyDef* find_property(const rdf::Iri& iri) const;
  const OntologyClass* find_class_by_label(std::string_view label) const;

  /// Classes without a superclass.
  std::vector<const OntologyClass*> upper_level_classes() const;

  /// Structural invariants: non-empty labels, IRIs inside the namespace,
  /// superclass/domain references registered, minCount <= maxCount.
  /// Throws Error(InvalidRegistry).
  void check() const;

 private:
  rdf::Iri ns_;
  std::string title_;
  std::vector<OntologyClass> classes_;
  std::vector<PropertyDef> properties_;
  std::unordered_map<std::string, std::size_t> class_index_;
  std::unordered_map<std::string, std::size_t> property_index_;
};

/// The curated microscopy ontology: 18 upper-level classes in five
/// categories, 11 translated from OME and 7 extensions.
OntologyRegistry build_core_ontology(std::string_view ns = kDefaultNamespace);

/// Throws Error(NotFound).
const OntologyClass& lookup_class(const OntologyRegistry& r, const rdf::Iri& iri);

/// IRIs of the schema-annotation vocabulary.
namespace meta {
rdf::Iri category();
rdf::Iri origin();
rdf::Iri min_count();
rdf::Iri max_count();
rdf::Iri min_inclusive();
rdf::Iri min_exclusive();
rdf::Iri max_inclusive();
rdf::Iri max_exclusive();
rdf::Iri unit();
rdf::Iri domain_includes();
rdf::Iri range_includes();
rdf::Iri required_when_property();
rdf::Iri required_when_class();
}  // namespace meta

/// RDFS/OWL rendering of a registry: ontology header, one owl:Class
/// declaration plus label, category and origin annotations per class,
/// subclass links, and per property its kind, label, domain, range,
/// cardinality and value bounds.
rdf::Graph registry_to_graph(const OntologyRegistry& r);

/// Inverse of registry_to_graph for graphs it produced.
OntologyRegistry registry_from_graph(const rdf::Graph& g, const rdf::Iri& ns);

}  // namespace omerdf::ontology

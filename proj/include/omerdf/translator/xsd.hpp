#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "omerdf/ontology/ontology.hpp"

namespace omerdf::translator {

struct XsdElement {
  std::string name;
  /// Local name of the declared type; for `ref=` elements, the type of the
  /// referenced top-level element.
  std::string type_ref;
  std::size_t min_occurs = 1;
  std::optional<std::size_t> max_occurs = 1;  // nullopt = unbounded

  friend bool operator==(const XsdElement&, const XsdElement&) = default;
};

struct XsdAttribute {
  std::string name;
  std::string datatype_ref;
  bool required = false;

  friend bool operator==(const XsdAttribute&, const XsdAttribute&) = default;
};

/// A named complexType, or a top-level element with an anonymous one.
/// Members inherited through a single complexContent/extension step are
/// copied in after the base's own members are known.
struct XsdComplexType {
  std::string name;
  std::optional<std::string> base;
  std::vector<XsdElement> elements;
  std::vector<XsdAttribute> attributes;

  const XsdElement* find_element(std::string_view name) const;
  const XsdAttribute* find_attribute(std::string_view name) const;

  friend bool operator==(const XsdComplexType&, const XsdComplexType&) = default;
};

/// A construct the subset does not cover. `path` is "Type/construct".
struct XsdWarning {
  std::string path;
  std::string reason;

  friend bool operator==(const XsdWarning&, const XsdWarning&) = default;
};

struct XsdSubsetModel {
  /// In declaration order; names are unique.
  std::vector<XsdComplexType> complex_types;
  /// Named simpleType -> local name of its restriction base.
  std::map<std::string, std::string> simple_types;
  std::vector<XsdWarning> warnings;

  const XsdComplexType* find_type(std::string_view name) const;
};

/// Throws Error(MalformedXml) for ill-formed input or a root other than
/// xs:schema, Error(EmptySchema) when no complexType is declared.
XsdSubsetModel parse_xsd_subset(std::string_view text);

/// One warning per line: path TAB reason.
std::string format_warnings(const std::vector<XsdWarning>& warnings);

enum class ConceptKind { Class, ObjectProperty, DatatypeProperty };

std::string_view to_string(ConceptKind k);

struct CandidateConcept {
  ConceptKind kind = ConceptKind::Class;
  std::string name;
  /// "Type", "Type/Element" or "Type/@Attribute".
  std::string source_path;
  std::optional<std::string> domain_name;
  /// Class name for object properties, XSD builtin local name for datatype
  /// properties.
  std::optional<std::string> range_name;
  std::size_t min_count = 0;
  std::optional<std::size_t> max_count;

  friend bool operator==(const CandidateConcept&, const CandidateConcept&) = default;
};

/// Element "Pixels" -> "hasPixels"; attribute "AcquisitionDate" ->
/// "acquisitionDate"; all-caps names are lowered entirely ("ID" -> "id").
std::string object_property_name(std::string_view element);
std::string datatype_property_name(std::string_view name);

/// Sorted by (kind, name), ties broken by domain then source path.
std::vector<CandidateConcept> extract_concepts(const XsdSubsetModel& m);

/// True when `path` names a type, element or attribute in the model.
bool source_path_exists(const XsdSubsetModel& m, std::string_view path);

/// Mints every concept under `ns`. Repeated names collapse into one entry;
/// further domains and ranges of a repeated property go to extra_domains /
/// extra_ranges. Throws Error(NameCollision) when a name is used both as a
/// class and a property, or as an object and a datatype property.
ontology::OntologyRegistry concepts_to_registry_fragment(
    const std::vector<CandidateConcept>& cs, const rdf::Iri& ns);

}  // namespace omerdf::translator

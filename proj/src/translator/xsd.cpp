#include "omerdf/translator/xsd.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <tuple>
#include <unordered_map>

#include "omerdf/error.hpp"
#include "omerdf/xml/dom.hpp"

namespace omerdf::translator {

namespace {

using xml::Element;

std::string local_part(std::string_view qname) {
  const auto colon = qname.rfind(':');
  return std::string(colon == std::string_view::npos ? qname : qname.substr(colon + 1));
}

std::optional<std::size_t> parse_count(std::string_view s) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

class SchemaReader {
 public:
  explicit SchemaReader(const Element& root) : root_(root) {}

  XsdSubsetModel read() {
    collect_globals();
    for (const auto& child : root_.children) {
      const auto kind = child.local_name();
      if (kind == "complexType") {
        const auto name = child.attribute("name");
        if (!name) {
          warn("schema/complexType", "top-level complexType without a name");
          continue;
        }
        add_type(std::string(*name), child);
      } else if (kind == "element") {
        const auto name = child.attribute("name");
        if (!name) continue;  // reported in collect_globals
        if (const auto* ct = child.first_child("complexType")) {
          add_type(std::string(*name), *ct);
        }
      }
    }
    flatten_extensions();
    if (model_.complex_types.empty()) {
      throw Error(ErrorCode::EmptySchema, "schema declares no complexType");
    }
    return std::move(model_);
  }

 private:
  void warn(std::string path, std::string reason) {
    model_.warnings.push_back({std::move(path), std::move(reason)});
  }

  // Top-level simple types and element declarations, needed to resolve
  // type= and ref= before any complexType body is read.
  void collect_globals() {
    for (const auto& child : root_.children) {
      const auto kind = child.local_name();
      if (kind == "simpleType") {
        const auto name = child.attribute("name");
        if (!name) {
          warn("schema/simpleType", "top-level simpleType without a name");
          continue;
        }
        const auto* restriction = child.first_child("restriction");
        const auto base = restriction ? restriction->attribute("base") : std::nullopt;
        if (!base) {
          warn(std::string(*name), "simpleType without restriction base; treated as string");
          model_.simple_types[std::string(*name)] = "string";
        } else {
          model_.simple_types[std::string(*name)] = local_part(*base);
        }
      } else if (kind == "element") {
        const auto name = child.attribute("name");
        if (!name) {
          warn("schema/element", "top-level element without a name");
          continue;
        }
        if (child.first_child("complexType")) {
          global_elements_[std::string(*name)] = std::string(*name);
        } else if (const auto type = child.attribute("type")) {
          global_elements_[std::string(*name)] = local_part(*type);
        } else if (child.first_child("simpleType")) {
          warn(std::string(*name), "anonymous simpleType; treated as string");
          global_elements_[std::string(*name)] = "string";
        } else {
          global_elements_[std::string(*name)] = "anyType";
        }
      } else if (kind == "complexType" || kind == "annotation") {
        // complexTypes are read in the main pass
      } else {
        warn("schema/" + std::string(kind), "unsupported top-level construct");
      }
    }
  }

  void add_type(std::string name, const Element& body) {
    if (seen_types_.count(name)) {
      warn(name, "duplicate complexType name; later declaration skipped");
      return;
    }
    seen_types_.insert(name);
    XsdComplexType t;
    t.name = std::move(name);
    read_type_body(t, body);
    model_.complex_types.push_back(std::move(t));
  }

  void read_type_body(XsdComplexType& t, const Element& body) {
    for (const auto& child : body.children) {
      const auto kind = child.local_name();
      if (kind == "sequence" || kind == "all") {
        read_particles(t, child);
      } else if (kind == "attribute") {
        read_attribute(t, child);
      } else if (kind == "complexContent") {
        read_complex_content(t, child);
      } else if (kind == "annotation") {
        continue;
      } else {
        warn(t.name + "/" + std::string(kind), "unsupported construct skipped");
      }
    }
  }

  void read_complex_content(XsdComplexType& t, const Element& content) {
    for (const auto& child : content.children) {
      const auto kind = child.local_name();
      if (kind == "extension") {
        const auto base = child.attribute("base");
        if (!base) {
          warn(t.name + "/extension", "extension without base");
          continue;
        }
        t.base = local_part(*base);
        read_type_body(t, child);
      } else if (kind != "annotation") {
        warn(t.name + "/complexContent/" + std::string(kind),
             "unsupported construct skipped");
      }
    }
  }

  void read_particles(XsdComplexType& t, const Element& group) {
    for (const auto& child : group.children) {
      const auto kind = child.local_name();
      if (kind == "element") {
        read_element(t, child);
      } else if (kind == "sequence") {
        read_particles(t, child);
      } else if (kind != "annotation") {
        warn(t.name + "/" + std::string(kind), "unsupported construct skipped");
      }
    }
  }

  void read_element(XsdComplexType& t, const Element& e) {
    XsdElement out;
    if (const auto ref = e.attribute("ref")) {
      out.name = local_part(*ref);
      const auto it = global_elements_.find(out.name);
      if (it == global_elements_.end()) {
        warn(t.name + "/" + out.name, "reference to undeclared element skipped");
        return;
      }
      out.type_ref = it->second;
    } else if (const auto name = e.attribute("name")) {
      out.name = std::string(*name);
      if (const auto type = e.attribute("type")) {
        out.type_ref = local_part(*type);
      } else if (e.first_child("complexType") || e.first_child("simpleType")) {
        warn(t.name + "/" + out.name, "anonymous nested type skipped");
        return;
      } else {
        out.type_ref = "anyType";
      }
    } else {
      warn(t.name + "/element", "element without name or ref skipped");
      return;
    }
    if (const auto min = e.attribute("minOccurs")) {
      const auto v = parse_count(*min);
      if (!v) {
        warn(t.name + "/" + out.name, "invalid minOccurs '" + std::string(*min) + "'");
        return;
      }
      out.min_occurs = *v;
    }
    if (const auto max = e.attribute("maxOccurs")) {
      if (*max == "unbounded") {
        out.max_occurs.reset();
      } else {
        const auto v = parse_count(*max);
        if (!v) {
          warn(t.name + "/" + out.name, "invalid maxOccurs '" + std::string(*max) + "'");
          return;
        }
        out.max_occurs = *v;
      }
    }
    if (t.find_element(out.name) || t.find_attribute(out.name)) {
      warn(t.name + "/" + out.name, "duplicate member name skipped");
      return;
    }
    t.elements.push_back(std::move(out));
  }

  void read_attribute(XsdComplexType& t, const Element& a) {
    const auto name = a.attribute("name");
    if (!name) {
      warn(t.name + "/attribute", "attribute without name skipped");
      return;
    }
    XsdAttribute out;
    out.name = std::string(*name);
    const auto type = a.attribute("type");
    out.datatype_ref = type ? local_part(*type) : "string";
    out.required = a.attribute("use") == std::optional<std::string_view>("required");
    if (t.find_element(out.name) || t.find_attribute(out.name)) {
      warn(t.name + "/@" + out.name, "duplicate member name skipped");
      return;
    }
    t.attributes.push_back(std::move(out));
  }

  // Copies the base's members into each derived type. Only one extension
  // step is followed; longer chains keep the derived type's own members.
  void flatten_extensions() {
    std::unordered_map<std::string, XsdComplexType> own;
    for (const auto& t : model_.complex_types) own.emplace(t.name, t);
    for (auto& t : model_.complex_types) {
      if (!t.base) continue;
      const auto it = own.find(*t.base);
      if (it == own.end()) {
        warn(t.name + "/extension", "base type '" + *t.base + "' is not a complexType");
        continue;
      }
      const auto& base = it->second;
      if (base.base) {
        warn(t.name + "/extension", "extension chain deeper than one level (" +
                                        t.name + " -> " + base.name + " -> " +
                                        *base.base + ")");
        continue;
      }
      XsdComplexType merged;
      merged.name = t.name;
      merged.base = t.base;
      for (const auto& e : base.elements) merged.elements.push_back(e);
      for (const auto& a : base.attributes) merged.attributes.push_back(a);
      for (const auto& e : t.elements) {
        if (!merged.find_element(e.name) && !merged.find_attribute(e.name)) {
          merged.elements.push_back(e);
        }
      }
      for (const auto& a : t.attributes) {
        if (!merged.find_element(a.name) && !merged.find_attribute(a.name)) {
          merged.attributes.push_back(a);
        }
      }
      t = std::move(merged);
    }
  }

  const Element& root_;
  XsdSubsetModel model_;
  std::unordered_map<std::string, std::string> global_elements_;
  std::set<std::string> seen_types_;
};

std::string resolve_builtin(const XsdSubsetModel& m, std::string name) {
  for (int hops = 0; hops < 32; ++hops) {
    const auto it = m.simple_types.find(name);
    if (it == m.simple_types.end()) return name;
    name = it->second;
  }
  return "string";  // cyclic restriction chain
}

auto concept_key(const CandidateConcept& c) {
  return std::tie(c.kind, c.name, c.domain_name, c.source_path);
}

}  // namespace

const XsdElement* XsdComplexType::find_element(std::string_view n) const {
  for (const auto& e : elements) {
    if (e.name == n) return &e;
  }
  return nullptr;
}

const XsdAttribute* XsdComplexType::find_attribute(std::string_view n) const {
  for (const auto& a : attributes) {
    if (a.name == n) return &a;
  }
  return nullptr;
}

const XsdComplexType* XsdSubsetModel::find_type(std::string_view n) const {
  for (const auto& t : complex_types) {
    if (t.name == n) return &t;
  }
  return nullptr;
}

XsdSubsetModel parse_xsd_subset(std::string_view text) {
  const Element root = xml::parse_document(text);
  if (root.local_name() != "schema") {
    throw Error(ErrorCode::MalformedXml,
                "root element is '" + root.name + "', expected xs:schema");
  }
  return SchemaReader(root).read();
}

std::string format_warnings(const std::vector<XsdWarning>& warnings) {
  std::string out;
  for (const auto& w : warnings) {
    out += w.path;
    out += '\t';
    out += w.reason;
    out += '\n';
  }
  return out;
}

std::string_view to_string(ConceptKind k) {
  switch (k) {
    case ConceptKind::Class: return "class";
    case ConceptKind::ObjectProperty: return "objectProperty";
    case ConceptKind::DatatypeProperty: return "datatypeProperty";
  }
  return "";
}

std::string object_property_name(std::string_view element) {
  return "has" + std::string(element);
}

std::string datatype_property_name(std::string_view name) {
  std::string out(name);
  const bool all_caps = std::none_of(out.begin(), out.end(),
                                     [](char c) { return c >= 'a' && c <= 'z'; });
  if (all_caps) {
    std::transform(out.begin(), out.end(), out.begin(), [](char c) {
      return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
    });
  } else if (!out.empty() && out[0] >= 'A' && out[0] <= 'Z') {
    out[0] = static_cast<char>(out[0] - 'A' + 'a');
  }
  return out;
}

std::vector<CandidateConcept> extract_concepts(const XsdSubsetModel& m) {
  std::vector<CandidateConcept> out;
  for (const auto& t : m.complex_types) {
    out.push_back({ConceptKind::Class, t.name, t.name, std::nullopt, std::nullopt, 0,
                   std::nullopt});
    for (const auto& e : t.elements) {
      CandidateConcept c;
      c.source_path = t.name + "/" + e.name;
      c.domain_name = t.name;
      c.min_count = e.min_occurs;
      c.max_count = e.max_occurs;
      if (m.find_type(e.type_ref)) {
        c.kind = ConceptKind::ObjectProperty;
        c.name = object_property_name(e.name);
        c.range_name = e.type_ref;
      } else {
        c.kind = ConceptKind::DatatypeProperty;
        c.name = datatype_property_name(e.name);
        c.range_name = resolve_builtin(m, e.type_ref);
      }
      out.push_back(std::move(c));
    }
    for (const auto& a : t.attributes) {
      out.push_back({ConceptKind::DatatypeProperty, datatype_property_name(a.name),
                     t.name + "/@" + a.name, t.name, resolve_builtin(m, a.datatype_ref),
                     a.required ? 1u : 0u, 1});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return concept_key(a) < concept_key(b);
  });
  return out;
}

bool source_path_exists(const XsdSubsetModel& m, std::string_view path) {
  const auto slash = path.find('/');
  const auto* t = m.find_type(path.substr(0, slash));
  if (!t) return false;
  if (slash == std::string_view::npos) return true;
  const auto member = path.substr(slash + 1);
  if (member.starts_with('@')) return t->find_attribute(member.substr(1)) != nullptr;
  return t->find_element(member) != nullptr;
}

ontology::OntologyRegistry concepts_to_registry_fragment(
    const std::vector<CandidateConcept>& cs, const rdf::Iri& ns) {
  std::map<std::string, ConceptKind> kinds;
  for (const auto& c : cs) {
    const auto [it, inserted] = kinds.emplace(c.name, c.kind);
    if (!inserted && it->second != c.kind) {
      throw Error(ErrorCode::NameCollision,
                  "name '" + c.name + "' requested as both " +
                      std::string(to_string(it->second)) + " and " +
                      std::string(to_string(c.kind)));
    }
  }

  ontology::OntologyRegistry reg(ns);
  std::vector<ontology::PropertyDef> props;
  std::map<std::string, std::size_t> prop_index;
  std::set<std::string> class_names;

  for (const auto& c : cs) {
    if (c.kind == ConceptKind::Class) {
      if (!class_names.insert(c.name).second) continue;
      reg.add_class({.iri = reg.term(c.name),
                     .label = c.name,
                     .origin = ontology::Origin::Translated});
      continue;
    }
    if (!c.domain_name || c.domain_name->empty()) {
      throw Error(ErrorCode::InvalidRegistry, "property '" + c.name + "' has no domain");
    }
    const bool object = c.kind == ConceptKind::ObjectProperty;
    if (object && !c.range_name) {
      throw Error(ErrorCode::InvalidRegistry,
                  "object property '" + c.name + "' has no range");
    }
    const auto domain = reg.term(*c.domain_name);
    const auto range = object ? reg.term(*c.range_name)
                              : rdf::vocab::iri(std::string(rdf::vocab::kXsd) +
                                                c.range_name.value_or("string"));

    const auto found = prop_index.find(c.name);
    if (found == prop_index.end()) {
      prop_index.emplace(c.name, props.size());
      props.push_back({.iri = reg.term(c.name),
                       .label = c.name,
                       .kind = object ? ontology::PropertyKind::Object
                                      : ontology::PropertyKind::Datatype,
                       .domain = domain,
                       .range = range,
                       .min_count = c.min_count,
                       .max_count = c.max_count});
      continue;
    }
    auto& p = props[found->second];
    if (p.domain != domain &&
        std::find(p.extra_domains.begin(), p.extra_domains.end(), domain) ==
            p.extra_domains.end()) {
      p.extra_domains.push_back(domain);
    }
    if (p.range != range &&
        std::find(p.extra_ranges.begin(), p.extra_ranges.end(), range) ==
            p.extra_ranges.end()) {
      p.extra_ranges.push_back(range);
    }
    p.min_count = std::min(p.min_count, c.min_count);
    if (!p.max_count || !c.max_count) {
      p.max_count.reset();
    } else {
      p.max_count = std::max(*p.max_count, *c.max_count);
    }
  }
  for (auto& p : props) reg.add_property(std::move(p));
  return reg;
}

}  // namespace omerdf::translator

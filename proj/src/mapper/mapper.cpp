#include "omerdf/mapper/mapper.hpp"

#include <algorithm>

namespace omerdf::mapper {

using rdf::Iri;
using rdf::Literal;
using rdf::Triple;
namespace vocab = rdf::vocab;

MintingPolicy MintingPolicy::make(std::string_view base) {
  if (!Iri::is_valid(base) || !(base.ends_with('/') || base.ends_with('#'))) {
    throw Error(ErrorCode::InvalidPolicy,
                "instance base '" + std::string(base) + "' must be an IRI ending in '/' or '#'");
  }
  return {Iri::make(base), true};
}

std::string percent_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size());
  for (const char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    const bool unreserved = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                            (c >= '0' && c <= '9') || c == '-' || c == '.' || c == '_' ||
                            c == '~';
    if (unreserved) {
      out += ch;
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

rdf::Iri mint_iri(const MintingPolicy& policy, const ontology::OntologyClass& cls,
                  const std::vector<std::string>& segments) {
  if (!policy.skolemize) {
    throw Error(ErrorCode::InvalidPolicy, "minting requires skolemization");
  }
  if (segments.empty()) throw Error(ErrorCode::EmptyLocalId, "no local id given");
  std::string label = cls.label;
  std::transform(label.begin(), label.end(), label.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  std::string out = policy.instance_base.value() + label;
  for (const auto& seg : segments) {
    if (seg.empty()) {
      throw Error(ErrorCode::EmptyLocalId, "empty local id for class " + cls.label);
    }
    out += '/';
    out += percent_encode(seg);
  }
  return Iri::make(out);
}

rdf::Iri mint_iri(const MintingPolicy& policy, const ontology::OntologyClass& cls,
                  std::string_view local_id) {
  return mint_iri(policy, cls, std::vector<std::string>{std::string(local_id)});
}

namespace {

class RecordBuilder {
 public:
  RecordBuilder(const ontology::OntologyRegistry& reg, const MintingPolicy& policy)
      : reg_(reg), policy_(policy), type_(Iri::make(vocab::kRdfType)) {
    graph_.set_prefix("rdf", Iri::make(vocab::kRdf));
    graph_.set_prefix("xsd", Iri::make(vocab::kXsd));
    graph_.set_prefix("onto", reg.ontology_namespace());
  }

  const ontology::OntologyClass& cls(std::string_view label) const {
    const auto* c = reg_.find_class(reg_.term(label));
    if (!c) {
      throw Error(ErrorCode::UnknownClassInRegistry,
                  "registry has no class " + std::string(label));
    }
    return *c;
  }

  Iri prop(std::string_view label) const {
    const auto iri = reg_.term(label);
    if (!reg_.find_property(iri)) {
      throw Error(ErrorCode::UnknownClassInRegistry,
                  "registry has no property " + std::string(label));
    }
    return iri;
  }

  /// Mints the node and asserts its type.
  template <class Id>
  Iri node(std::string_view class_label, const Id& id) {
    const auto& c = cls(class_label);
    auto iri = mint_iri(policy_, c, id);
    graph_.insert(Triple(iri, type_, c.iri));
    return iri;
  }

  void link(const Iri& s, std::string_view p, const Iri& o) {
    graph_.insert(Triple(s, prop(p), o));
  }

  void text(const Iri& s, std::string_view p, const std::string& v) {
    graph_.insert(Triple(s, prop(p), Literal::plain(v)));
  }

  void typed(const Iri& s, std::string_view p, const std::string& v, std::string_view dt) {
    graph_.insert(Triple(s, prop(p), Literal::typed(v, Iri::make(dt))));
  }

  rdf::Graph take() { return std::move(graph_); }

 private:
  const ontology::OntologyRegistry& reg_;
  const MintingPolicy& policy_;
  Iri type_;
  rdf::Graph graph_;
};

}  // namespace

MappedRecord map_pair(const ome::OmeImage& img, const std::optional<ome::EmAnnotation>& ann,
                      const ontology::OntologyRegistry& registry, const MintingPolicy& policy,
                      const links::LinkRegistry& links, const ome::OmeDocument* doc) {
  RecordBuilder b(registry, policy);
  const auto image = b.node("Image", img.id);
  b.text(image, "name", img.name);
  const auto& px = img.pixels;
  const std::pair<const char*, std::uint64_t> sizes[] = {
      {"sizeX", px.size_x}, {"sizeY", px.size_y}, {"sizeZ", px.size_z},
      {"sizeC", px.size_c}, {"sizeT", px.size_t}};
  for (const auto& [label, v] : sizes) {
    b.typed(image, label, std::to_string(v), vocab::kXsdPositiveInteger);
  }
  if (px.physical_size_x) {
    b.typed(image, "physicalSizeX", px.physical_size_x->lexical, vocab::kXsdDecimal);
  }
  if (px.physical_size_y) {
    b.typed(image, "physicalSizeY", px.physical_size_y->lexical, vocab::kXsdDecimal);
  }
  if (img.acquisition_date) {
    b.typed(image, "acquisitionDate", *img.acquisition_date, vocab::kXsdDateTime);
  }

  if (doc && img.instrument_ref) {
    if (const auto* ins = doc->find_instrument(*img.instrument_ref)) {
      const bool em = ins->kind == ome::InstrumentKind::ElectronMicroscope;
      const auto node = b.node(em ? "ElectronMicroscope" : "Instrument", ins->id);
      b.link(image, "acquiredWith", node);
      if (ins->model) b.text(node, "instrumentModel", *ins->model);
    }
  }
  if (doc && img.experimenter_ref) {
    if (const auto* ex = doc->find_experimenter(*img.experimenter_ref)) {
      const auto node = b.node("Experimenter", ex->id);
      b.link(image, "acquiredBy", node);
      b.text(node, "experimenterName", ex->name);
      if (ex->email) b.text(node, "email", *ex->email);
    }
  }

  std::vector<Iri> external;
  if (ann) {
    const auto sample = b.node("BioSample", ann->sample_id);
    b.link(image, "depicts", sample);
    if (ann->container_id) {
      b.link(sample, "containedIn", b.node("SampleContainer", *ann->container_id));
    }
    if (ann->strain_id) {
      std::optional<Iri> strain;
      try {
        strain = links.resolve(*ann->strain_id);
      } catch (const Error& e) {
        throw Error(ErrorCode::UnresolvableStrain,
                    "strain '" + *ann->strain_id + "': " + e.what());
      }
      b.link(sample, "derivedFrom", *strain);
      external.push_back(*strain);
    }
    if (ann->staining_method) {
      const auto prep = b.node("SamplePreparation",
                               std::vector<std::string>{ann->sample_id, *ann->staining_method});
      b.link(sample, "preparedBy", prep);
      b.text(prep, "stainingMethod", *ann->staining_method);
    }
    if (ann->acceleration_voltage_kv || ann->electron_gun_type || ann->electron_wavelength_pm) {
      const auto cond = b.node("ImagingCondition", img.id);
      b.link(image, "hasImagingCondition", cond);
      if (ann->acceleration_voltage_kv) {
        b.typed(cond, "accelerationVoltage", ann->acceleration_voltage_kv->lexical,
                vocab::kXsdDecimal);
      }
      if (ann->electron_gun_type) b.text(cond, "electronGunType", *ann->electron_gun_type);
      if (ann->electron_wavelength_pm) {
        b.typed(cond, "electronWavelength", ann->electron_wavelength_pm->lexical,
                vocab::kXsdDecimal);
      }
    }
    for (std::size_t i = 0; i < ann->phenotype_observations.size(); ++i) {
      const auto obs = b.node("PhenotypeData",
                              std::vector<std::string>{img.id, std::to_string(i + 1)});
      b.link(image, "hasObservation", obs);
      b.text(obs, "phenotypeDescription", ann->phenotype_observations[i]);
    }
  }

  MappedRecord rec{image, b.take(), 0, std::move(external)};
  rec.triple_count = rec.graph.size();
  std::sort(rec.external_links.begin(), rec.external_links.end());
  return rec;
}

MapAllResult map_all(const std::vector<ome::ImageRecord>& pairs,
                     const ontology::OntologyRegistry& registry, const MintingPolicy& policy,
                     const links::LinkRegistry& links, const ome::OmeDocument* doc,
                     const MapOptions& opts) {
  MapAllResult out;
  for (const auto& p : pairs) {
    try {
      auto rec = map_pair(p.image, p.annotation, registry, policy, links, doc);
      for (const auto& [name, ns] : rec.graph.prefixes()) {
        if (!out.graph.prefixes().count(name)) out.graph.set_prefix(name, ns);
      }
      for (const auto& t : rec.graph.triples()) out.graph.insert(t);
      out.records.push_back(std::move(rec));
    } catch (const Error& e) {
      if (!opts.skip_errors) {
        throw Error(e.code(), "image '" + p.image.id + "': " + e.what());
      }
      out.skipped.push_back({p.image.id, e.code(), e.what()});
    }
  }
  return out;
}

}  // namespace omerdf::mapper

#include "omerdf/ontology/ontology.hpp"

#include <charconv>
#include <map>

#include "omerdf/error.hpp"

namespace omerdf::ontology {

using rdf::Iri;
using rdf::Literal;
using rdf::Term;
using rdf::Triple;
namespace vocab = rdf::vocab;

std::string_view to_string(Category c) {
  switch (c) {
    case Category::Image: return "IMAGE";
    case Category::Experimenter: return "EXPERIMENTER";
    case Category::Instrument: return "INSTRUMENT";
    case Category::BioSample: return "BIOSAMPLE";
    case Category::Screening: return "SCREENING";
  }
  return "";
}

std::optional<Category> parse_category(std::string_view s) {
  for (auto c : {Category::Image, Category::Experimenter, Category::Instrument,
                 Category::BioSample, Category::Screening}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

std::string_view to_string(Origin o) {
  return o == Origin::Translated ? "translated" : "extended";
}

std::optional<Origin> parse_origin(std::string_view s) {
  if (s == "translated") return Origin::Translated;
  if (s == "extended") return Origin::Extended;
  return std::nullopt;
}

bool ValueRange::contains(double v) const {
  if (min && (min_inclusive ? v < *min : v <= *min)) return false;
  if (max && (max_inclusive ? v > *max : v >= *max)) return false;
  return true;
}

namespace {

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, end);
  // to_chars may choose exponent notation, which xsd:decimal does not allow.
  if (s.find_first_of("eE") != std::string::npos) {
    auto [end2, ec2] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed);
    s.assign(buf, end2);
  }
  return s;
}

}  // namespace

std::string ValueRange::describe() const {
  std::string out(min_inclusive && min ? "[" : "(");
  out += min ? format_number(*min) : "-inf";
  out += ", ";
  out += max ? format_number(*max) : "inf";
  out += max_inclusive && max ? "]" : ")";
  return out;
}

OntologyRegistry::OntologyRegistry(Iri ns, std::string title)
    : ns_(std::move(ns)), title_(std::move(title)) {}

Iri OntologyRegistry::term(std::string_view local) const {
  return Iri::make(ns_.value() + std::string(local));
}

void OntologyRegistry::add_class(OntologyClass c) {
  const auto key = c.iri.value();
  if (class_index_.contains(key) || property_index_.contains(key)) {
    throw Error(ErrorCode::InvalidRegistry, "duplicate ontology IRI <" + key + ">");
  }
  class_index_.emplace(key, classes_.size());
  classes_.push_back(std::move(c));
}

void OntologyRegistry::add_property(PropertyDef p) {
  const auto key = p.iri.value();
  if (class_index_.contains(key) || property_index_.contains(key)) {
    throw Error(ErrorCode::InvalidRegistry, "duplicate ontology IRI <" + key + ">");
  }
  property_index_.emplace(key, properties_.size());
  properties_.push_back(std::move(p));
}

const OntologyClass* OntologyRegistry::find_class(const Iri& iri) const {
  auto it = class_index_.find(iri.value());
  return it == class_index_.end() ? nullptr : &classes_[it->second];
}

const PropertyDef* OntologyRegistry::find_property(const Iri& iri) const {
  auto it = property_index_.find(iri.value());
  return it == property_index_.end() ? nullptr : &properties_[it->second];
}

const OntologyClass* OntologyRegistry::find_class_by_label(std::string_view label) const {
  for (const auto& c : classes_) {
    if (c.label == label) return &c;
  }
  return nullptr;
}

std::vector<const OntologyClass*> OntologyRegistry::upper_level_classes() const {
  std::vector<const OntologyClass*> out;
  for (const auto& c : classes_) {
    if (!c.superclass) out.push_back(&c);
  }
  return out;
}

void OntologyRegistry::check() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidRegistry, msg); };
  auto in_namespace = [&](const Iri& iri) {
    return iri.value().size() > ns_.value().size() && iri.value().starts_with(ns_.value());
  };
  for (const auto& c : classes_) {
    if (c.label.empty()) fail("class <" + c.iri.value() + "> has an empty label");
    if (!in_namespace(c.iri)) fail("class <" + c.iri.value() + "> outside namespace");
    if (c.superclass && !find_class(*c.superclass)) {
      fail("superclass <" + c.superclass->value() + "> is not registered");
    }
  }
  for (const auto& p : properties_) {
    if (p.label.empty()) fail("property <" + p.iri.value() + "> has an empty label");
    if (!in_namespace(p.iri)) fail("property <" + p.iri.value() + "> outside namespace");
    if (!find_class(p.domain)) fail("domain <" + p.domain.value() + "> is not registered");
    for (const auto& d : p.extra_domains) {
      if (!find_class(d)) fail("domain <" + d.value() + "> is not registered");
    }
    if (p.max_count && (*p.max_count < 1 || p.min_count > *p.max_count)) {
      fail("property <" + p.iri.value() + "> has inconsistent cardinality");
    }
  }
}

const OntologyClass& lookup_class(const OntologyRegistry& r, const Iri& iri) {
  if (const auto* c = r.find_class(iri)) return *c;
  throw Error(ErrorCode::NotFound, "no ontology class <" + iri.value() + ">");
}

// ---------------------------------------------------------------------------
// Core roster

OntologyRegistry build_core_ontology(std::string_view ns) {
  OntologyRegistry r(Iri::make(ns), "OME-RDF microscopy ontology");
  auto cls = [&](std::string_view label, Category cat, Origin origin) {
    r.add_class({r.term(label), std::string(label), cat, origin, std::nullopt});
  };
  using C = Category;
  cls("Image", C::Image, Origin::Translated);
  cls("ROI", C::Image, Origin::Translated);
  cls("Experimenter", C::Experimenter, Origin::Translated);
  cls("ExperimenterGroup", C::Experimenter, Origin::Translated);
  cls("Instrument", C::Instrument, Origin::Translated);
  cls("Detector", C::Instrument, Origin::Translated);
  cls("Objective", C::Instrument, Origin::Translated);
  cls("LightSource", C::Instrument, Origin::Translated);
  cls("Filter", C::Instrument, Origin::Translated);
  cls("Screen", C::Screening, Origin::Translated);
  cls("Plate", C::Screening, Origin::Translated);
  cls("BioSample", C::BioSample, Origin::Extended);
  cls("Bioresource", C::BioSample, Origin::Extended);
  cls("SampleContainer", C::BioSample, Origin::Extended);
  cls("SamplePreparation", C::BioSample, Origin::Extended);
  cls("PhenotypeData", C::BioSample, Origin::Extended);
  cls("ImagingCondition", C::Instrument, Origin::Extended);
  cls("ElectronMicroscope", C::Instrument, Origin::Extended);

  auto object = [&](std::string_view label, std::string_view domain, std::string_view range,
                    std::optional<std::size_t> max) {
    PropertyDef p{r.term(label), std::string(label), PropertyKind::Object,
                  r.term(domain), r.term(range)};
    p.max_count = max;
    r.add_property(std::move(p));
  };
  auto data = [&](std::string_view label, std::string_view domain, std::string_view datatype,
                  std::size_t min, std::optional<std::size_t> max) -> PropertyDef {
    PropertyDef p{r.term(label), std::string(label), PropertyKind::Datatype,
                  r.term(domain), Iri::make(datatype)};
    p.min_count = min;
    p.max_count = max;
    return p;
  };
  constexpr std::optional<std::size_t> kUnbounded;

  object("acquiredBy", "Image", "Experimenter", 1);
  {
    PropertyDef p{r.term("acquiredWith"), "acquiredWith", PropertyKind::Object,
                  r.term("Image"), r.term("Instrument")};
    p.extra_ranges = {r.term("ElectronMicroscope")};
    p.max_count = 1;
    r.add_property(std::move(p));
  }
  object("hasROI", "Image", "ROI", kUnbounded);
  object("depicts", "Image", "BioSample", kUnbounded);
  {
    // Exactly one imaging condition for images taken with an electron
    // microscope; optional otherwise.
    PropertyDef p{r.term("hasImagingCondition"), "hasImagingCondition", PropertyKind::Object,
                  r.term("Image"), r.term("ImagingCondition")};
    p.min_count = 1;
    p.max_count = 1;
    p.required_when = RequiredWhen{r.term("acquiredWith"), r.term("ElectronMicroscope")};
    r.add_property(std::move(p));
  }
  object("hasObservation", "Image", "PhenotypeData", kUnbounded);
  object("memberOf", "Experimenter", "ExperimenterGroup", kUnbounded);
  for (auto [label, range] : {std::pair{"hasDetector", "Detector"},
                              std::pair{"hasObjective", "Objective"},
                              std::pair{"hasLightSource", "LightSource"},
                              std::pair{"hasFilter", "Filter"}}) {
    PropertyDef p{r.term(label), label, PropertyKind::Object, r.term("Instrument"),
                  r.term(range)};
    p.extra_domains = {r.term("ElectronMicroscope")};
    r.add_property(std::move(p));
  }
  object("containedIn", "BioSample", "SampleContainer", 1);
  // The object is normally an IRI in a partner bioresource database.
  object("derivedFrom", "BioSample", "Bioresource", 1);
  object("preparedBy", "BioSample", "SamplePreparation", kUnbounded);
  object("hasPlate", "Screen", "Plate", kUnbounded);
  object("containsImage", "Plate", "Image", kUnbounded);

  r.add_property(data("name", "Image", vocab::kXsdString, 0, 1));
  r.add_property(data("acquisitionDate", "Image", vocab::kXsdDateTime, 0, 1));
  for (auto label : {"sizeX", "sizeY", "sizeZ", "sizeC", "sizeT"}) {
    auto p = data(label, "Image", vocab::kXsdPositiveInteger, 1, 1);
    p.value_range = ValueRange{1.0, true, std::nullopt, true};
    r.add_property(std::move(p));
  }
  for (auto label : {"physicalSizeX", "physicalSizeY"}) {
    auto p = data(label, "Image", vocab::kXsdDecimal, 0, 1);
    p.value_range = ValueRange{0.0, false, std::nullopt, true};
    p.unit = "micrometre";
    r.add_property(std::move(p));
  }
  r.add_property(data("experimenterName", "Experimenter", vocab::kXsdString, 0, 1));
  r.add_property(data("email", "Experimenter", vocab::kXsdString, 0, 1));
  {
    auto p = data("instrumentModel", "Instrument", vocab::kXsdString, 0, 1);
    p.extra_domains = {r.term("ElectronMicroscope")};
    r.add_property(std::move(p));
  }
  {
    auto p = data("accelerationVoltage", "ImagingCondition", vocab::kXsdDecimal, 0, 1);
    p.value_range = ValueRange{0.0, false, 1000.0, true};
    p.unit = "kilovolt";
    r.add_property(std::move(p));
  }
  r.add_property(data("electronGunType", "ImagingCondition", vocab::kXsdString, 0, 1));
  {
    // Electron wave: modelled as a wavelength on the imaging condition.
    auto p = data("electronWavelength", "ImagingCondition", vocab::kXsdDecimal, 0, 1);
    p.value_range = ValueRange{0.0, false, std::nullopt, true};
    p.unit = "picometre";
    r.add_property(std::move(p));
  }
  r.add_property(data("stainingMethod", "SamplePreparation", vocab::kXsdString, 1, 1));
  r.add_property(data("phenotypeDescription", "PhenotypeData", vocab::kXsdString, 1, 1));

  r.check();
  return r;
}

// ---------------------------------------------------------------------------
// Graph rendering

namespace meta {
namespace {
Iri m(std::string_view local) { return Iri::make(std::string(kMetaNamespace) + std::string(local)); }
}  // namespace
Iri category() { return m("category"); }
Iri origin() { return m("origin"); }
Iri min_count() { return m("minCount"); }
Iri max_count() { return m("maxCount"); }
Iri min_inclusive() { return m("minInclusive"); }
Iri min_exclusive() { return m("minExclusive"); }
Iri max_inclusive() { return m("maxInclusive"); }
Iri max_exclusive() { return m("maxExclusive"); }
Iri unit() { return m("unit"); }
Iri domain_includes() { return m("domainIncludes"); }
Iri range_includes() { return m("rangeIncludes"); }
Iri required_when_property() { return m("requiredWhenProperty"); }
Iri required_when_class() { return m("requiredWhenClass"); }
}  // namespace meta

namespace {

Iri rdfs(std::string_view local) { return Iri::make(std::string(vocab::kRdfs) + std::string(local)); }
Iri owl(std::string_view local) { return Iri::make(std::string(vocab::kOwl) + std::string(local)); }

Iri ontology_iri(const Iri& ns) {
  auto v = ns.value();
  if (v.ends_with('#') || v.ends_with('/')) v.pop_back();
  return Iri::make(v);
}

}  // namespace

rdf::Graph registry_to_graph(const OntologyRegistry& r) {
  rdf::Graph g;
  g.set_prefix("rdf", Iri::make(vocab::kRdf));
  g.set_prefix("rdfs", Iri::make(vocab::kRdfs));
  g.set_prefix("owl", Iri::make(vocab::kOwl));
  g.set_prefix("xsd", Iri::make(vocab::kXsd));
  g.set_prefix("omemeta", Iri::make(kMetaNamespace));
  g.set_prefix("onto", r.ontology_namespace());

  const auto type = Iri::make(vocab::kRdfType);
  const auto label = rdfs("label");
  const auto onto = ontology_iri(r.ontology_namespace());
  g.insert(Triple(onto, type, owl("Ontology")));
  if (!r.title().empty()) g.insert(Triple(onto, label, Literal::plain(r.title())));

  for (const auto& c : r.classes()) {
    g.insert(Triple(c.iri, type, owl("Class")));
    g.insert(Triple(c.iri, label, Literal::plain(c.label)));
    g.insert(Triple(c.iri, meta::origin(), Literal::plain(to_string(c.origin))));
    if (c.category) {
      g.insert(Triple(c.iri, meta::category(), Literal::plain(to_string(*c.category))));
    }
    if (c.superclass) g.insert(Triple(c.iri, rdfs("subClassOf"), *c.superclass));
  }

  const auto count = [](std::size_t n) {
    return Literal::typed(std::to_string(n), Iri::make(vocab::kXsdNonNegativeInteger));
  };
  const auto decimal = [](double v) {
    return Literal::typed(format_number(v), Iri::make(vocab::kXsdDecimal));
  };
  for (const auto& p : r.properties()) {
    g.insert(Triple(p.iri, type,
                    owl(p.kind == PropertyKind::Object ? "ObjectProperty" : "DatatypeProperty")));
    g.insert(Triple(p.iri, label, Literal::plain(p.label)));
    g.insert(Triple(p.iri, rdfs("domain"), p.domain));
    g.insert(Triple(p.iri, rdfs("range"), p.range));
    for (const auto& d : p.extra_domains) g.insert(Triple(p.iri, meta::domain_includes(), d));
    for (const auto& x : p.extra_ranges) g.insert(Triple(p.iri, meta::range_includes(), x));
    g.insert(Triple(p.iri, meta::min_count(), count(p.min_count)));
    if (p.max_count) g.insert(Triple(p.iri, meta::max_count(), count(*p.max_count)));
    if (p.value_range) {
      const auto& vr = *p.value_range;
      if (vr.min) {
        g.insert(Triple(p.iri, vr.min_inclusive ? meta::min_inclusive() : meta::min_exclusive(),
                        decimal(*vr.min)));
      }
      if (vr.max) {
        g.insert(Triple(p.iri, vr.max_inclusive ? meta::max_inclusive() : meta::max_exclusive(),
                        decimal(*vr.max)));
      }
    }
    if (p.unit) g.insert(Triple(p.iri, meta::unit(), Literal::plain(*p.unit)));
    if (p.required_when) {
      g.insert(Triple(p.iri, meta::required_when_property(), p.required_when->via));
      g.insert(Triple(p.iri, meta::required_when_class(), p.required_when->target_class));
    }
  }
  return g;
}

OntologyRegistry registry_from_graph(const rdf::Graph& g, const Iri& ns) {
  // subject -> predicate -> objects
  std::map<std::string, std::multimap<std::string, const Term*>> by_subject;
  std::vector<std::string> order;
  for (const auto& t : g.triples()) {
    const auto* s = std::get_if<Iri>(&t.subject());
    if (!s) continue;
    auto [it, inserted] = by_subject.try_emplace(s->value());
    if (inserted) order.push_back(s->value());
    it->second.emplace(t.predicate().value(), &t.object());
  }

  auto objects = [](const auto& preds, const Iri& p) {
    std::vector<const Term*> out;
    auto [lo, hi] = preds.equal_range(p.value());
    for (auto it = lo; it != hi; ++it) out.push_back(it->second);
    return out;
  };
  auto one_literal = [&](const auto& preds, const Iri& p) -> std::optional<std::string> {
    for (const auto* o : objects(preds, p)) {
      if (const auto* l = std::get_if<Literal>(o)) return l->lexical();
    }
    return std::nullopt;
  };
  auto one_iri = [&](const auto& preds, const Iri& p) -> std::optional<Iri> {
    for (const auto* o : objects(preds, p)) {
      if (const auto* i = std::get_if<Iri>(o)) return *i;
    }
    return std::nullopt;
  };
  auto all_iris = [&](const auto& preds, const Iri& p) {
    std::vector<Iri> out;
    for (const auto* o : objects(preds, p)) {
      if (const auto* i = std::get_if<Iri>(o)) out.push_back(*i);
    }
    return out;
  };
  auto has_type = [&](const auto& preds, const Iri& cls) {
    for (const auto* o : objects(preds, Iri::make(vocab::kRdfType))) {
      if (const auto* i = std::get_if<Iri>(o); i && *i == cls) return true;
    }
    return false;
  };
  auto invalid = [](const std::string& msg) { return Error(ErrorCode::InvalidRegistry, msg); };

  std::string title;
  for (const auto& s : order) {
    if (has_type(by_subject[s], owl("Ontology"))) {
      title = one_literal(by_subject[s], rdfs("label")).value_or("");
    }
  }
  OntologyRegistry r(ns, title);

  for (const auto& s : order) {
    const auto& preds = by_subject[s];
    if (!has_type(preds, owl("Class"))) continue;
    OntologyClass c{Iri::make(s), one_literal(preds, rdfs("label")).value_or(""),
                    std::nullopt, Origin::Translated, one_iri(preds, rdfs("subClassOf"))};
    if (auto cat = one_literal(preds, meta::category())) {
      c.category = parse_category(*cat);
      if (!c.category) throw invalid("unknown category '" + *cat + "'");
    }
    if (auto origin = one_literal(preds, meta::origin())) {
      auto o = parse_origin(*origin);
      if (!o) throw invalid("unknown origin '" + *origin + "'");
      c.origin = *o;
    }
    r.add_class(std::move(c));
  }

  for (const auto& s : order) {
    const auto& preds = by_subject[s];
    const bool is_object = has_type(preds, owl("ObjectProperty"));
    if (!is_object && !has_type(preds, owl("DatatypeProperty"))) continue;
    auto domain = one_iri(preds, rdfs("domain"));
    auto range = one_iri(preds, rdfs("range"));
    if (!domain || !range) throw invalid("property <" + s + "> lacks domain or range");
    PropertyDef p{Iri::make(s), one_literal(preds, rdfs("label")).value_or(""),
                  is_object ? PropertyKind::Object : PropertyKind::Datatype, *domain, *range};
    p.extra_domains = all_iris(preds, meta::domain_includes());
    p.extra_ranges = all_iris(preds, meta::range_includes());
    if (auto v = one_literal(preds, meta::min_count())) p.min_count = std::stoul(*v);
    if (auto v = one_literal(preds, meta::max_count())) p.max_count = std::stoul(*v);
    ValueRange vr;
    bool bounded = false;
    if (auto v = one_literal(preds, meta::min_inclusive())) vr.min = std::stod(*v), bounded = true;
    if (auto v = one_literal(preds, meta::min_exclusive())) {
      vr.min = std::stod(*v), vr.min_inclusive = false, bounded = true;
    }
    if (auto v = one_literal(preds, meta::max_inclusive())) vr.max = std::stod(*v), bounded = true;
    if (auto v = one_literal(preds, meta::max_exclusive())) {
      vr.max = std::stod(*v), vr.max_inclusive = false, bounded = true;
    }
    if (bounded) p.value_range = vr;
    p.unit = one_literal(preds, meta::unit());
    auto via = one_iri(preds, meta::required_when_property());
    auto target = one_iri(preds, meta::required_when_class());
    if (via && target) p.required_when = RequiredWhen{*via, *target};
    r.add_property(std::move(p));
  }
  r.check();
  return r;
}

}  // namespace omerdf::ontology

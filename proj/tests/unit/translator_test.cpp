#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <regex>

#include "omerdf/error.hpp"
#include "omerdf/rdf/serialization.hpp"
#include "omerdf/translator/xsd.hpp"
#include "support/data_path.hpp"

namespace omerdf::translator {
namespace {

using test_support::data_path;
using test_support::read_file;

constexpr std::string_view kHead =
    R"(<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema">)";
constexpr std::string_view kTail = "</xs:schema>";

std::string schema(std::string_view body) {
  return std::string(kHead) + "\n" + std::string(body) + "\n" + std::string(kTail);
}

rdf::Iri ns() { return rdf::Iri::make("http://example.org/frag#"); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoError;
}

TEST(ParseXsdSubset, SingleTypeWithOneAttribute) {
  const auto text = schema(R"(
  <xs:complexType name="Image">
    <xs:attribute name="ID" type="xs:string" use="required"/>
  </xs:complexType>)");
  const auto m = parse_xsd_subset(text);

  XsdComplexType expected;
  expected.name = "Image";
  expected.attributes.push_back({"ID", "string", true});
  ASSERT_EQ(m.complex_types.size(), 1u);
  EXPECT_EQ(m.complex_types[0], expected);
  EXPECT_TRUE(m.warnings.empty());
}

TEST(ParseXsdSubset, EmptySchemaIsRejected) {
  EXPECT_EQ(code_of([] { parse_xsd_subset(schema("")); }), ErrorCode::EmptySchema);
  EXPECT_EQ(code_of([] {
              parse_xsd_subset(
                  R"(<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema"/>)");
            }),
            ErrorCode::EmptySchema);
}

TEST(ParseXsdSubset, MalformedInput) {
  EXPECT_EQ(code_of([] { parse_xsd_subset("<xs:schema><xs:complexType></xs:schema>"); }),
            ErrorCode::MalformedXml);
  EXPECT_EQ(code_of([] { parse_xsd_subset("<root/>"); }), ErrorCode::MalformedXml);
}

TEST(ParseXsdSubset, OccurrenceBoundsAsWritten) {
  const auto text = schema(R"(
  <xs:complexType name="Pixels"/>
  <xs:complexType name="Image">
    <xs:sequence>
      <xs:element name="Pixels" type="Pixels" maxOccurs="1"/>
      <xs:element name="Note" type="xs:string" minOccurs="0" maxOccurs="unbounded"/>
    </xs:sequence>
  </xs:complexType>)");
  const auto m = parse_xsd_subset(text);
  const auto* image = m.find_type("Image");
  ASSERT_NE(image, nullptr);
  ASSERT_EQ(image->elements.size(), 2u);
  EXPECT_EQ(image->elements[0], (XsdElement{"Pixels", "Pixels", 1, 1}));
  EXPECT_EQ(image->elements[1], (XsdElement{"Note", "string", 0, std::nullopt}));
}

TEST(ParseXsdSubset, UnsupportedConstructsAreWarnedAndSkipped) {
  const auto text = schema(R"(
  <xs:complexType name="A">
    <xs:sequence>
      <xs:element name="Keep" type="xs:int"/>
      <xs:choice><xs:element name="X" type="xs:int"/></xs:choice>
      <xs:group ref="G"/>
    </xs:sequence>
    <xs:attributeGroup ref="AG"/>
  </xs:complexType>)");
  const auto m = parse_xsd_subset(text);
  ASSERT_EQ(m.complex_types.size(), 1u);
  EXPECT_EQ(m.complex_types[0].elements.size(), 1u);
  ASSERT_EQ(m.warnings.size(), 3u);
  EXPECT_EQ(m.warnings[0].path, "A/choice");
  EXPECT_EQ(m.warnings[1].path, "A/group");
  EXPECT_EQ(m.warnings[2].path, "A/attributeGroup");
  EXPECT_EQ(format_warnings(m.warnings).substr(0, 9), "A/choice\t");
}

TEST(ParseXsdSubset, OneExtensionStepIsFlattenedDeeperChainsAreNot) {
  const auto text = schema(R"(
  <xs:complexType name="Base"><xs:attribute name="Model" type="xs:string"/></xs:complexType>
  <xs:complexType name="Mid">
    <xs:complexContent><xs:extension base="Base">
      <xs:attribute name="Power" type="xs:float"/>
    </xs:extension></xs:complexContent>
  </xs:complexType>
  <xs:complexType name="Leaf">
    <xs:complexContent><xs:extension base="Mid">
      <xs:attribute name="Wheel" type="xs:string"/>
    </xs:extension></xs:complexContent>
  </xs:complexType>)");
  const auto m = parse_xsd_subset(text);
  const auto* mid = m.find_type("Mid");
  ASSERT_NE(mid, nullptr);
  ASSERT_EQ(mid->attributes.size(), 2u);
  EXPECT_EQ(mid->attributes[0].name, "Model");
  EXPECT_EQ(mid->attributes[1].name, "Power");
  const auto* leaf = m.find_type("Leaf");
  ASSERT_EQ(leaf->attributes.size(), 1u);
  EXPECT_EQ(leaf->attributes[0].name, "Wheel");
  ASSERT_EQ(m.warnings.size(), 1u);
  EXPECT_EQ(m.warnings[0].path, "Leaf/extension");
}

TEST(ParseXsdSubset, ElementRefResolvesToReferencedType) {
  const auto text = schema(R"(
  <xs:simpleType name="LSID"><xs:restriction base="xs:string"/></xs:simpleType>
  <xs:element name="Pixels"><xs:complexType>
    <xs:attribute name="ID" type="LSID"/>
  </xs:complexType></xs:element>
  <xs:element name="Image"><xs:complexType><xs:sequence>
    <xs:element ref="Pixels"/>
    <xs:element ref="Missing"/>
  </xs:sequence></xs:complexType></xs:element>)");
  const auto m = parse_xsd_subset(text);
  const auto* image = m.find_type("Image");
  ASSERT_EQ(image->elements.size(), 1u);
  EXPECT_EQ(image->elements[0].type_ref, "Pixels");
  ASSERT_EQ(m.warnings.size(), 1u);
  EXPECT_EQ(m.warnings[0].path, "Image/Missing");
  EXPECT_EQ(m.simple_types.at("LSID"), "string");
}

TEST(Naming, PropertyNames) {
  EXPECT_EQ(object_property_name("Pixels"), "hasPixels");
  EXPECT_EQ(datatype_property_name("AcquisitionDate"), "acquisitionDate");
  EXPECT_EQ(datatype_property_name("ID"), "id");
  EXPECT_EQ(datatype_property_name("LensNA"), "lensNA");
  EXPECT_EQ(datatype_property_name("sizeX"), "sizeX");
}

TEST(ExtractConcepts, EmptyModel) { EXPECT_TRUE(extract_concepts({}).empty()); }

TEST(ExtractConcepts, ImagePixelsRuleApplication) {
  const auto m = parse_xsd_subset(schema(R"(
  <xs:complexType name="Image">
    <xs:sequence><xs:element name="Pixels" type="Pixels" maxOccurs="1"/></xs:sequence>
    <xs:attribute name="AcquisitionDate" type="xs:dateTime"/>
  </xs:complexType>
  <xs:complexType name="Pixels"/>)"));
  const std::vector<CandidateConcept> expected = {
      {ConceptKind::Class, "Image", "Image", std::nullopt, std::nullopt, 0, std::nullopt},
      {ConceptKind::Class, "Pixels", "Pixels", std::nullopt, std::nullopt, 0, std::nullopt},
      {ConceptKind::ObjectProperty, "hasPixels", "Image/Pixels", "Image", "Pixels", 1, 1},
      {ConceptKind::DatatypeProperty, "acquisitionDate", "Image/@AcquisitionDate", "Image",
       "dateTime", 0, 1},
  };
  EXPECT_EQ(extract_concepts(m), expected);
}

TEST(ConceptsToRegistry, EmptyCandidates) {
  const auto r = concepts_to_registry_fragment({}, ns());
  EXPECT_TRUE(r.classes().empty());
  EXPECT_TRUE(r.properties().empty());
}

TEST(ConceptsToRegistry, ImagePixelsFragment) {
  const auto m = parse_xsd_subset(schema(R"(
  <xs:complexType name="Image">
    <xs:sequence><xs:element name="Pixels" type="Pixels"/></xs:sequence>
  </xs:complexType>
  <xs:complexType name="Pixels"/>)"));
  const auto r = concepts_to_registry_fragment(extract_concepts(m), ns());
  ASSERT_EQ(r.classes().size(), 2u);
  ASSERT_EQ(r.properties().size(), 1u);
  const auto& p = r.properties()[0];
  EXPECT_EQ(p.iri.value(), "http://example.org/frag#hasPixels");
  EXPECT_EQ(p.kind, ontology::PropertyKind::Object);
  EXPECT_NE(r.find_class(p.domain), nullptr);
  EXPECT_NE(r.find_class(p.range), nullptr);
  EXPECT_EQ(r.find_class(p.domain)->label, "Image");
  EXPECT_EQ(r.find_class(p.range)->label, "Pixels");
  EXPECT_NO_THROW(r.check());
}

TEST(ConceptsToRegistry, DuplicateClassCollapses) {
  std::vector<CandidateConcept> cs = {
      {ConceptKind::Class, "Image", "Image", {}, {}, 0, {}},
      {ConceptKind::Class, "Image", "Other/Image", {}, {}, 0, {}},
  };
  EXPECT_EQ(concepts_to_registry_fragment(cs, ns()).classes().size(), 1u);
}

TEST(ConceptsToRegistry, RepeatedPropertyMergesDomains) {
  std::vector<CandidateConcept> cs = {
      {ConceptKind::Class, "A", "A", {}, {}, 0, {}},
      {ConceptKind::Class, "B", "B", {}, {}, 0, {}},
      {ConceptKind::DatatypeProperty, "name", "A/@Name", "A", "string", 1, 1},
      {ConceptKind::DatatypeProperty, "name", "B/@Name", "B", "string", 0, 1},
  };
  const auto r = concepts_to_registry_fragment(cs, ns());
  ASSERT_EQ(r.properties().size(), 1u);
  const auto& p = r.properties()[0];
  EXPECT_EQ(p.domain.value(), "http://example.org/frag#A");
  ASSERT_EQ(p.extra_domains.size(), 1u);
  EXPECT_EQ(p.extra_domains[0].value(), "http://example.org/frag#B");
  EXPECT_EQ(p.min_count, 0u);
  EXPECT_EQ(p.max_count, 1u);
}

TEST(ConceptsToRegistry, NameCollision) {
  std::vector<CandidateConcept> cs = {
      {ConceptKind::Class, "thing", "thing", {}, {}, 0, {}},
      {ConceptKind::DatatypeProperty, "thing", "A/@Thing", "A", "string", 0, 1},
  };
  EXPECT_EQ(code_of([&] { concepts_to_registry_fragment(cs, ns()); }),
            ErrorCode::NameCollision);
}

// --- bundled OME subset fixture ---------------------------------------------

std::string fixture_text() { return read_file(data_path("ome-subset.xsd")); }

// Independent count: named top-level complexTypes plus top-level elements
// whose next line opens an anonymous complexType.
std::size_t count_fixture_types(const std::string& text) {
  std::size_t n = 0;
  const std::regex named(R"(^  <xsd:complexType name=")");
  const std::regex element(R"(^  <xsd:element name="[^"]+">$)");
  std::istringstream in(text);
  std::string line;
  std::string prev;
  while (std::getline(in, line)) {
    if (std::regex_search(line, named)) ++n;
    if (std::regex_search(prev, element) &&
        line.find("<xsd:complexType>") != std::string::npos) {
      ++n;
    }
    prev = line;
  }
  return n;
}

TEST(OmeSubsetFixture, CompositionYieldsOneClassPerComplexType) {
  const auto text = fixture_text();
  const auto expected = count_fixture_types(text);
  EXPECT_EQ(expected, 19u);
  const auto m = parse_xsd_subset(text);
  EXPECT_EQ(m.complex_types.size(), expected);
  const auto frag = concepts_to_registry_fragment(extract_concepts(m), ns());
  EXPECT_EQ(frag.classes().size(), expected);
  for (const auto& t : m.complex_types) {
    EXPECT_NE(frag.find_class(frag.term(t.name)), nullptr) << t.name;
  }
  EXPECT_NO_THROW(frag.check());
}

TEST(OmeSubsetFixture, ExpectedWarnings) {
  const auto m = parse_xsd_subset(fixture_text());
  std::vector<std::string> paths;
  for (const auto& w : m.warnings) paths.push_back(w.path);
  EXPECT_EQ(paths, (std::vector<std::string>{"Instrument/choice", "ROI/attributeGroup",
                                             "Filter/extension"}));
}

TEST(OmeSubsetFixture, SelectedConcepts) {
  const auto cs = extract_concepts(parse_xsd_subset(fixture_text()));
  auto find = [&](std::string_view path) -> const CandidateConcept* {
    for (const auto& c : cs) {
      if (c.source_path == path) return &c;
    }
    return nullptr;
  };
  const auto* pixels = find("Image/Pixels");
  ASSERT_NE(pixels, nullptr);
  EXPECT_EQ(pixels->name, "hasPixels");
  EXPECT_EQ(pixels->range_name, "Pixels");
  const auto* size_x = find("Pixels/@SizeX");
  ASSERT_NE(size_x, nullptr);
  EXPECT_EQ(size_x->name, "sizeX");
  EXPECT_EQ(size_x->range_name, "int");
  EXPECT_EQ(size_x->min_count, 1u);
  const auto* date = find("Image/AcquisitionDate");
  ASSERT_NE(date, nullptr);
  EXPECT_EQ(date->kind, ConceptKind::DatatypeProperty);
  EXPECT_EQ(date->range_name, "dateTime");
  EXPECT_NE(find("Detector/@Manufacturer"), nullptr);
  EXPECT_EQ(find("Filter/@Manufacturer"), nullptr);
}

TEST(OmeSubsetFixture, SoundnessEverySourcePathExists) {
  const auto m = parse_xsd_subset(fixture_text());
  for (const auto& c : extract_concepts(m)) {
    EXPECT_TRUE(source_path_exists(m, c.source_path)) << c.source_path;
    if (c.kind != ConceptKind::Class) {
      ASSERT_TRUE(c.domain_name.has_value());
      EXPECT_FALSE(c.domain_name->empty());
    }
  }
  EXPECT_FALSE(source_path_exists(m, "Image/@Nope"));
  EXPECT_FALSE(source_path_exists(m, "Nope"));
}

TEST(OmeSubsetFixture, FragmentSerializesAndReparses) {
  const auto frag =
      concepts_to_registry_fragment(extract_concepts(parse_xsd_subset(fixture_text())), ns());
  const auto g = ontology::registry_to_graph(frag);
  const auto ttl = rdf::serialize(g, rdf::Format::Turtle);
  EXPECT_EQ(rdf::serialize(rdf::parse(ttl, rdf::Format::Turtle), rdf::Format::NTriples),
            rdf::serialize(g, rdf::Format::NTriples));
}

// --- determinism --------------------------------------------------------------

TEST(Determinism, ModelTypeOrderDoesNotMatter) {
  const auto m = parse_xsd_subset(fixture_text());
  const auto reference = extract_concepts(m);
  std::mt19937 rng(7);
  for (int i = 0; i < 20; ++i) {
    auto shuffled = m;
    std::shuffle(shuffled.complex_types.begin(), shuffled.complex_types.end(), rng);
    EXPECT_EQ(extract_concepts(shuffled), reference);
  }
}

TEST(Determinism, DeclarationOrderInTextDoesNotMatter) {
  std::vector<std::string> decls = {
      R"(<xs:simpleType name="PInt"><xs:restriction base="xs:int"/></xs:simpleType>)",
      R"(<xs:complexType name="Spec"><xs:attribute name="Model" type="xs:string"/></xs:complexType>)",
      R"(<xs:element name="Detector"><xs:complexType><xs:complexContent>
           <xs:extension base="Spec"><xs:attribute name="Gain" type="xs:float"/></xs:extension>
         </xs:complexContent></xs:complexType></xs:element>)",
      R"(<xs:element name="Pixels"><xs:complexType>
           <xs:attribute name="SizeX" type="PInt" use="required"/>
         </xs:complexType></xs:element>)",
      R"(<xs:element name="Image"><xs:complexType><xs:sequence>
           <xs:element ref="Pixels"/>
           <xs:element name="Detector" type="Spec" minOccurs="0" maxOccurs="unbounded"/>
         </xs:sequence><xs:attribute name="Name" type="xs:string"/></xs:complexType></xs:element>)",
  };
  auto join = [&] {
    std::string body;
    for (const auto& d : decls) body += d + "\n";
    return schema(body);
  };
  const auto reference = extract_concepts(parse_xsd_subset(join()));
  EXPECT_EQ(reference.size(), 11u);
  std::mt19937 rng(11);
  for (int i = 0; i < 30; ++i) {
    std::shuffle(decls.begin(), decls.end(), rng);
    EXPECT_EQ(extract_concepts(parse_xsd_subset(join())), reference);
  }
}

TEST(Determinism, OutputIsSortedByKindThenName) {
  const auto cs = extract_concepts(parse_xsd_subset(fixture_text()));
  EXPECT_TRUE(std::is_sorted(cs.begin(), cs.end(), [](const auto& a, const auto& b) {
    return std::tie(a.kind, a.name) < std::tie(b.kind, b.name);
  }));
}

}  // namespace
}  // namespace omerdf::translator

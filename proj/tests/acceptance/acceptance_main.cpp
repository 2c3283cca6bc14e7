// Acceptance suite: one PASS/FAIL line per criterion on stdout, exit status
// 0 only when every criterion passes.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "omerdf/cli/cli.hpp"
#include "omerdf/ingest/ingest.hpp"
#include "omerdf/links/link_registry.hpp"
#include "omerdf/mapper/mapper.hpp"
#include "omerdf/ome/ome.hpp"
#include "omerdf/ontology/ontology.hpp"
#include "omerdf/rdf/serialization.hpp"
#include "omerdf/synth/synth.hpp"
#include "omerdf/translator/xsd.hpp"
#include "omerdf/validator/validator.hpp"
#include "support/data_path.hpp"
#include "support/iso_oracle.hpp"
#include "support/random_graph.hpp"
#include "support/temp_dir.hpp"

namespace {

using namespace omerdf;
namespace fs = std::filesystem;
using test_support::data_path;
using test_support::fixture_path;
using test_support::read_file;
using test_support::TempDir;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  std::string name;
  std::function<Outcome()> check;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << s << " s";
  return os.str();
}

/// Runs the CLI in-process and returns stdout; throws on a non-zero exit.
std::string cli_stdout(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err, cli::CliContext{});
  if (code != cli::kExitOk) {
    throw std::runtime_error("omerdf exited " + std::to_string(code) + ": " + err.str());
  }
  return out.str();
}

std::string literal_value(const rdf::Term& t) {
  return rdf::is_literal(t) ? std::get<rdf::Literal>(t).lexical() : std::string();
}

bool has_type(const rdf::Graph& g, const rdf::Term& node, const rdf::Iri& cls) {
  return rdf::is_iri(node) || rdf::is_blank(node)
             ? std::any_of(g.triples().begin(), g.triples().end(),
                           [&](const rdf::Triple& t) {
                             return t.subject() == node &&
                                    t.predicate().value() == rdf::vocab::kRdfType &&
                                    t.object() == rdf::Term(cls);
                           })
             : false;
}

// --- criteria ---------------------------------------------------------------

Outcome ontology_counts() {
  const auto t0 = Clock::now();
  TempDir d("acc");
  const auto path = (d / "ontology.ttl").string();
  cli_stdout({"schema-export", "-o", path});
  const auto g = rdf::parse(read_file(path), rdf::Format::Turtle);

  const std::string owl_class = "http://www.w3.org/2002/07/owl#Class";
  std::set<rdf::Term> classes;
  for (const auto& t : g.triples()) {
    if (t.predicate().value() == rdf::vocab::kRdfType && rdf::is_iri(t.object()) &&
        std::get<rdf::Iri>(t.object()).value() == owl_class) {
      classes.insert(t.subject());
    }
  }
  std::size_t extended = 0;
  std::set<std::string> categories;
  for (const auto& t : g.triples()) {
    if (!classes.contains(t.subject())) continue;
    if (t.predicate() == ontology::meta::origin() && literal_value(t.object()) == "extended") {
      ++extended;
    }
    if (t.predicate() == ontology::meta::category()) categories.insert(literal_value(t.object()));
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << classes.size() << " classes, " << extended << " extended, " << categories.size()
     << " categories in " << fmt_seconds(secs);
  return {classes.size() == 18 && extended == 7 && categories.size() == 5 && secs < 1.0, os.str()};
}

Outcome named_classes() {
  const auto g = rdf::parse(cli_stdout({"schema-export"}), rdf::Format::Turtle);
  const std::string label = "http://www.w3.org/2000/01/rdf-schema#label";
  std::set<std::string> labels;
  for (const auto& t : g.triples()) {
    if (t.predicate().value() == label) labels.insert(literal_value(t.object()));
  }
  std::vector<std::string> missing;
  for (const char* want : {"BioSample", "Bioresource", "SampleContainer", "PhenotypeData",
                           "ImagingCondition", "Image"}) {
    if (!labels.contains(want)) missing.emplace_back(want);
  }
  if (missing.empty()) return {true, "all 6 labels present"};
  std::string detail = "missing:";
  for (const auto& m : missing) detail += " " + m;
  return {false, detail};
}

Outcome fig2_path() {
  const auto t0 = Clock::now();
  const auto g = rdf::parse(cli_stdout({"convert", data_path("fig2.ome.xml"), "--sidecar",
                                        data_path("fig2.ann.tsv"), "--format", "ntriples"}),
                            rdf::Format::NTriples);
  const auto ns = std::string(ontology::kDefaultNamespace);
  const auto image_cls = rdf::Iri::make(ns + "Image");
  const auto sample_cls = rdf::Iri::make(ns + "BioSample");
  const auto depicts = rdf::Iri::make(ns + "depicts");
  const auto derived = rdf::Iri::make(ns + "derivedFrom");
  const std::string base = "http://metadb.riken.jp/metadb/db/rikenbrc_mouse/";

  std::string found;
  for (const auto& a : g.triples()) {
    if (a.predicate() != depicts || !has_type(g, a.subject(), image_cls) ||
        !has_type(g, a.object(), sample_cls)) {
      continue;
    }
    for (const auto& b : g.triples()) {
      if (b.subject() == a.object() && b.predicate() == derived && rdf::is_iri(b.object()) &&
          std::get<rdf::Iri>(b.object()).value().starts_with(base)) {
        found = rdf::to_ntriples(a.subject()) + " -> " + rdf::to_ntriples(a.object()) + " -> " +
                rdf::to_ntriples(b.object());
      }
    }
  }
  const double secs = seconds_since(t0);
  if (found.empty()) return {false, "no image -> BioSample -> strain path"};
  return {secs < 1.0, found + " in " + fmt_seconds(secs)};
}

Outcome round_trip() {
  std::mt19937_64 rng(20150101);
  std::size_t failures = 0, triples = 0, blanks = 0;
  for (int i = 0; i < 100; ++i) {
    const auto g = test_support::random_graph(rng, {.max_triples = 30, .max_blank_nodes = 8});
    triples += g.size();
    blanks += g.blank_labels().size();
    for (const auto f : {rdf::Format::Turtle, rdf::Format::NTriples}) {
      const auto back = rdf::parse(rdf::serialize(g, f), f);
      if (!test_support::naive_isomorphic(g, back)) ++failures;
    }
  }
  std::ostringstream os;
  os << "100 graphs x 2 formats, " << triples << " triples, " << blanks << " blank nodes, "
     << failures << " failure(s)";
  return {failures == 0, os.str()};
}

std::map<std::string, std::string> shard_files(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (name.starts_with("shard-")) files[name] = read_file(e.path().string());
  }
  return files;
}

/// Ingest with the default ontology, minting policy and link registry.
ingest::IngestResult run_ingest(const ingest::IngestConfig& c) {
  return ingest::ingest(c, ontology::build_core_ontology(), mapper::MintingPolicy::make(),
                        links::LinkRegistry::default_registry());
}

Outcome batch_scale() {
  TempDir in("acc-in"), out1("acc-p1"), outn("acc-pn");
  const synth::SynthOptions so{.seed = 2015, .records = 20000};
  const auto ledger = synth::write_corpus(in.path(), so);

  const std::size_t n = std::max<std::size_t>(4, std::thread::hardware_concurrency());
  ingest::IngestConfig c;
  c.input_dir = in.path();
  c.output_dir = out1.path();
  c.parallelism = 1;
  auto t0 = Clock::now();
  const auto r1 = run_ingest(c);
  const double secs1 = seconds_since(t0);
  c.output_dir = outn.path();
  c.parallelism = n;
  t0 = Clock::now();
  const auto rn = run_ingest(c);
  const double secsn = seconds_since(t0);

  const auto& s = rn.stats;
  const bool conserved = s.images_encountered() == ledger.images &&
                         s.images_skipped == rn.errors.size() && s.files_scanned == ledger.files;
  std::size_t lines = 0;
  const auto shards = shard_files(outn.path());
  for (const auto& [name, text] : shards) lines += std::count(text.begin(), text.end(), '\n');
  const bool identical = shards == shard_files(out1.path()) && !shards.empty();

  std::ostringstream os;
  os << "imagesConverted=" << s.images_converted << " of ledger " << ledger.images
     << ", conservation " << (conserved ? "holds" : "BROKEN") << ", " << shards.size()
     << " shards " << (identical ? "identical" : "DIFFER") << " for parallelism 1 vs " << n
     << ", " << fmt_seconds(secs1) << " / " << fmt_seconds(secsn);
  return {s.images_converted == 20000 && ledger.images == 20000 && conserved && identical &&
              lines == s.triples_emitted && std::max(secs1, secsn) < 120.0,
          os.str()};
}

Outcome validator_suite() {
  const auto reg = ontology::build_core_ontology();
  const auto links = links::LinkRegistry::default_registry();
  const validator::ValidateOptions opts{links.namespaces()};
  auto load = [](const std::string& p) {
    return rdf::parse(read_file(p), rdf::Format::NTriples);
  };

  std::size_t detected = 0, faults = 0;
  std::string problems;
  for (const auto& e : fs::directory_iterator(fixture_path("faults"))) {
    if (e.path().extension() != ".nt") continue;
    ++faults;
    auto stem = e.path().stem().string();
    std::transform(stem.begin(), stem.end(), stem.begin(), ::toupper);
    const auto expected = validator::parse_violation_code(stem);
    const auto report = validator::validate(load(e.path().string()), reg, opts);
    std::set<validator::ViolationCode> codes;
    for (const auto& v : report.violations) codes.insert(v.code);
    if (expected && codes == std::set{*expected}) {
      ++detected;
    } else {
      problems += " " + e.path().filename().string();
    }
  }

  // Golden outputs: the frozen fig2 graph plus every bundled fixture mapped fresh.
  std::vector<std::pair<std::string, rdf::Graph>> golden = {
      {"golden/fig2.nt", load(fixture_path("golden/fig2.nt"))}};
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {data_path("fig2.ome.xml"), data_path("fig2.ann.tsv")},
      {fixture_path("ome/optical_two_images.ome.xml"),
       fixture_path("ome/optical_two_images.ann.tsv")},
      {fixture_path("ome/minimal.ome.xml"), ""},
  };
  for (const auto& [xml, tsv] : pairs) {
    const auto doc = ome::parse_ome_document(read_file(xml));
    const auto anns = tsv.empty() ? std::vector<ome::EmAnnotation>{}
                                  : ome::parse_sidecar(read_file(tsv));
    const auto mapped = mapper::map_all(ome::join_annotations(doc, anns), reg,
                                        mapper::MintingPolicy::make(), links, &doc);
    golden.emplace_back(fs::path(xml).filename().string(), mapped.graph);
  }
  std::size_t clean = 0;
  for (const auto& [name, g] : golden) {
    if (validator::validate(g, reg, opts).passed) {
      ++clean;
    } else {
      problems += " " + name;
    }
  }

  std::ostringstream os;
  os << detected << "/" << faults << " faults detected with the expected code, " << clean << "/"
     << golden.size() << " golden graphs clean";
  if (!problems.empty()) os << "; failing:" << problems;
  return {faults == validator::kViolationCodeCount && detected == faults && clean == golden.size(),
          os.str()};
}

Outcome dedup() {
  TempDir in("acc-dd"), twice("acc-dd2"), out1("acc-dd-o1"), out2("acc-dd-o2");
  synth::write_corpus(in.path(), {.seed = 99, .records = 2000, .images_per_file = 2});
  fs::copy(in.path(), twice / "original", fs::copy_options::recursive);
  fs::copy(in.path(), twice / "copy", fs::copy_options::recursive);

  ingest::IngestConfig c;
  c.input_dir = in.path();
  c.output_dir = out1.path();
  const auto first = run_ingest(c);
  c.input_dir = twice.path();
  c.output_dir = out2.path();
  const auto second = run_ingest(c);

  std::ostringstream os;
  os << "first run converted " << first.stats.images_converted << ", double ingest dropped "
     << second.stats.duplicates_dropped << " duplicate(s) and converted "
     << second.stats.images_converted;
  return {first.stats.images_converted > 0 &&
              second.stats.duplicates_dropped == first.stats.images_converted &&
              second.stats.images_converted == first.stats.images_converted,
          os.str()};
}

Outcome translator_determinism() {
  const auto text = read_file(data_path("ome-subset.xsd"));
  // Independent count of complexType declarations, named or anonymous.
  const std::regex tag(R"(<[A-Za-z]+:complexType[\s>/])");
  const auto declared = static_cast<std::size_t>(
      std::distance(std::sregex_iterator(text.begin(), text.end(), tag), std::sregex_iterator()));

  const auto model = translator::parse_xsd_subset(text);
  const auto reference = translator::extract_concepts(model);
  std::set<std::string> class_names;
  std::size_t classes = 0;
  for (const auto& c : reference) {
    if (c.kind == translator::ConceptKind::Class) {
      ++classes;
      class_names.insert(c.name);
    }
  }
  std::mt19937 rng(4242);
  std::size_t mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    auto shuffled = model;
    std::shuffle(shuffled.complex_types.begin(), shuffled.complex_types.end(), rng);
    if (translator::extract_concepts(shuffled) != reference) ++mismatches;
  }
  std::ostringstream os;
  os << declared << " complexTypes, " << classes << " class candidates (" << class_names.size()
     << " distinct), " << mismatches << " of 100 shuffles differ";
  return {declared == model.complex_types.size() && classes == declared &&
              class_names.size() == declared && mismatches == 0,
          os.str()};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"ontology-counts", ontology_counts},
      {"named-classes", named_classes},
      {"fig2-golden-path", fig2_path},
      {"round-trip", round_trip},
      {"batch-scale", batch_scale},
      {"validator-fault-suite", validator_suite},
      {"dedup", dedup},
      {"translator-determinism", translator_determinism},
  };
  std::size_t failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << ": " << o.detail << std::endl;
  }
  std::cerr << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}

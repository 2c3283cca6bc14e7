#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "omerdf/cli/cli.hpp"
#include "omerdf/ingest/ingest.hpp"
#include "omerdf/rdf/serialization.hpp"
#include "omerdf/synth/synth.hpp"
#include "support/data_path.hpp"
#include "support/temp_dir.hpp"

namespace omerdf::cli {
namespace {

namespace fs = std::filesystem;
using test_support::data_path;
using test_support::fixture_path;
using test_support::read_file;
using test_support::TempDir;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args, const CliContext& ctx = {}) {
  std::ostringstream out, err;
  const int code = run(args, out, err, ctx);
  return {code, out.str(), err.str()};
}

void write(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

/// Every subcommand with the flags it must accept.
const std::map<std::string, std::vector<std::string>>& flag_table() {
  static const std::map<std::string, std::vector<std::string>> t = {
      {"schema-export", {"--format", "--output", "--namespace"}},
      {"translate-xsd", {"--format", "--output", "--namespace", "--warnings"}},
      {"convert", {"--sidecar", "--format", "--output", "--namespace", "--registry", "--skip-errors"}},
      {"validate", {"--format", "--output", "--namespace", "--registry"}},
      {"ingest",
       {"--output", "--format", "--namespace", "--registry", "--shard-size", "--parallelism",
        "--skip-errors"}},
      {"link-check", {"--offline", "--output", "--registry", "--parallelism"}},
      {"stats", {"--output"}},
  };
  return t;
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

// Global behaviour

TEST(Cli, VersionAndHelp) {
  const auto v = invoke({"--version"});
  EXPECT_EQ(v.code, kExitOk);
  EXPECT_EQ(v.out, "omerdf " + std::string(kVersion) + "\n");
  const auto h = invoke({"--help"});
  EXPECT_EQ(h.code, kExitOk);
  EXPECT_EQ(h.out, help_text());
}

TEST(Cli, HelpListsEverySubcommandAndFlag) {
  const auto help = help_text();
  EXPECT_NE(help.find("--config"), std::string::npos);
  for (const auto& [sub, flags] : flag_table()) {
    EXPECT_NE(help.find(sub), std::string::npos) << sub;
    const auto own = invoke({sub, "--help"});
    EXPECT_EQ(own.code, kExitOk) << sub;
    for (const auto& f : flags) {
      EXPECT_NE(own.out.find(f), std::string::npos) << sub << " " << f;
    }
  }
}

TEST(Cli, MissingSubcommandIsUsageError) {
  const auto r = invoke({});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_TRUE(r.out.empty());
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitUsage);
}

TEST(Cli, UnknownFlagsAreUsageErrors) {
  std::mt19937 rng(17);
  const std::vector<std::string> junk = {"--frobnicate", "--formats", "--out", "-x", "-h",
                                         "--skip_errors", "--offline=maybe", "--Output", "---format",
                                         "--shard", "--config-file"};
  for (const auto& [sub, flags] : flag_table()) {
    for (const auto& j : junk) {
      if (std::find(flags.begin(), flags.end(), j) != flags.end()) continue;
      std::vector<std::string> args = {sub, "positional-arg", j};
      if (sub == "schema-export") args = {sub, j};
      std::shuffle(args.begin() + 1, args.end(), rng);
      const auto r = invoke(args);
      EXPECT_EQ(r.code, kExitUsage) << sub << " " << j << "\n" << r.err;
    }
  }
}

TEST(Cli, BadFlagValuesAreUsageErrors) {
  EXPECT_EQ(invoke({"schema-export", "--format", "rdfxml"}).code, kExitUsage);
  EXPECT_EQ(invoke({"validate", "x.nt", "--format", "json"}).code, kExitUsage);
  EXPECT_EQ(invoke({"ingest", "in", "-o", "out", "--shard-size", "0"}).code, kExitUsage);
  EXPECT_EQ(invoke({"ingest", "in", "-o", "out", "--parallelism", "-3"}).code, kExitUsage);
  EXPECT_EQ(invoke({"schema-export", "--namespace", "not an iri"}).code, kExitUsage);
  EXPECT_EQ(invoke({"ingest", "in"}).code, kExitUsage);  // -o is required
}

// schema-export

TEST(Cli, SchemaExportDeclaresEighteenClasses) {
  TempDir d("cli");
  const auto path = (d / "onto.nt").string();
  const auto r = invoke({"schema-export", "--format", "ntriples", "-o", path});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::size_t declarations = 0;
  std::istringstream lines(read_file(path));
  for (std::string line; std::getline(lines, line);) {
    declarations += line.ends_with(
        "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://www.w3.org/2002/07/owl#Class> .");
  }
  EXPECT_EQ(declarations, 18u);
}

TEST(Cli, SchemaExportTurtleToStdoutHonoursNamespace) {
  const auto r = invoke({"schema-export", "--namespace", "http://example.org/o#"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto g = rdf::parse(r.out, rdf::Format::Turtle);
  EXPECT_TRUE(g.contains(rdf::Triple(rdf::Iri::make("http://example.org/o#Image"),
                                     rdf::Iri::make(rdf::vocab::kRdfType),
                                     rdf::Iri::make("http://www.w3.org/2002/07/owl#Class"))));
}

// translate-xsd

TEST(Cli, TranslateXsdWritesFragmentAndWarnings) {
  TempDir d("cli");
  const auto r = invoke({"translate-xsd", data_path("ome-subset.xsd"), "-o", (d / "f.ttl").string(),
                         "--warnings", (d / "w.tsv").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(count_lines(read_file((d / "w.tsv").string())), 3u);
  const auto g = rdf::parse(read_file((d / "f.ttl").string()), rdf::Format::Turtle);
  EXPECT_GT(g.size(), 0u);
  EXPECT_EQ(invoke({"translate-xsd", (d / "missing.xsd").string()}).code, kExitFailure);
  write(d / "bad.xsd", "<xsd:schema");
  EXPECT_EQ(invoke({"translate-xsd", (d / "bad.xsd").string()}).code, kExitFailure);
}

// convert

TEST(Cli, ConvertIsDeterministicAndMatchesGolden) {
  TempDir d("cli");
  const auto out = (d / "out.nt").string();
  const std::vector<std::string> args = {"convert", data_path("fig2.ome.xml"), "--sidecar",
                                         data_path("fig2.ann.tsv"), "-o", out};
  ASSERT_EQ(invoke(args).code, kExitOk);
  const auto first = read_file(out);
  ASSERT_EQ(invoke(args).code, kExitOk);
  EXPECT_EQ(read_file(out), first);
  EXPECT_EQ(first, read_file(fixture_path("golden/fig2.nt")));
}

TEST(Cli, ConvertFailuresExitThree) {
  EXPECT_EQ(invoke({"convert", fixture_path("ome/unclosed.ome.xml")}).code, kExitFailure);
  EXPECT_EQ(invoke({"convert", "/nonexistent/x.ome.xml"}).code, kExitFailure);
}

TEST(Cli, ConvertSkipErrorsReportsOnStderr) {
  TempDir d("cli");
  write(d / "a.ann.tsv", std::string(ome::kSidecarHeader) +
                             "\nLIV-0001\tS1\t\tnope:X1\t\t\t\t\t\n");
  const std::vector<std::string> base = {"convert", data_path("fig2.ome.xml"), "--sidecar",
                                         (d / "a.ann.tsv").string()};
  EXPECT_EQ(invoke(base).code, kExitFailure);
  auto args = base;
  args.push_back("--skip-errors");
  const auto r = invoke(args);
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.err.find("LIV-0001"), std::string::npos);
  EXPECT_NE(r.err.find("UnresolvableStrain"), std::string::npos);
}

// validate

TEST(Cli, ValidateOneViolationGivesOneRow) {
  const auto r = invoke({"validate", fixture_path("faults/cardinality_max.nt")});
  EXPECT_EQ(r.code, kExitViolations);
  EXPECT_EQ(count_lines(r.out), 1u);
  EXPECT_TRUE(r.out.starts_with("CARDINALITY_MAX\t"));
}

TEST(Cli, ValidateCleanAndTextFormat) {
  EXPECT_EQ(invoke({"validate", fixture_path("golden/fig2.nt")}).code, kExitOk);
  const auto r = invoke({"validate", fixture_path("faults/unknown_property.nt"), "--format", "text"});
  EXPECT_EQ(r.code, kExitViolations);
  EXPECT_TRUE(r.out.starts_with("UNKNOWN_PROPERTY <"));
  EXPECT_EQ(invoke({"validate", "/nonexistent.nt"}).code, kExitFailure);
}

TEST(Cli, ValidateUsesRegistryNamespaces) {
  TempDir d("cli");
  // A registry without rikenbrc_mouse makes nothing external, which is still
  // clean here because the strain node never appears as a subject.
  write(d / "reg.tsv", "other\thttp://example.org/db\t[A-Z0-9]+\n");
  EXPECT_EQ(invoke({"validate", fixture_path("golden/fig2.nt"), "--registry",
                    (d / "reg.tsv").string()})
                .code,
            kExitOk);
  write(d / "broken.tsv", "Bad Prefix\thttp://x\t.*\n");
  EXPECT_EQ(invoke({"validate", fixture_path("golden/fig2.nt"), "--registry",
                    (d / "broken.tsv").string()})
                .code,
            kExitFailure);
}

// ingest and stats

TEST(Cli, IngestThenStats) {
  TempDir in("cli-in"), out("cli-out");
  synth::write_corpus(in.path(), {.seed = 21, .records = 30, .images_per_file = 3});
  const auto r = invoke({"ingest", in.path().string(), "-o", out.path().string(), "--shard-size",
                         "7", "--parallelism", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("imagesConverted: 30\n"), std::string::npos);
  EXPECT_TRUE(fs::exists(out / "shard-00004.nt"));
  EXPECT_FALSE(fs::exists(out / "shard-00005.nt"));
  const auto s = invoke({"stats", out.path().string()});
  ASSERT_EQ(s.code, kExitOk);
  EXPECT_EQ(s.out.substr(0, s.out.find("wallTimeMs")), r.out.substr(0, r.out.find("wallTimeMs")));
  EXPECT_EQ(invoke({"stats", (out / "nope").string()}).code, kExitFailure);
  EXPECT_EQ(invoke({"ingest", (in / "nope").string(), "-o", out.path().string()}).code,
            kExitFailure);
}

TEST(Cli, IngestSkipErrorsFlag) {
  TempDir in("cli-in"), out("cli-out");
  synth::write_corpus(in.path(), {.seed = 8, .records = 5});
  write(in / "broken.ome.xml", "<OME><Image");
  const std::vector<std::string> base = {"ingest", in.path().string(), "-o", out.path().string()};
  EXPECT_EQ(invoke(base).code, kExitFailure);
  auto args = base;
  args.push_back("--skip-errors");
  const auto r = invoke(args);
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("imagesConverted: 5\n"), std::string::npos);
  EXPECT_EQ(read_file((out / "errors.tsv").string()), "broken.ome.xml\t-\tMalformedXml\n");
}

// Settings from config files

TEST(Cli, ConfigFileSuppliesSettingsAndFlagsWin) {
  TempDir in("cli-in"), out("cli-out"), cfg("cli-cfg");
  synth::write_corpus(in.path(), {.seed = 2, .records = 12});
  write(cfg / "omerdf.conf", "# defaults\nshard-size = 5\nparallelism=3\n\n");
  const auto conf = (cfg / "omerdf.conf").string();
  ASSERT_EQ(invoke({"--config", conf, "ingest", in.path().string(), "-o", out.path().string()}).code,
            kExitOk);
  EXPECT_TRUE(fs::exists(out / "shard-00002.nt"));  // 12 records / 5 per shard
  ASSERT_EQ(invoke({"ingest", in.path().string(), "-o", out.path().string(), "--config", conf,
                    "--shard-size", "6"})
                .code,
            kExitOk);
  EXPECT_TRUE(fs::exists(out / "shard-00001.nt"));
  EXPECT_FALSE(fs::exists(out / "shard-00002.nt"));
}

TEST(Cli, ConfigFromEnvironment) {
  TempDir cfg("cli-cfg");
  write(cfg / "c.conf", "namespace=http://example.org/env#\n");
  CliContext ctx;
  ctx.config_env = (cfg / "c.conf").string();
  const auto r = invoke({"schema-export", "--format", "nt"}, ctx);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("<http://example.org/env#Image>"), std::string::npos);
  // --config replaces the environment file; flags beat both.
  write(cfg / "d.conf", "namespace=http://example.org/flag#\n");
  EXPECT_NE(invoke({"--config", (cfg / "d.conf").string(), "schema-export", "--format", "nt"}, ctx)
                .out.find("<http://example.org/flag#Image>"),
            std::string::npos);
  EXPECT_NE(invoke({"schema-export", "--format", "nt", "--namespace", "http://example.org/x/"}, ctx)
                .out.find("<http://example.org/x/Image>"),
            std::string::npos);
}

TEST(Cli, ConfigRegistryPathIsRelativeToConfigFile) {
  TempDir cfg("cli-cfg");
  write(cfg / "links/reg.tsv", "Bad Prefix\thttp://x\t.*\n");
  write(cfg / "c.conf", "registry=links/reg.tsv\n");
  EXPECT_EQ(invoke({"--config", (cfg / "c.conf").string(), "validate",
                    fixture_path("golden/fig2.nt")})
                .code,
            kExitFailure);
}

TEST(Cli, BadConfigFiles) {
  TempDir cfg("cli-cfg");
  write(cfg / "unknown.conf", "colour=blue\n");
  write(cfg / "noeq.conf", "shard-size 5\n");
  write(cfg / "zero.conf", "shard-size=0\n");
  write(cfg / "bool.conf", "offline=perhaps\n");
  for (const char* f : {"unknown.conf", "noeq.conf", "zero.conf", "bool.conf"}) {
    EXPECT_EQ(invoke({"--config", (cfg / f).string(), "schema-export"}).code, kExitUsage) << f;
  }
  EXPECT_EQ(invoke({"--config", (cfg / "absent.conf").string(), "schema-export"}).code,
            kExitFailure);
}

// link-check

class FixedFetcher : public links::Fetcher {
 public:
  explicit FixedFetcher(int status) : status_(status) {}
  links::FetchOutcome fetch(const rdf::Iri&, std::chrono::milliseconds) override {
    return {status_, false};
  }

 private:
  int status_;
};

TEST(Cli, LinkCheckReportsStatuses) {
  const auto nt = fixture_path("golden/fig2.nt");
  const std::string iri = "http://metadb.riken.jp/metadb/db/rikenbrc_mouse/RBRC00001";
  const auto offline = invoke({"link-check", nt, "--offline"});
  EXPECT_EQ(offline.code, kExitOk);
  EXPECT_EQ(offline.out, iri + "\tnotChecked\t\n");

  FixedFetcher ok(200);
  CliContext ctx;
  ctx.fetcher = &ok;
  const auto good = invoke({"link-check", nt}, ctx);
  EXPECT_EQ(good.code, kExitOk);
  EXPECT_EQ(good.out, iri + "\tok\t200\n");

  FixedFetcher missing(404);
  ctx.fetcher = &missing;
  const auto bad = invoke({"link-check", nt}, ctx);
  EXPECT_EQ(bad.code, kExitViolations);
  EXPECT_EQ(bad.out, iri + "\tunreachable\t404\n");
}

// Output discipline

TEST(Cli, WritesNothingItWasNotAskedTo) {
  TempDir cwd("cli-cwd"), in("cli-in"), out("cli-out");
  synth::write_corpus(in.path(), {.seed = 5, .records = 4});
  const auto before = fs::current_path();
  fs::current_path(cwd.path());
  FixedFetcher ok(200);
  CliContext ctx;
  ctx.fetcher = &ok;
  const std::vector<std::vector<std::string>> runs = {
      {"schema-export"},
      {"translate-xsd", data_path("ome-subset.xsd")},
      {"convert", data_path("fig2.ome.xml"), "--sidecar", data_path("fig2.ann.tsv")},
      {"validate", fixture_path("golden/fig2.nt")},
      {"link-check", fixture_path("golden/fig2.nt")},
      {"ingest", in.path().string(), "-o", out.path().string()},
      {"stats", out.path().string()},
  };
  for (const auto& args : runs) EXPECT_EQ(invoke(args, ctx).code, kExitOk) << args[0];
  fs::current_path(before);
  EXPECT_TRUE(fs::is_empty(cwd.path()));
  std::set<std::string> written;
  for (const auto& e : fs::directory_iterator(out.path())) written.insert(e.path().filename().string());
  EXPECT_EQ(written, (std::set<std::string>{"errors.tsv", "shard-00000.nt", "stats.tsv"}));
}

}  // namespace
}  // namespace omerdf::cli

#include "omerdf/cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "omerdf/error.hpp"
#include "omerdf/ingest/ingest.hpp"
#include "omerdf/mapper/mapper.hpp"
#include "omerdf/ome/ome.hpp"
#include "omerdf/ontology/ontology.hpp"
#include "omerdf/rdf/serialization.hpp"
#include "omerdf/translator/xsd.hpp"
#include "omerdf/validator/validator.hpp"

namespace omerdf::cli {

namespace fs = std::filesystem;

namespace {

// --- settings ---------------------------------------------------------------

/// Values that a config file may supply and flags may override.
struct Settings {
  std::string ns{ontology::kDefaultNamespace};
  std::optional<std::string> registry;
  std::size_t shard_size = 1000;
  std::size_t parallelism = ingest::default_parallelism();
  bool skip_errors = false;
  bool offline = false;
};

/// Everything the parser fills in. Unset optionals mean "flag not given".
struct Options {
  std::optional<std::string> config;
  std::optional<std::string> ns;
  std::optional<std::string> registry;
  std::optional<std::size_t> shard_size;
  std::optional<std::size_t> parallelism;
  int skip_errors = 0;
  int offline = 0;
  std::optional<std::string> format;
  std::optional<std::string> output;
  std::optional<std::string> sidecar;
  std::optional<std::string> warnings;
  std::string input;
};

std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& text, const std::optional<std::string>& path,
                  std::ostream& out) {
  if (!path) {
    out << text;
    return;
  }
  std::ofstream f(*path, std::ios::binary);
  f << text;
  f.close();
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + *path);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorCode::InvalidConfig, "config key '" + key + "' expects true or false");
}

std::size_t parse_count(const std::string& key, const std::string& v) {
  std::size_t n = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty() || n == 0) {
    throw Error(ErrorCode::InvalidConfig, "config key '" + key + "' expects a positive integer");
  }
  return n;
}

/// key=value lines; '#' starts a comment line. A relative registry path is
/// taken relative to the config file.
void apply_config_file(Settings& s, const std::string& path) {
  const auto text = read_input(path);
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidConfig, path + ": expected key=value", line_no, std::nullopt);
    }
    const auto key = trim(std::string_view(t).substr(0, eq));
    const auto value = trim(std::string_view(t).substr(eq + 1));
    if (key == "namespace") {
      s.ns = value;
    } else if (key == "registry") {
      fs::path p(value);
      if (p.is_relative()) p = fs::path(path).parent_path() / p;
      s.registry = p.string();
    } else if (key == "shard-size") {
      s.shard_size = parse_count(key, value);
    } else if (key == "parallelism") {
      s.parallelism = parse_count(key, value);
    } else if (key == "skip-errors") {
      s.skip_errors = parse_bool(key, value);
    } else if (key == "offline") {
      s.offline = parse_bool(key, value);
    } else {
      throw Error(ErrorCode::InvalidConfig, path + ": unknown key '" + key + "'", line_no,
                  std::nullopt);
    }
  }
}

Settings resolve(const Options& o, const CliContext& ctx) {
  Settings s;
  if (o.config) {
    apply_config_file(s, *o.config);
  } else if (ctx.config_env && !ctx.config_env->empty()) {
    apply_config_file(s, *ctx.config_env);
  }
  if (o.ns) s.ns = *o.ns;
  if (o.registry) s.registry = *o.registry;
  if (o.shard_size) s.shard_size = *o.shard_size;
  if (o.parallelism) s.parallelism = *o.parallelism;
  if (o.skip_errors) s.skip_errors = true;
  if (o.offline) s.offline = true;
  if (!rdf::Iri::is_valid(s.ns) || !(s.ns.ends_with('#') || s.ns.ends_with('/'))) {
    throw Error(ErrorCode::InvalidConfig, "namespace '" + s.ns + "' must be an IRI ending in '#' or '/'");
  }
  if (s.shard_size == 0 || s.parallelism == 0) {
    throw Error(ErrorCode::InvalidConfig, "shard size and parallelism must be at least 1");
  }
  return s;
}

links::LinkRegistry load_links(const Settings& s) {
  if (!s.registry) return links::LinkRegistry::default_registry();
  return links::LinkRegistry::load(read_input(*s.registry));
}

/// --format for RDF output; falls back to the output file's extension, then Turtle.
rdf::Format rdf_format(const Options& o) {
  if (o.format) return *rdf::parse_format(*o.format);
  if (o.output) {
    if (const auto f = rdf::format_from_path(*o.output)) return *f;
  }
  return rdf::Format::Turtle;
}

rdf::Graph read_graph(const std::string& path) {
  const auto text = read_input(path);
  return rdf::parse(text, rdf::format_from_path(path).value_or(rdf::Format::Turtle));
}

// --- subcommands ------------------------------------------------------------

int cmd_schema_export(const Options& o, const Settings& s, std::ostream& out, std::ostream&) {
  const auto reg = ontology::build_core_ontology(s.ns);
  write_output(rdf::serialize(ontology::registry_to_graph(reg), rdf_format(o)), o.output, out);
  return kExitOk;
}

int cmd_translate_xsd(const Options& o, const Settings& s, std::ostream& out, std::ostream& err) {
  const auto model = translator::parse_xsd_subset(read_input(o.input));
  const auto concepts = translator::extract_concepts(model);
  const auto fragment = translator::concepts_to_registry_fragment(concepts, rdf::Iri::make(s.ns));
  write_output(rdf::serialize(ontology::registry_to_graph(fragment), rdf_format(o)), o.output, out);
  if (o.warnings) {
    std::ofstream f(*o.warnings, std::ios::binary);
    f << translator::format_warnings(model.warnings);
    f.close();
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + *o.warnings);
  }
  err << "translate-xsd: " << concepts.size() << " concept(s), " << model.warnings.size()
      << " construct(s) skipped\n";
  return kExitOk;
}

int cmd_convert(const Options& o, const Settings& s, std::ostream& out, std::ostream& err) {
  const auto doc = ome::parse_ome_document(read_input(o.input));
  const auto anns = o.sidecar ? ome::parse_sidecar(read_input(*o.sidecar))
                              : std::vector<ome::EmAnnotation>{};
  const auto pairs = ome::join_annotations(doc, anns);
  const auto reg = ontology::build_core_ontology(s.ns);
  const auto links = load_links(s);
  const auto result = mapper::map_all(pairs, reg, mapper::MintingPolicy::make(), links, &doc,
                                      {.skip_errors = s.skip_errors});
  for (const auto& sk : result.skipped) {
    err << "skipped image '" << sk.image_id << "' (" << to_string(sk.code) << "): " << sk.message
        << "\n";
  }
  write_output(rdf::serialize(result.graph, rdf_format(o)), o.output, out);
  return kExitOk;
}

int cmd_validate(const Options& o, const Settings& s, std::ostream& out, std::ostream& err) {
  const auto g = read_graph(o.input);
  const auto reg = ontology::build_core_ontology(s.ns);
  const auto links = load_links(s);
  const auto report = validator::validate(g, reg, {links.namespaces()});
  const bool text = o.format && *o.format == "text";
  write_output(text ? validator::format_report_text(report) : validator::format_report_tsv(report),
               o.output, out);
  err << "validate: " << report.violations.size() << " violation(s) in " << report.checked_triples
      << " triple(s)\n";
  return report.passed ? kExitOk : kExitViolations;
}

int cmd_ingest(const Options& o, const Settings& s, std::ostream& out, std::ostream& err) {
  ingest::IngestConfig c;
  c.input_dir = o.input;
  c.output_dir = *o.output;
  c.shard_size = s.shard_size;
  c.parallelism = s.parallelism;
  c.skip_errors = s.skip_errors;
  c.format = o.format ? *rdf::parse_format(*o.format) : rdf::Format::NTriples;
  const auto reg = ontology::build_core_ontology(s.ns);
  const auto links = load_links(s);
  const auto r = ingest::ingest(c, reg, mapper::MintingPolicy::make(), links);
  if (!r.errors.empty()) {
    err << "ingest: " << r.errors.size() << " record(s) skipped; see "
        << (c.output_dir / "errors.tsv").string() << "\n";
  }
  out << ingest::stats_report(r.stats);
  return kExitOk;
}

int cmd_link_check(const Options& o, const Settings& s, std::ostream& out, std::ostream& err,
                   const CliContext& ctx) {
  const auto g = read_graph(o.input);
  const auto links = load_links(s);
  std::set<rdf::Iri> found;
  auto consider = [&](const rdf::Term& t) {
    if (const auto* iri = std::get_if<rdf::Iri>(&t); iri && links.is_external(iri->value())) {
      found.insert(*iri);
    }
  };
  for (const auto& t : g.triples()) {
    consider(t.subject());
    consider(t.object());
  }
  const std::vector<rdf::Iri> iris(found.begin(), found.end());
  std::unique_ptr<links::Fetcher> http;
  links::Fetcher* fetcher = ctx.fetcher;
  if (!fetcher && !s.offline) {
    http = links::make_http_fetcher();
    fetcher = http.get();
  }
  links::CheckOptions opts;
  opts.offline = s.offline;
  opts.parallelism = s.parallelism;
  const auto results = links::check_links(iris, fetcher, opts);
  std::string tsv;
  std::size_t unreachable = 0;
  for (const auto& r : results) {
    tsv += r.iri.value() + "\t" + std::string(links::to_string(r.status)) + "\t" +
           (r.http_status ? std::to_string(*r.http_status) : "") + "\n";
    unreachable += r.status == links::LinkStatus::Unreachable;
  }
  write_output(tsv, o.output, out);
  err << "link-check: " << results.size() << " link(s), " << unreachable << " unreachable\n";
  return unreachable ? kExitViolations : kExitOk;
}

int cmd_stats(const Options& o, const Settings&, std::ostream& out, std::ostream&) {
  fs::path p(o.input);
  if (fs::is_directory(p)) p /= "stats.tsv";
  write_output(ingest::stats_report(ingest::parse_stats_tsv(read_input(p.string()))), o.output,
               out);
  return kExitOk;
}

// --- parser -----------------------------------------------------------------

const std::vector<std::string> kRdfFormats = {"turtle", "ttl", "ntriples", "nt"};

struct Parser {
  CLI::App app{"Describe OME microscopy metadata as RDF against a curated ontology.", "omerdf"};
  Options o;
  std::vector<CLI::App*> subs;

  Parser() {
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.add_option("--config", o.config, "key=value settings file (default: $OME_RDF_CONFIG)");

    auto* schema = sub("schema-export", "Write the core ontology as Turtle or N-Triples.");
    rdf_format_opt(schema);
    output_opt(schema);
    namespace_opt(schema);

    auto* xsd = sub("translate-xsd", "Translate an OME XML-schema subset into an ontology fragment.");
    xsd->add_option("xsd", o.input, "XSD file")->required();
    rdf_format_opt(xsd);
    output_opt(xsd);
    namespace_opt(xsd);
    xsd->add_option("--warnings", o.warnings, "write skipped constructs (path<TAB>reason) here");

    auto* convert = sub("convert", "Convert one OME-XML file (plus sidecar) to RDF.");
    convert->add_option("ome", o.input, "OME-XML file")->required();
    convert->add_option("--sidecar", o.sidecar, "EM annotation sidecar (.ann.tsv)");
    rdf_format_opt(convert);
    output_opt(convert);
    namespace_opt(convert);
    registry_opt(convert);
    skip_opt(convert);

    auto* validate = sub("validate", "Check an instance graph against the ontology.");
    validate->add_option("graph", o.input, "RDF file (.ttl or .nt)")->required();
    validate->add_option("--format", o.format, "report format")
        ->check(CLI::IsMember({"tsv", "text"}));
    output_opt(validate);
    namespace_opt(validate);
    registry_opt(validate);

    auto* ingest = sub("ingest", "Convert a directory tree into sharded RDF.");
    ingest->add_option("input", o.input, "input directory")->required();
    ingest->add_option("-o,--output", o.output, "output directory")->required();
    ingest->add_option("--format", o.format, "shard format (default ntriples)")
        ->check(CLI::IsMember(kRdfFormats));
    namespace_opt(ingest);
    registry_opt(ingest);
    ingest->add_option("--shard-size", o.shard_size, "records per shard (default 1000)")
        ->check(CLI::PositiveNumber);
    parallelism_opt(ingest);
    skip_opt(ingest);

    auto* check = sub("link-check", "Check that external links in a graph resolve.");
    check->add_option("graph", o.input, "RDF file (.ttl or .nt)")->required();
    check->add_flag("--offline", o.offline, "report notChecked instead of fetching");
    output_opt(check);
    registry_opt(check);
    parallelism_opt(check);

    auto* stats = sub("stats", "Print the statistics of an ingest run.");
    stats->add_option("path", o.input, "ingest output directory or its stats.tsv")->required();
    output_opt(stats);
  }

  CLI::App* sub(const char* name, const char* desc) {
    auto* s = app.add_subcommand(name, desc);
    s->fallthrough();
    subs.push_back(s);
    return s;
  }
  void rdf_format_opt(CLI::App* s) {
    s->add_option("--format", o.format, "turtle or ntriples (default: from -o, else turtle)")
        ->check(CLI::IsMember(kRdfFormats));
  }
  void output_opt(CLI::App* s) {
    s->add_option("-o,--output", o.output, "output file (default: standard output)");
  }
  void namespace_opt(CLI::App* s) {
    s->add_option("--namespace", o.ns, "ontology namespace IRI");
  }
  void registry_opt(CLI::App* s) {
    s->add_option("--registry", o.registry, "link registry file (prefix<TAB>baseIri<TAB>idPattern)");
  }
  void skip_opt(CLI::App* s) {
    // A callback so that the copy on the other subcommand cannot reset the value.
    s->add_flag_callback("--skip-errors", [this] { o.skip_errors = 1; },
                         "skip failing records and report them");
  }
  void parallelism_opt(CLI::App* s) {
    s->add_option("--parallelism", o.parallelism, "worker threads")->check(CLI::PositiveNumber);
  }

  std::string full_help() const {
    std::string h = app.help();
    for (const auto* s : subs) h += "\n" + s->help();
    return h;
  }
};

int exit_code_for(ErrorCode c) { return c == ErrorCode::InvalidConfig ? kExitUsage : kExitFailure; }

}  // namespace

CliContext process_context() {
  CliContext ctx;
  if (const char* v = std::getenv("OME_RDF_CONFIG")) ctx.config_env = v;
  return ctx;
}

std::string help_text() { return Parser().full_help(); }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const CliContext& ctx) {
  Parser p;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    p.app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    // help() shows the selected subcommand's help when there is one.
    out << (p.app.get_subcommands().empty() ? p.full_help() : p.app.help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << p.full_help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "omerdf " << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "omerdf: " << e.what() << "\nRun 'omerdf --help' for usage.\n";
    return kExitUsage;
  }

  const auto& o = p.o;
  const auto* chosen = p.app.get_subcommands().front();
  const std::string name = chosen->get_name();
  try {
    const auto s = resolve(o, ctx);
    if (name == "schema-export") return cmd_schema_export(o, s, out, err);
    if (name == "translate-xsd") return cmd_translate_xsd(o, s, out, err);
    if (name == "convert") return cmd_convert(o, s, out, err);
    if (name == "validate") return cmd_validate(o, s, out, err);
    if (name == "ingest") return cmd_ingest(o, s, out, err);
    if (name == "link-check") return cmd_link_check(o, s, out, err, ctx);
    if (name == "stats") return cmd_stats(o, s, out, err);
  } catch (const Error& e) {
    err << "omerdf " << name << ": " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "omerdf " << name << ": " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return run(args, out, err, process_context());
}

}  // namespace omerdf::cli

#include "omerdf/ingest/ingest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <exception>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "omerdf/ome/ome.hpp"

namespace omerdf::ingest {

namespace fs = std::filesystem;

std::vector<InputPair> scan_inputs(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::DirNotFound, "input directory not found: " + dir.string());
  }
  std::vector<InputPair> out;
  for (fs::recursive_directory_iterator it(dir, ec), end; it != end; it.increment(ec)) {
    if (ec) throw Error(ErrorCode::IoError, "cannot list " + dir.string() + ": " + ec.message());
    if (!it->is_regular_file(ec)) continue;
    const auto name = it->path().filename().string();
    constexpr std::string_view kOme = ".ome.xml";
    if (name.size() <= kOme.size() || !name.ends_with(kOme)) continue;
    InputPair p{it->path(), std::nullopt};
    auto side = it->path().parent_path() / (name.substr(0, name.size() - kOme.size()) + ".ann.tsv");
    if (fs::is_regular_file(side, ec)) p.sidecar = std::move(side);
    out.push_back(std::move(p));
  }
  if (ec) throw Error(ErrorCode::IoError, "cannot list " + dir.string() + ": " + ec.message());
  std::sort(out.begin(), out.end(), [](const InputPair& a, const InputPair& b) {
    return a.ome.generic_string() < b.ome.generic_string();
  });
  return out;
}

std::size_t default_parallelism() {
  return std::max(1u, std::thread::hardware_concurrency());
}

void IngestConfig::check() const {
  if (shard_size == 0) throw Error(ErrorCode::InvalidConfig, "shard size must be at least 1");
  if (parallelism == 0) throw Error(ErrorCode::InvalidConfig, "parallelism must be at least 1");
}

namespace {

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "cannot read " + p.string());
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + p.string());
}

std::string sha256(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::IoError, "SHA-256 digest failed");
  }
  return std::string(reinterpret_cast<const char*>(md), len);
}

struct RecordOutcome {
  std::string image_id;
  std::optional<mapper::MappedRecord> record;
  std::string digest;
  ErrorCode code = ErrorCode::IoError;
  std::string message;
};

struct FileOutcome {
  std::vector<RecordOutcome> records;
  std::exception_ptr fatal;  // I/O failure; always propagated
};

RecordOutcome failed(std::string image_id, const Error& e) {
  RecordOutcome r;
  r.image_id = std::move(image_id);
  r.code = e.code();
  r.message = e.what();
  return r;
}

class Converter {
 public:
  Converter(const ontology::OntologyRegistry& reg, const mapper::MintingPolicy& policy,
            const links::LinkRegistry& links)
      : reg_(reg), policy_(policy), links_(links) {}

  FileOutcome convert(const InputPair& in) const {
    FileOutcome out;
    try {
      const auto ome_text = read_text(in.ome);
      const auto side_text = in.sidecar ? std::optional(read_text(*in.sidecar)) : std::nullopt;
      convert_text(ome_text, side_text, out.records);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::IoError) throw;
      out.fatal = std::current_exception();
    }
    return out;
  }

 private:
  void convert_text(const std::string& ome_text, const std::optional<std::string>& side_text,
                    std::vector<RecordOutcome>& out) const {
    ome::OmeDocument doc;
    try {
      doc = ome::parse_ome_document(ome_text);
    } catch (const Error& e) {
      out.push_back(failed("-", e));
      return;
    }
    std::vector<ome::ImageRecord> pairs;
    try {
      const auto anns = side_text ? ome::parse_sidecar(*side_text) : std::vector<ome::EmAnnotation>{};
      pairs = ome::join_annotations(doc, anns);
    } catch (const Error& e) {
      // The sidecar spoils the whole file: every image counts as skipped.
      if (doc.images.empty()) out.push_back(failed("-", e));
      for (const auto& img : doc.images) out.push_back(failed(img.id, e));
      return;
    }
    for (const auto& p : pairs) {
      try {
        auto rec = mapper::map_pair(p.image, p.annotation, reg_, policy_, links_, &doc);
        RecordOutcome r;
        r.image_id = p.image.id;
        r.digest = sha256(rdf::serialize(rec.graph, rdf::Format::NTriples));
        r.record = std::move(rec);
        out.push_back(std::move(r));
      } catch (const Error& e) {
        out.push_back(failed(p.image.id, e));
      }
    }
  }

  const ontology::OntologyRegistry& reg_;
  const mapper::MintingPolicy& policy_;
  const links::LinkRegistry& links_;
};

/// Accumulates kept records into fixed-size shards and writes them.
class ShardWriter {
 public:
  ShardWriter(const IngestConfig& cfg, IngestResult& result) : cfg_(cfg), result_(result) {}

  void add(const mapper::MappedRecord& rec) {
    for (const auto& [name, ns] : rec.graph.prefixes()) {
      if (!graph_.prefixes().count(name)) graph_.set_prefix(name, ns);
    }
    for (const auto& t : rec.graph.triples()) graph_.insert(t);
    if (++records_ == cfg_.shard_size) flush();
  }

  void flush() {
    if (records_ == 0) return;
    char name[32];
    std::snprintf(name, sizeof name, "shard-%05zu.%s", result_.shards.size(),
                  cfg_.format == rdf::Format::NTriples ? "nt" : "ttl");
    const auto path = cfg_.output_dir / name;
    write_text(path, rdf::serialize(graph_, cfg_.format));
    result_.stats.triples_emitted += graph_.size();
    result_.shards.push_back(path);
    graph_ = rdf::Graph{};
    records_ = 0;
  }

 private:
  const IngestConfig& cfg_;
  IngestResult& result_;
  rdf::Graph graph_;
  std::size_t records_ = 0;
};

void prepare_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorCode::IoError, "cannot create output directory " + dir.string());
  }
  static const std::regex stale(R"(shard-\d{5}\.(nt|ttl))");
  for (const auto& e : fs::directory_iterator(dir, ec)) {
    if (e.is_regular_file() && std::regex_match(e.path().filename().string(), stale)) {
      fs::remove(e.path(), ec);
      if (ec) throw Error(ErrorCode::IoError, "cannot remove " + e.path().string());
    }
  }
}

}  // namespace

IngestResult ingest(const IngestConfig& config, const ontology::OntologyRegistry& registry,
                    const mapper::MintingPolicy& policy, const links::LinkRegistry& links) {
  const auto start = std::chrono::steady_clock::now();
  config.check();
  const auto inputs = scan_inputs(config.input_dir);
  prepare_output_dir(config.output_dir);

  IngestResult result;
  ShardWriter shards(config, result);
  const Converter converter(registry, policy, links);
  std::unordered_set<std::string> seen;
  auto& stats = result.stats;

  // Convert a window of files in parallel, then commit it in input order.
  const std::size_t window = std::max<std::size_t>(64, config.parallelism * 16);
  std::vector<FileOutcome> outcomes;
  for (std::size_t base = 0; base < inputs.size(); base += window) {
    const auto n = std::min(window, inputs.size() - base);
    outcomes.assign(n, FileOutcome{});
    std::vector<std::exception_ptr> crashes(n);
    {
      std::atomic<std::size_t> next{0};
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < std::min(config.parallelism, n); ++w) {
        pool.emplace_back([&] {
          for (auto i = next++; i < n; i = next++) {
            try {
              outcomes[i] = converter.convert(inputs[base + i]);
            } catch (...) {
              crashes[i] = std::current_exception();
            }
          }
        });
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (crashes[i]) std::rethrow_exception(crashes[i]);
      if (outcomes[i].fatal) std::rethrow_exception(outcomes[i].fatal);
      const auto rel = fs::relative(inputs[base + i].ome, config.input_dir).generic_string();
      ++stats.files_scanned;
      for (auto& r : outcomes[i].records) {
        if (!r.record) {
          if (!config.skip_errors) {
            throw Error(r.code, rel + ": image '" + r.image_id + "': " + r.message);
          }
          ++stats.images_skipped;
          result.errors.push_back({rel, r.image_id, r.code, r.message});
          continue;
        }
        if (!seen.insert(r.digest).second) {
          ++stats.duplicates_dropped;
          continue;
        }
        ++stats.images_converted;
        stats.external_links_emitted += r.record->external_links.size();
        shards.add(*r.record);
      }
    }
  }
  shards.flush();

  stats.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  write_text(config.output_dir / "errors.tsv", errors_tsv(result.errors));
  write_text(config.output_dir / "stats.tsv", stats_tsv(stats));
  return result;
}

namespace {

std::vector<std::pair<const char*, std::size_t>> fields(const IngestStats& s) {
  return {{"filesScanned", s.files_scanned},
          {"imagesConverted", s.images_converted},
          {"imagesSkipped", s.images_skipped},
          {"duplicatesDropped", s.duplicates_dropped},
          {"triplesEmitted", s.triples_emitted},
          {"externalLinksEmitted", s.external_links_emitted},
          {"wallTimeMs", static_cast<std::size_t>(s.wall_time.count())}};
}

std::string render(const IngestStats& s, std::string_view sep) {
  std::string out;
  for (const auto& [k, v] : fields(s)) {
    out += k;
    out += sep;
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

}  // namespace

std::string stats_report(const IngestStats& stats) { return render(stats, ": "); }

std::string stats_tsv(const IngestStats& stats) { return render(stats, "\t"); }

IngestStats parse_stats_tsv(std::string_view text) {
  IngestStats s;
  std::size_t* slots[] = {&s.files_scanned,   &s.images_converted,   &s.images_skipped,
                          &s.duplicates_dropped, &s.triples_emitted, &s.external_links_emitted};
  const auto keys = fields(s);
  std::vector<bool> found(keys.size(), false);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    const auto key = line.substr(0, tab);
    const auto it = std::find_if(keys.begin(), keys.end(), [&](const auto& kv) { return key == kv.first; });
    if (tab == std::string_view::npos || it == keys.end()) {
      throw Error(ErrorCode::BadValue, "unknown stats line '" + std::string(line) + "'", line_no,
                  std::nullopt);
    }
    const auto value = line.substr(tab + 1);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
      throw Error(ErrorCode::BadValue, "stats value for " + std::string(key) + " is not a count",
                  line_no, std::nullopt);
    }
    const auto idx = static_cast<std::size_t>(it - keys.begin());
    found[idx] = true;
    if (idx < std::size(slots)) {
      *slots[idx] = v;
    } else {
      s.wall_time = std::chrono::milliseconds(v);
    }
  }
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (!found[i]) throw Error(ErrorCode::BadValue, std::string("stats key missing: ") + keys[i].first);
  }
  return s;
}

std::string errors_tsv(const std::vector<IngestError>& errors) {
  std::string out;
  for (const auto& e : errors) {
    out += e.file;
    out += '\t';
    out += e.image_id;
    out += '\t';
    out += to_string(e.code);
    out += '\n';
  }
  return out;
}

}  // namespace omerdf::ingest

#include "omerdf/synth/synth.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <random>

#include "omerdf/error.hpp"

namespace omerdf::synth {

namespace {

using Rng = std::mt19937_64;

template <class T, std::size_t N>
const T& choose(Rng& rng, const std::array<T, N>& items) {
  return items[std::uniform_int_distribution<std::size_t>(0, N - 1)(rng)];
}

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::string printf_string(const char* fmt, auto... args) {
  char buf[128];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

/// Decimal with `scale` fractional digits from an integer count of units.
ome::Decimal decimal(long units, int scale) {
  long div = 1;
  for (int i = 0; i < scale; ++i) div *= 10;
  const auto sign = units < 0 ? "-" : "";
  units = std::abs(units);
  auto text = printf_string("%s%ld.%0*ld", sign, units / div, scale, units % div);
  return *ome::Decimal::parse(text);
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr std::array<const char*, 6> kFirst = {"Kenji", "Hana", "Aiko", "Tomas", "Priya", "Lea"};
constexpr std::array<const char*, 6> kLast = {"Mori", "Sato", "D'Souza", "Okafor", "Lindqvist",
                                              "Brown & Co"};
constexpr std::array<const char*, 5> kTissues = {"liver", "kidney", "cortex", "retina", "muscle"};
constexpr std::array<const char*, 3> kEmModels = {"FE-SEM 7100", "JSM-7900F", "Helios G4"};
constexpr std::array<const char*, 2> kOpticalModels = {"IX-81", "Axio Observer"};
constexpr std::array<const char*, 3> kEmStains = {"osmium", "uranyl acetate", "lead citrate"};
constexpr std::array<const char*, 2> kOpticalStains = {"hematoxylin-eosin", "DAPI"};
constexpr std::array<const char*, 3> kGuns = {"field-emission", "thermionic", "cold field-emission"};
constexpr std::array<const char*, 6> kPhenotypes = {
    "liver cells", "tissue structure", "lipid droplet accumulation", "mitochondrial swelling",
    "fibrosis", "normal morphology"};

}  // namespace

std::size_t file_count(const SynthOptions& opts) {
  const auto per = std::max<std::size_t>(1, opts.images_per_file);
  return (opts.records + per - 1) / per;
}

SynthFile make_file(const SynthOptions& opts, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  Rng rng(seq);
  const auto per = std::max<std::size_t>(1, opts.images_per_file);
  const auto images = std::min(per, opts.records - std::min(opts.records, index * per));

  SynthFile f;
  f.stem = opts.files_per_dir == 0
               ? printf_string("rec-%06zu", index)
               : printf_string("batch-%03zu/rec-%06zu", index / opts.files_per_dir, index);
  f.counts.files = 1;
  f.counts.images = images;

  const bool em = chance(rng, opts.em_fraction);
  const auto ex_id = printf_string("Experimenter:%06zu", index);
  const auto ins_id = printf_string("Instrument:%06zu", index);
  std::string xml =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<OME xmlns=\"http://www.openmicroscopy.org/Schemas/OME/2015-01\">\n";
  xml += "  <Experimenter ID=\"" + ex_id + "\" FirstName=\"" + xml_escape(choose(rng, kFirst)) +
         "\" LastName=\"" + xml_escape(choose(rng, kLast)) + "\"/>\n";
  xml += "  <Instrument ID=\"" + ins_id + "\">\n    <Microscope Type=\"" +
         (em ? "Electron" : "Inverted") + "\" Model=\"" +
         xml_escape(em ? choose(rng, kEmModels) : choose(rng, kOpticalModels)) +
         "\"/>\n  </Instrument>\n";

  std::vector<ome::EmAnnotation> anns;
  for (std::size_t k = 0; k < images; ++k) {
    const auto id = printf_string("SYN-%06zu-%zu", index, k);
    const auto tissue = choose(rng, kTissues);
    const auto size = 512 << uniform(rng, 0, 3);
    const auto px = em ? decimal(uniform(rng, 1, 20), 3) : decimal(uniform(rng, 10, 50), 2);
    xml += "  <Image ID=\"" + id + "\" Name=\"synthetic " + tissue + " " + std::to_string(k) +
           "\">\n";
    xml += printf_string("    <AcquisitionDate>2015-%02d-%02dT%02d:%02d:00+09:00</AcquisitionDate>\n",
                         uniform(rng, 1, 12), uniform(rng, 1, 28), uniform(rng, 0, 23),
                         uniform(rng, 0, 59));
    xml += "    <ExperimenterRef ID=\"" + ex_id + "\"/>\n";
    xml += "    <InstrumentRef ID=\"" + ins_id + "\"/>\n";
    xml += "    <Pixels ID=\"Pixels:" + id + "\" DimensionOrder=\"XYZCT\" Type=\"uint16\" SizeX=\"" +
           std::to_string(size) + "\" SizeY=\"" + std::to_string(size) + "\" SizeZ=\"" +
           std::to_string(uniform(rng, 1, 5)) + "\" SizeC=\"" + std::to_string(uniform(rng, 1, 3)) +
           "\" SizeT=\"1\" PhysicalSizeX=\"" + px.lexical + "\" PhysicalSizeY=\"" + px.lexical +
           "\"/>\n  </Image>\n";

    // EM images always carry their acquisition parameters so the output validates.
    if (!em && !chance(rng, 0.8)) continue;
    ome::EmAnnotation a;
    a.image_id = id;
    a.sample_id = printf_string("S%06zu-%zu", index, k);
    if (chance(rng, 0.8)) a.container_id = printf_string("GRID-%04d", uniform(rng, 1, 9999));
    if (chance(rng, 0.75)) {
      a.strain_id = printf_string("rikenbrc_mouse:RBRC%05d", uniform(rng, 1, 99999));
      ++f.counts.strain_links;
    }
    a.staining_method = em ? choose(rng, kEmStains) : choose(rng, kOpticalStains);
    if (em) {
      a.acceleration_voltage_kv = decimal(uniform(rng, 5, 300), 1);
      a.electron_gun_type = choose(rng, kGuns);
      a.electron_wavelength_pm = decimal(uniform(rng, 70, 548), 1);
      ++f.counts.em_images;
    }
    const auto n_obs = uniform(rng, 0, 3);
    for (int j = 0; j < n_obs; ++j) {
      const std::string obs = choose(rng, kPhenotypes);
      if (std::find(a.phenotype_observations.begin(), a.phenotype_observations.end(), obs) ==
          a.phenotype_observations.end()) {
        a.phenotype_observations.push_back(obs);
      }
    }
    anns.push_back(std::move(a));
  }
  xml += "</OME>\n";
  f.ome_xml = std::move(xml);
  f.counts.annotated_images = anns.size();
  if (!anns.empty()) {
    f.sidecar = ome::format_sidecar(anns);
    f.counts.sidecars = 1;
  }
  return f;
}

namespace {

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + p.string());
}

}  // namespace

SynthLedger write_corpus(const std::filesystem::path& dir, const SynthOptions& opts) {
  SynthLedger total;
  const auto n = file_count(opts);
  for (std::size_t i = 0; i < n; ++i) {
    const auto f = make_file(opts, i);
    const auto base = dir / f.stem;
    std::error_code ec;
    std::filesystem::create_directories(base.parent_path(), ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + base.parent_path().string());
    write_text(base.string() + ".ome.xml", f.ome_xml);
    if (f.sidecar) write_text(base.string() + ".ann.tsv", *f.sidecar);
    total.files += f.counts.files;
    total.sidecars += f.counts.sidecars;
    total.images += f.counts.images;
    total.em_images += f.counts.em_images;
    total.annotated_images += f.counts.annotated_images;
    total.strain_links += f.counts.strain_links;
  }
  return total;
}

std::string format_ledger(const SynthLedger& l) {
  std::string out;
  auto line = [&](const char* k, std::size_t v) {
    out += k;
    out += '\t';
    out += std::to_string(v);
    out += '\n';
  };
  line("files", l.files);
  line("sidecars", l.sidecars);
  line("images", l.images);
  line("emImages", l.em_images);
  line("annotatedImages", l.annotated_images);
  line("strainLinks", l.strain_links);
  return out;
}

std::vector<ome::EmAnnotation> random_annotations(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  constexpr std::array<const char*, 6> kIds = {"S", "sample 7", "試料", "µ-grid", "a.b_c", "x/y"};
  constexpr std::array<const char*, 5> kObs = {"liver cells", "tissue  structure", "Zellkern",
                                               "vacuole, large", "ü"};
  std::vector<ome::EmAnnotation> out;
  for (std::size_t i = 0; i < n; ++i) {
    ome::EmAnnotation a;
    a.image_id = "img-" + std::to_string(i);
    a.sample_id = std::string(choose(rng, kIds)) + std::to_string(uniform(rng, 0, 99));
    if (chance(rng, 0.5)) a.container_id = "GRID-" + std::to_string(uniform(rng, 0, 9));
    if (chance(rng, 0.5)) a.strain_id = "rikenbrc_mouse:RBRC" + std::to_string(uniform(rng, 1, 999));
    if (chance(rng, 0.5)) a.staining_method = choose(rng, kEmStains);
    if (chance(rng, 0.5)) a.acceleration_voltage_kv = decimal(uniform(rng, -50, 20000), uniform(rng, 0, 3));
    if (chance(rng, 0.5)) a.electron_gun_type = choose(rng, kGuns);
    if (chance(rng, 0.5)) a.electron_wavelength_pm = decimal(uniform(rng, 1, 999), 2);
    const auto n_obs = uniform(rng, 0, 4);
    for (int j = 0; j < n_obs; ++j) a.phenotype_observations.emplace_back(choose(rng, kObs));
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace omerdf::synth

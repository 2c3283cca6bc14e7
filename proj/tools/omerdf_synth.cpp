#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "omerdf/error.hpp"
#include "omerdf/synth/synth.hpp"

// Writes a synthetic OME-XML + sidecar corpus and prints its ledger.
int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic OME-XML + sidecar corpus.", "omerdf_synth"};
  omerdf::synth::SynthOptions opts;
  opts.records = 20000;
  std::string out_dir;
  std::string ledger_path;
  app.add_option("-o,--output", out_dir, "output directory")->required();
  app.add_option("--records", opts.records, "number of images (default 20000)");
  app.add_option("--seed", opts.seed, "random seed (default 1)");
  app.add_option("--images-per-file", opts.images_per_file, "images per OME-XML file (default 1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--em-fraction", opts.em_fraction, "share of electron-microscope files")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--files-per-dir", opts.files_per_dir, "files per subdirectory, 0 for flat");
  app.add_option("--ledger", ledger_path, "also write the ledger (key<TAB>value) here");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    const auto ledger = omerdf::synth::write_corpus(out_dir, opts);
    const auto text = omerdf::synth::format_ledger(ledger);
    std::cout << text;
    if (!ledger_path.empty()) {
      std::ofstream f(ledger_path, std::ios::binary);
      f << text;
      if (!f) throw omerdf::Error(omerdf::ErrorCode::IoError, "cannot write " + ledger_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "omerdf_synth: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

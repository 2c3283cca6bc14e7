#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace omerdf::test_support {

inline std::string data_path(const std::string& name) {
  return std::string(OMERDF_DATA_DIR) + "/" + name;
}

inline std::string fixture_path(const std::string& name) {
  return std::string(OMERDF_FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace omerdf::test_support

#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "cts/io.hpp"

namespace cts::testing {

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(CTS_FIXTURE_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline TypeStructure load_fixture(const std::string& name) {
  return io::parse_structure(read_fixture(name));
}

}  // namespace cts::testing

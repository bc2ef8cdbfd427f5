#pragma once

#include <string>

#include "cycpp/pipeline.hpp"

inline std::string fixture(const std::string& name) {
  return cycpp::read_file(std::string(CYCPP_FIXTURE_DIR) + "/" + name);
}

#pragma once

#include <filesystem>
#include <string_view>

#include "ttp/kernels.hpp"

namespace ttp {

/// Three-arm dataset read from CSV rows `arm,v1,...,vd` with arm one of
/// current, historical, treatment. A first line whose leading field is not
/// an arm label is taken as a header.
struct Dataset {
  Sample current;
  Sample historical;
  Sample treatment;
  bool had_header = false;
};

Dataset parse_dataset(std::string_view text, std::string_view origin = "<csv>");
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace ttp

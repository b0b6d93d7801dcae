#pragma once

#include "gazegrasp/gaze.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gazegrasp {

// Line-delimited gaze records: {"t": s, "u": px, "v": px, "valid": bool}, strictly
// increasing t. Blank lines are skipped. Errors carry the 1-based line number.
std::vector<GazeSample> parse_trace(std::string_view text);
std::vector<GazeSample> read_trace(const std::filesystem::path& path);

std::string format_trace(const std::vector<GazeSample>& samples);
void write_trace(const std::filesystem::path& path, const std::vector<GazeSample>& samples);

}  // namespace gazegrasp

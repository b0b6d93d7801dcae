#include "gazegrasp/trace.hpp"

#include "json_util.hpp"

#include <fstream>

namespace gazegrasp {

std::vector<GazeSample> parse_trace(std::string_view text) {
  std::vector<GazeSample> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = "trace line " + std::to_string(line_no);
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (!rec.is_object()) throw ParseError(where + ": expected object");
    GazeSample s;
    try {
      s.t = json_util::require<double>(rec, "t");
      s.px.u = json_util::require<double>(rec, "u");
      s.px.v = json_util::require<double>(rec, "v");
      s.valid = json_util::require<bool>(rec, "valid");
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (!out.empty() && !(s.t > out.back().t)) throw ParseError(where + ": t must be strictly increasing");
    out.push_back(s);
  }
  return out;
}

std::vector<GazeSample> read_trace(const std::filesystem::path& path) { return parse_trace(json_util::read_file(path)); }

std::string format_trace(const std::vector<GazeSample>& samples) {
  std::string out;
  for (const auto& s : samples) {
    out += nlohmann::json{{"t", s.t}, {"u", s.px.u}, {"v", s.px.v}, {"valid", s.valid}}.dump();
    out += '\n';
  }
  return out;
}

void write_trace(const std::filesystem::path& path, const std::vector<GazeSample>& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << format_trace(samples);
}

}  // namespace gazegrasp

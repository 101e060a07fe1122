#include "ttp/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ttp/error.hpp"

namespace ttp {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

Dataset parse_dataset(std::string_view text, std::string_view origin) {
  std::vector<double> flat[3];
  std::size_t dim = 0;
  bool header = false;
  bool first = true;
  std::size_t lineno = 0;

  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const std::string where = std::string(origin) + ":" + std::to_string(lineno);
    const auto fields = split(body);
    const auto arm = parse_arm(fields[0]);
    if (!arm) {
      if (first) {
        header = true;
        first = false;
        continue;
      }
      fail(ErrorKind::ParseError, where + ": unknown arm label '" + std::string(fields[0]) +
                                      "' (expected current, historical or treatment)");
    }
    first = false;
    if (fields.size() < 2) fail(ErrorKind::ParseError, where + ": row has no value columns");
    if (dim == 0) {
      dim = fields.size() - 1;
    } else if (fields.size() - 1 != dim) {
      fail(ErrorKind::ParseError, where + ": expected " + std::to_string(dim) +
                                      " value columns, found " + std::to_string(fields.size() - 1));
    }
    auto& dest = flat[static_cast<int>(*arm)];
    for (std::size_t c = 1; c < fields.size(); ++c) {
      const std::string_view f = fields[c];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
        fail(ErrorKind::ParseError, where + ", column " + std::to_string(c + 1) +
                                        ": cannot parse '" + std::string(f) + "' as a number");
      }
      if (!std::isfinite(v)) {
        fail(ErrorKind::ParseError, where + ", column " + std::to_string(c + 1) +
                                        ": non-finite value '" + std::string(f) + "'");
      }
      dest.push_back(v);
    }
  }

  for (Arm a : {Arm::Current, Arm::Historical, Arm::Treatment}) {
    if (flat[static_cast<int>(a)].empty()) {
      fail(ErrorKind::ParseError,
           std::string(origin) + ": no rows for arm '" + std::string(to_string(a)) + "'");
    }
  }
  return {Sample(Arm::Current, dim, std::move(flat[0])),
          Sample(Arm::Historical, dim, std::move(flat[1])),
          Sample(Arm::Treatment, dim, std::move(flat[2])), header};
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open dataset " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), path.string());
}

}  // namespace ttp

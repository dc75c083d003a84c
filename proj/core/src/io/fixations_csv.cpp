#include "gazedoc/io/fixations_csv.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>

#include "gazedoc/error.hpp"
#include "gazedoc/io/atomic_file.hpp"

namespace gazedoc::io {
namespace {

constexpr std::array<std::string_view, 6> kColumns = {
    "image_id", "subject_id", "fix_index", "x_px", "y_px", "duration_ms"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
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

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

double parse_number(std::string_view field, std::string_view column, std::string_view source,
                    std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() ||
      !std::isfinite(v)) {
    throw ValidationError(where(source, line) + "non-numeric " + std::string(column) +
                          " '" + std::string(field) + "'");
  }
  return v;
}

}  // namespace

std::vector<Scanpath> parse_fixations(std::string_view text, std::string_view source) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::size_t pos = 0;
  std::size_t line_no = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= text.size()) return false;
    const std::size_t nl = text.find('\n', pos);
    line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    return true;
  };

  std::string_view line;
  bool have_header = false;
  while (next_line(line)) {
    if (!trim(line).empty()) {
      have_header = true;
      break;
    }
  }
  if (!have_header) throw ValidationError(std::string(source) + ": missing header row");
  const auto header = split(line);
  std::array<std::size_t, kColumns.size()> col{};
  for (std::size_t c = 0; c < kColumns.size(); ++c) {
    const auto it = std::find(header.begin(), header.end(), kColumns[c]);
    if (it == header.end()) {
      throw ValidationError(std::string(source) + ": missing column '" +
                            std::string(kColumns[c]) + "'");
    }
    col[c] = static_cast<std::size_t>(it - header.begin());
  }

  std::map<std::pair<std::string, std::string>, std::vector<Fixation>> groups;
  while (next_line(line)) {
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw ValidationError(where(source, line_no) + "expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
    }
    const std::string_view image = fields[col[0]];
    const std::string_view subject = fields[col[1]];
    if (image.empty() || subject.empty()) {
      throw ValidationError(where(source, line_no) + "empty image_id or subject_id");
    }
    const double index = parse_number(fields[col[2]], kColumns[2], source, line_no);
    if (index != std::floor(index) || index < 0 || index > 1e9) {
      throw ValidationError(where(source, line_no) + "fix_index must be a non-negative integer");
    }
    Fixation f;
    f.index = static_cast<int>(index);
    f.x = parse_number(fields[col[3]], kColumns[3], source, line_no);
    f.y = parse_number(fields[col[4]], kColumns[4], source, line_no);
    f.duration_ms = parse_number(fields[col[5]], kColumns[5], source, line_no);
    if (f.duration_ms < 0) {
      throw ValidationError(where(source, line_no) + "negative duration_ms");
    }
    groups[{std::string(image), std::string(subject)}].push_back(f);
  }

  std::vector<Scanpath> out;
  for (auto& [key, fixations] : groups) {
    std::stable_sort(fixations.begin(), fixations.end(),
                     [](const Fixation& a, const Fixation& b) { return a.index < b.index; });
    for (std::size_t i = 1; i < fixations.size(); ++i) {
      if (fixations[i].index == fixations[i - 1].index) {
        throw ValidationError(std::string(source) + ": duplicate fix_index " +
                              std::to_string(fixations[i].index) + " for image '" +
                              key.first + "', subject '" + key.second + "'");
      }
    }
    out.push_back({key.first, key.second, std::move(fixations)});
  }
  return out;
}

std::vector<Scanpath> load_fixations(const std::filesystem::path& path) {
  return parse_fixations(read_file(path), path.string());
}

std::string format_fixations(std::span<const Scanpath> scanpaths) {
  std::string out = "image_id,subject_id,fix_index,x_px,y_px,duration_ms\n";
  char buf[128];
  for (const Scanpath& s : scanpaths) {
    for (const Fixation& f : s.fixations) {
      std::snprintf(buf, sizeof buf, ",%d,%.6g,%.6g,%.6g\n", f.index, f.x, f.y, f.duration_ms);
      out += s.image_id;
      out += ',';
      out += s.subject_id;
      out += buf;
    }
  }
  return out;
}

}  // namespace gazedoc::io

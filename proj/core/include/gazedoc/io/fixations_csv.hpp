#ifndef GAZEDOC_IO_FIXATIONS_CSV_HPP_
#define GAZEDOC_IO_FIXATIONS_CSV_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gazedoc/scanpath.hpp"

namespace gazedoc::io {

// Header: image_id,subject_id,fix_index,x_px,y_px,duration_ms (any column
// order, extra columns ignored). Returns one scanpath per (image, subject),
// ordered by image then subject, fixations sorted by fix_index. Malformed
// rows raise ValidationError with the line number.
std::vector<Scanpath> parse_fixations(std::string_view text,
                                      std::string_view source = "<memory>");
std::vector<Scanpath> load_fixations(const std::filesystem::path& path);

// Canonical form: the header above, numbers at 6 significant digits.
std::string format_fixations(std::span<const Scanpath> scanpaths);

}  // namespace gazedoc::io

#endif  // GAZEDOC_IO_FIXATIONS_CSV_HPP_

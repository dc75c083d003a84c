#include "gazedoc/io/atomic_file.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "gazedoc/error.hpp"

namespace gazedoc::io {

namespace fs = std::filesystem;

void write_file_atomic(const fs::path& path, std::string_view bytes) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " +
                          ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp, ec);
      throw IoError("write failed: " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                  ec.message());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return ss.str();
}

void OutputStage::add(fs::path path, std::string bytes) {
  files_.push_back({std::move(path), std::move(bytes)});
}

void OutputStage::add(std::vector<StagedFile> files) {
  for (auto& f : files) add(std::move(f));
}

void OutputStage::commit() {
  for (const StagedFile& f : files_) write_file_atomic(f.path, f.bytes);
  files_.clear();
}

}  // namespace gazedoc::io

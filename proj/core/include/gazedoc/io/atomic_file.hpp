#ifndef GAZEDOC_IO_ATOMIC_FILE_HPP_
#define GAZEDOC_IO_ATOMIC_FILE_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gazedoc::io {

// Writes to a temporary sibling and renames it over `path`, creating parent
// directories. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

// Throws IoError when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

struct StagedFile {
  std::filesystem::path path;
  std::string bytes;
};

// Collects outputs in memory so that a failing command leaves nothing
// behind; commit() writes them in insertion order.
class OutputStage {
 public:
  void add(std::filesystem::path path, std::string bytes);
  void add(StagedFile file) { add(std::move(file.path), std::move(file.bytes)); }
  void add(std::vector<StagedFile> files);
  void commit();
  const std::vector<StagedFile>& files() const { return files_; }

 private:
  std::vector<StagedFile> files_;
};

}  // namespace gazedoc::io

#endif  // GAZEDOC_IO_ATOMIC_FILE_HPP_

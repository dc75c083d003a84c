#include "gazedoc/io/atomic_file.hpp"

#include <gtest/gtest.h>

#include "gazedoc/error.hpp"
#include "scratch_dir.hpp"

using namespace gazedoc;
using namespace gazedoc::io;

TEST(AtomicFile, WritesCreatesParentsAndReplaces) {
  ScratchDir dir;
  const auto p = dir / "a/b/c.txt";
  write_file_atomic(p, "first");
  EXPECT_EQ(read_file(p), "first");
  write_file_atomic(p, std::string("sec\0nd", 6));
  EXPECT_EQ(read_file(p), std::string("sec\0nd", 6));
  int files = 0;
  for (const auto& e : std::filesystem::directory_iterator(p.parent_path())) {
    (void)e;
    ++files;
  }
  EXPECT_EQ(files, 1);
}

TEST(AtomicFile, MissingFileIsIoError) {
  ScratchDir dir;
  EXPECT_THROW(read_file(dir / "nope"), IoError);
}

TEST(OutputStage, NothingWrittenBeforeCommit) {
  ScratchDir dir;
  OutputStage stage;
  stage.add(dir / "x.txt", "1");
  stage.add(std::vector<StagedFile>{{dir / "y/z.txt", "2"}});
  EXPECT_FALSE(std::filesystem::exists(dir / "x.txt"));
  ASSERT_EQ(stage.files().size(), 2u);
  stage.commit();
  EXPECT_EQ(read_file(dir / "x.txt"), "1");
  EXPECT_EQ(read_file(dir / "y/z.txt"), "2");
}

#include <gtest/gtest.h>

#include "apifrag/error.hpp"
#include "apifrag/util.hpp"
#include "fixtures.hpp"

namespace apifrag {
namespace {

TEST(Csv, SplitAndEscape) {
  EXPECT_EQ(split_csv_line("a,b,,c"), (std::vector<std::string>{"a", "b", "", "c"}));
  EXPECT_EQ(split_csv_line(R"("x,y","say ""hi""",z)"), (std::vector<std::string>{"x,y", "say \"hi\"", "z"}));
  EXPECT_EQ(split_csv_line(""), (std::vector<std::string>{""}));
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("q\"q"), "\"q\"\"q\"");
  for (const std::string s : {"plain", "a,b", "q\"q", ",\"\","}) EXPECT_EQ(split_csv_line(csv_escape(s))[0], s);
}

TEST(Fnv, KnownVectors) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a("foobar"), 0x85944171f73967e8ULL);
  EXPECT_EQ(hex64(0xabcULL), "0000000000000abc");
}

TEST(Files, ReadWriteAndHash) {
  const testing::TempDir tmp("util");
  const auto p = tmp / "x.txt";
  EXPECT_EQ(file_hash(p), "missing");
  EXPECT_THROW(read_file(p), InputError);
  write_file(p, "foobar");
  EXPECT_EQ(read_file(p), "foobar");
  EXPECT_EQ(file_hash(p), hex64(fnv1a("foobar")));
}

TEST(Trim, Whitespace) {
  EXPECT_EQ(trim("  a b \t\n"), "a b");
  EXPECT_EQ(trim("   "), "");
}

}  // namespace
}  // namespace apifrag

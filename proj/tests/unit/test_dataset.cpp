#include <gtest/gtest.h>

#include "ttp/dataset.hpp"
#include "ttp/error.hpp"

using namespace ttp;

namespace {

std::string message_of(std::string_view text) {
  try {
    parse_dataset(text, "d.csv");
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    return e.what();
  }
  ADD_FAILURE() << "no error";
  return {};
}

}  // namespace

TEST(Dataset, ParsesArmsWithHeader) {
  const Dataset d = parse_dataset(
      "arm,v1,v2\n"
      "current,1,2\n"
      "historical, 3 , 4\n"
      "treatment,5,6\r\n"
      "\n"
      "current,7,8\n");
  EXPECT_TRUE(d.had_header);
  EXPECT_EQ(d.current.size(), 2u);
  EXPECT_EQ(d.current.dim(), 2u);
  EXPECT_EQ(d.current.point(1)[1], 8.0);
  EXPECT_EQ(d.historical.point(0)[0], 3.0);
  EXPECT_EQ(d.treatment.size(), 1u);
}

TEST(Dataset, HeaderIsOptional) {
  const Dataset d = parse_dataset("current,1\nhistorical,2\ntreatment,3\n");
  EXPECT_FALSE(d.had_header);
  EXPECT_EQ(d.current.dim(), 1u);
}

TEST(Dataset, RejectsNonFiniteWithRowNumber) {
  const std::string a = message_of("current,1\nhistorical,nan\ntreatment,3\n");
  EXPECT_NE(a.find("d.csv:2"), std::string::npos) << a;
  const std::string b = message_of("current,1\nhistorical,2\ntreatment,inf\n");
  EXPECT_NE(b.find("d.csv:3"), std::string::npos) << b;
}

TEST(Dataset, RejectsMalformedRows) {
  EXPECT_NE(message_of("current,1\nhistorical,2,3\ntreatment,3\n").find("d.csv:2"), std::string::npos);
  EXPECT_NE(message_of("current,1\ncontrol,2\ntreatment,3\n").find("unknown arm"), std::string::npos);
  EXPECT_NE(message_of("current,1\nhistorical,x\ntreatment,3\n").find("cannot parse"), std::string::npos);
  EXPECT_NE(message_of("current,1\nhistorical,\ntreatment,3\n").find("cannot parse"), std::string::npos);
  EXPECT_NE(message_of("current,1\ntreatment,3\n").find("historical"), std::string::npos);
}

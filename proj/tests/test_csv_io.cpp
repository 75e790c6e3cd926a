#include "verhulst/csv_io.hpp"

#include <sstream>

#include <catch_amalgamated.hpp>

using namespace verhulst;

namespace {

std::string message_of(const std::string& text, bool sort = false) {
  std::istringstream in(text);
  try {
    read_time_series(in, sort);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidData);
    return e.what();
  }
  FAIL("expected InvalidData");
  return {};
}

}  // namespace

TEST_CASE("reads the t,P contract", "[csv]") {
  std::istringstream in("t,P\n0,1\n0.5,1.5e0\r\n1, 2\n\n");
  const TimeSeries s = read_time_series(in);
  REQUIRE(s.size() == 3);
  CHECK(s.points()[1].population == 1.5);
  CHECK(s.points()[2].t == 1.0);
}

TEST_CASE("locates columns by name and ignores extras", "[csv]") {
  std::istringstream in("\xEF\xBB\xBFt,P,R,dPdt\n0,1,9,0.63\n1,2,4,singular\n");
  const TimeSeries s = read_time_series(in);
  REQUIRE(s.size() == 2);
  CHECK(s.points()[1].population == 2.0);

  std::istringstream swapped("P,t\n1,0\n2,1\n");
  CHECK(read_time_series(swapped).points()[1].t == 1.0);
}

TEST_CASE("rejects malformed input with the line number", "[csv]") {
  CHECK_THAT(message_of(""), Catch::Matchers::ContainsSubstring("empty"));
  CHECK_THAT(message_of("t,P\n"), Catch::Matchers::ContainsSubstring("no data rows"));
  CHECK_THAT(message_of("time,pop\n0,1\n"), Catch::Matchers::ContainsSubstring("line 1"));
  CHECK_THAT(message_of("t,P\n0,1\n1,abc\n"), Catch::Matchers::ContainsSubstring("line 3"));
  CHECK_THAT(message_of("t,P\n0,1\n2,2\n1,3\n"), Catch::Matchers::ContainsSubstring("line 4"));
  CHECK_THAT(message_of("t,P\n0,1\n0,2\n"), Catch::Matchers::ContainsSubstring("line 3"));
  CHECK_THAT(message_of("t,P\n0\n"), Catch::Matchers::ContainsSubstring("line 2"));
  CHECK_THAT(message_of("t,P\n0,1,\n1,inf\n"), Catch::Matchers::ContainsSubstring("line 3"));
  CHECK_THAT(message_of("t,P\n0,1\n1,1;\n"), Catch::Matchers::ContainsSubstring("line 3"));
}

TEST_CASE("--sort reorders but still rejects repeated times", "[csv]") {
  std::istringstream in("t,P\n2,3\n0,1\n1,2\n");
  const TimeSeries s = read_time_series(in, true);
  CHECK(s.points()[0].t == 0.0);
  CHECK(s.points()[2].population == 3.0);
  CHECK_THAT(message_of("t,P\n2,3\n0,1\n2,2\n", true), Catch::Matchers::ContainsSubstring("repeated"));
}

TEST_CASE("numbers print with 12 significant digits", "[csv]") {
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(3.138892253337456) == "3.13889225334");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(1.5e-20) == "1.5e-20");
  CHECK(format_number(-2.0 / 3.0) == "-0.666666666667");
}

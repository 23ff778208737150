#include <doctest.h>

#include <sstream>

#include "../support.hpp"
#include "infocontent/csv.hpp"
#include "infocontent/date.hpp"
#include "infocontent/error.hpp"
#include "infocontent/text.hpp"

using namespace infocontent;

TEST_CASE("date parsing is strict") {
  CHECK(Date::parse("2022-08-02") == Date(2022, 8, 2));
  CHECK_FALSE(Date::parse("2022-13-01"));
  CHECK_FALSE(Date::parse("2022-02-30"));
  CHECK_FALSE(Date::parse("2022-2-3"));
  CHECK_FALSE(Date::parse("2022-02-03 "));
  CHECK(Date::parse("2024-02-29"));
  CHECK_FALSE(Date::parse("2023-02-29"));
  CHECK(Date(2022, 8, 2).iso() == "2022-08-02");
  CHECK(Date(2022, 8, 6).is_weekend());
  CHECK_FALSE(Date(2022, 8, 8).is_weekend());
  CHECK(Date(2022, 11, 28).days_since(Date(2022, 8, 2)) == 118);
}

TEST_CASE("trading calendar sorts, dedups and maps dates forward") {
  TradingCalendar cal({Date(2022, 1, 5), Date(2022, 1, 3), Date(2022, 1, 5), Date(2022, 1, 7)});
  REQUIRE(cal.size() == 3);
  CHECK(cal[0] == Date(2022, 1, 3));
  CHECK(cal.index_of(Date(2022, 1, 7)) == 2u);
  CHECK_FALSE(cal.index_of(Date(2022, 1, 6)));
  CHECK(cal.index_on_or_after(Date(2022, 1, 6)) == 2u);
  CHECK(cal.index_on_or_after(Date(2022, 1, 1)) == 0u);
  CHECK_FALSE(cal.index_on_or_after(Date(2022, 1, 8)));
}

TEST_CASE("csv handles quoting, CRLF and BOM") {
  auto t = parse_csv("\xEF\xBB\xBF" "a,b\r\n1,\"x, \"\"y\"\"\nz\"\r\n\r\n2,\r\n", "mem");
  REQUIRE(t.header == std::vector<std::string>{"a", "b"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].fields[1] == "x, \"y\"\nz");
  CHECK(t.rows[1].fields[1] == "");
  CHECK(t.column("b") == 1);
  CHECK_THROWS_AS(t.column("c"), ParseError);
}

TEST_CASE("csv rejects ragged rows with the row number") {
  try {
    parse_csv("a,b\n1,2\n3\n", "f.csv");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
}

TEST_CASE("csv writer round-trips through the parser") {
  std::ostringstream os;
  CsvWriter w(os);
  w.header({"s", "d"});
  w.field("has,comma \"q\"").field(0.1);
  w.end_row();
  w.field("plain").empty();
  w.end_row();
  auto t = parse_csv(os.str(), "mem");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].fields[0] == "has,comma \"q\"");
  CHECK(parse_double(t.rows[0].fields[1]) == 0.1);
  CHECK(t.rows[1].fields[1].empty());
}

TEST_CASE("number formatting round-trips exactly") {
  for (double v : {0.1, -3.0e-17, 1.0 / 3.0, 12345.678, 0.0})
    CHECK(parse_double(format_double(v)) == v);
  CHECK_FALSE(parse_double("1.0x"));
  CHECK_FALSE(parse_double(""));
  CHECK(parse_int("-12") == -12);
  CHECK_FALSE(parse_int("1.5"));
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("read_csv checks the expected header") {
  testing::TempDir dir("csv");
  auto p = dir.write("x.csv", "a,b\n1,2\n");
  CHECK(read_csv(p, {"a", "b"}).rows.size() == 1);
  CHECK_THROWS_AS(read_csv(p, {"a", "c"}), ParseError);
  CHECK_THROWS_AS(read_csv(dir.path() / "missing.csv"), IoError);
}

TEST_CASE("tokenize splits on unicode space and strips punctuation") {
  // U+3000 ideographic space and U+00A0 no-break space separate tokens.
  auto t = tokenize("\"ABC,\" 상승!\xE3\x80\x80(호조)\xC2\xA0-- x-y");
  CHECK(t == std::vector<std::string>{"ABC", "상승", "호조", "x-y"});
}

TEST_CASE("tokenize NFC-normalizes and keeps case") {
  // Decomposed jamo for 한 compose to the precomposed syllable.
  const std::string decomposed = "\xE1\x84\x92\xE1\x85\xA1\xE1\x86\xAB";
  auto t = tokenize(decomposed + " Abc abc");
  REQUIRE(t.size() == 3);
  CHECK(t[0] == "한");
  CHECK(t[1] == "Abc");
  CHECK(t[2] == "abc");
  CHECK(nfc(decomposed) == "한");
}

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "srf/csv.hpp"

using namespace srf;

TEST(Csv, NumbersRoundTripExactly) {
  for (double v : {0.0, -0.0, 1.0, 0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, std::numeric_limits<double>::max(),
                   std::numeric_limits<double>::denorm_min()}) {
    const std::string s = csv::format_number(v);
    EXPECT_EQ(csv::parse_number(s), v) << s;
  }
}

TEST(Csv, NonFiniteValues) {
  EXPECT_EQ(csv::format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(csv::format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(csv::format_number(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_TRUE(std::isnan(csv::parse_number("nan")));
  EXPECT_EQ(csv::parse_number("-inf"), -std::numeric_limits<double>::infinity());
}

TEST(Csv, DecimalPointIsAlwaysADot) { EXPECT_EQ(csv::format_number(1.5), "1.5"); }

TEST(Csv, QuotingFollowsRfc4180) {
  EXPECT_EQ(csv::quote("plain"), "plain");
  EXPECT_EQ(csv::quote("a,b"), "\"a,b\"");
  EXPECT_EQ(csv::quote("say \"hi\""), "\"say \"\"hi\"\"\"");
  const auto f = csv::split_record("x,\"a,b\",\"say \"\"hi\"\"\",");
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f[1], "a,b");
  EXPECT_EQ(f[2], "say \"hi\"");
  EXPECT_EQ(f[3], "");
}

TEST(Csv, WriterRejectsWrongFieldCount) {
  std::ostringstream os;
  csv::Writer w(os, {"a", "b"});
  EXPECT_THROW(w.row(1.0), std::logic_error);
}

TEST(Csv, WriteThenReadTable) {
  std::ostringstream os;
  {
    csv::Writer w(os, {"t", "flag", "label", "n"});
    w.row(0.25, true, "a,b", std::size_t{7});
    w.row(0.5, false, "c", std::size_t{8});
  }
  std::istringstream is(os.str());
  const csv::Table t = csv::read(is);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.numbers("t"), (std::vector<double>{0.25, 0.5}));
  EXPECT_EQ(t.rows[0][t.column("label")], "a,b");
  EXPECT_EQ(t.rows[1][t.column("flag")], "0");
  EXPECT_TRUE(t.has_column("n"));
  EXPECT_THROW(t.column("missing"), std::invalid_argument);
}

TEST(Csv, RaggedRowsAreRejected) {
  std::istringstream is("a,b\n1,2\n3\n");
  EXPECT_THROW(csv::read(is), std::invalid_argument);
}

TEST(Csv, UnterminatedQuoteIsRejected) { EXPECT_THROW(csv::split_record("\"abc"), std::invalid_argument); }

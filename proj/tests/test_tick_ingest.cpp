#include <gtest/gtest.h>

#include <cstdio>
#include <sstream>

#include "mfitt/rng.hpp"
#include "mfitt/tick_ingest.hpp"

using namespace mfitt;

TEST(ParseTrades, EqualTimestampsAreLegal) {
    std::istringstream in("1483228800,963.4,0.5\n1483228800,963.5,0.2\n");
    TickSeries t = parse_trades(in, FormatSpec{});
    ASSERT_EQ(t.size(), 2u);
    EXPECT_EQ(t.records[0].timestamp, t.records[1].timestamp);
    EXPECT_DOUBLE_EQ(t.records[0].price, 963.4);
    EXPECT_DOUBLE_EQ(t.records[1].volume, 0.2);
}

TEST(ParseTrades, MillisecondUnitConversion) {
    std::istringstream in("1483228800123,963.4,0.5\n");
    FormatSpec spec;
    spec.ts_unit = TimestampUnit::milliseconds;
    TickSeries t = parse_trades(in, spec);
    ASSERT_EQ(t.size(), 1u);
    EXPECT_NEAR(t.records[0].timestamp, 1483228800.123, 1e-9);
}

TEST(ParseTrades, ReportsLineNumberOnMalformedRow) {
    std::istringstream in("1,2,3\n1,2\n");
    try {
        parse_trades(in, FormatSpec{});
        FAIL() << "expected parse error";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
}

TEST(ParseTrades, RejectsNonNumericAndNegativeFields) {
    std::istringstream bad_field("1,abc,3\n");
    EXPECT_THROW(parse_trades(bad_field, FormatSpec{}), Error);
    std::istringstream neg_price("1,-2,3\n");
    EXPECT_THROW(parse_trades(neg_price, FormatSpec{}), Error);
    std::istringstream neg_volume("1,2,-3\n");
    EXPECT_THROW(parse_trades(neg_volume, FormatSpec{}), Error);
    std::istringstream zero_volume("1,2,0\n"); // zero volume still marks a transaction time
    EXPECT_EQ(parse_trades(zero_volume, FormatSpec{}).size(), 1u);
}

TEST(ParseTrades, HeaderColumnsAndDelimiter) {
    std::istringstream in("ts;vol;px\n10;2.5;100\n11;0.5;101\n");
    FormatSpec spec;
    spec.delimiter = ';';
    spec.has_header = true;
    spec.col_timestamp = 0;
    spec.col_volume = 1;
    spec.col_price = 2;
    TickSeries t = parse_trades(in, spec);
    ASSERT_EQ(t.size(), 2u);
    EXPECT_DOUBLE_EQ(t.records[0].price, 100.0);
    EXPECT_DOUBLE_EQ(t.records[0].volume, 2.5);
}

// 1e6 rows written by the generator, parsed back field-by-field.
TEST(ParseTrades, MillionRowFileMatchesGenerator) {
    const std::size_t n = 1'000'000;
    Rng rng(42);
    std::vector<TradeRecord> expected(n);
    std::string text;
    text.reserve(n * 32);
    char buf[96];
    double t = 1.5e9;
    for (std::size_t i = 0; i < n; ++i) {
        t += std::floor(rng.uniform01() * 1000.0) / 1000.0;
        expected[i].timestamp = t;
        expected[i].price = 100.0 + std::floor(rng.uniform01() * 10000.0) / 100.0;
        expected[i].volume = std::floor(rng.uniform01() * 1000.0) / 10.0;
        int len = std::snprintf(buf, sizeof buf, "%.3f,%.2f,%.1f\n", expected[i].timestamp,
                                expected[i].price, expected[i].volume);
        text.append(buf, static_cast<std::size_t>(len));
    }
    std::istringstream in(text);
    TickSeries parsed = parse_trades(in, FormatSpec{});
    ASSERT_EQ(parsed.size(), n);
    for (std::size_t i = 0; i < n; i += 997) {
        EXPECT_NEAR(parsed.records[i].timestamp, expected[i].timestamp, 5e-4);
        EXPECT_NEAR(parsed.records[i].price, expected[i].price, 5e-3);
        EXPECT_NEAR(parsed.records[i].volume, expected[i].volume, 5e-2);
    }
}

// parse(serialize(x)) == x at the declared (microsecond) precision
TEST(ParseTrades, SerializeRoundTrip) {
    TickSeries t;
    t.records = {{1483228800.000001, 963.4, 0.5}, {1483228800.5, 1.25, 0.0}, {1483228900.75, 2e-4, 3.5}};
    std::ostringstream os;
    serialize_trades(t, os, FormatSpec{});
    std::istringstream is(os.str());
    TickSeries back = parse_trades(is, FormatSpec{});
    ASSERT_EQ(back.size(), t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_NEAR(back.records[i].timestamp, t.records[i].timestamp, 1e-6);
        EXPECT_DOUBLE_EQ(back.records[i].price, t.records[i].price);
        EXPECT_DOUBLE_EQ(back.records[i].volume, t.records[i].volume);
    }
}

static TickSeries make_ticks(std::initializer_list<double> ts) {
    TickSeries t;
    double p = 100.0;
    for (double x : ts) t.records.push_back({x, p += 1.0, 1.0});
    return t;
}

TEST(ValidateOrdering, SortedInputIsIdentity) {
    TickSeries t = make_ticks({1, 2, 2, 3});
    for (auto policy : {OrderingPolicy::reject, OrderingPolicy::sort}) {
        TickSeries out = validate_ordering(t, policy);
        ASSERT_EQ(out.size(), t.size());
        for (std::size_t i = 0; i < t.size(); ++i)
            EXPECT_EQ(out.records[i].price, t.records[i].price);
    }
}

TEST(ValidateOrdering, SortIsStableAmongEquals) {
    TickSeries t;
    t.records = {{3, 1.0, 0}, {1, 2.0, 0}, {2, 3.0, 0}, {2, 4.0, 0}};
    TickSeries out = validate_ordering(t, OrderingPolicy::sort);
    ASSERT_EQ(out.size(), 4u);
    EXPECT_DOUBLE_EQ(out.records[0].timestamp, 1.0);
    EXPECT_DOUBLE_EQ(out.records[1].timestamp, 2.0);
    EXPECT_DOUBLE_EQ(out.records[1].price, 3.0); // first 2-stamped trade stays first
    EXPECT_DOUBLE_EQ(out.records[2].price, 4.0);
    EXPECT_DOUBLE_EQ(out.records[3].timestamp, 3.0);

    TickSeries again = validate_ordering(out, OrderingPolicy::sort); // idempotent
    for (std::size_t i = 0; i < out.size(); ++i)
        EXPECT_EQ(again.records[i].price, out.records[i].price);
}

TEST(ValidateOrdering, RejectReportsFirstOffendingIndex) {
    TickSeries t = make_ticks({3, 1, 2});
    try {
        validate_ordering(t, OrderingPolicy::reject);
        FAIL() << "expected ordering error";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("index 1"), std::string::npos) << e.what();
    }
}

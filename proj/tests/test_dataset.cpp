#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "atr/dataset.hpp"
#include "atr/errors.hpp"

using namespace atr;

TEST_CASE("basic line parsing")
{
    const Dataset d = parse_libsvm_text("+1 1:0.5 3:-2\n-1\n");
    REQUIRE(d.size() == 2);
    CHECK(d.labels[0] == 1);
    CHECK(d.labels[1] == -1);
    REQUIRE(d.rows[0].size() == 2);
    CHECK(d.rows[0][0].first == 0);
    CHECK(d.rows[0][0].second == doctest::Approx(0.5));
    CHECK(d.rows[0][1].first == 2);
    CHECK(d.rows[0][1].second == doctest::Approx(-2.0));
    CHECK(d.rows[1].empty());
    CHECK(d.n_features == 3);
}

TEST_CASE("comments and blank lines are skipped")
{
    const Dataset d = parse_libsvm_text("# header\n\n+1 2:1.0 # trailing\n\n");
    REQUIRE(d.size() == 1);
    CHECK(d.rows[0].size() == 1);
    CHECK(d.rows[0][0].first == 1);
}

TEST_CASE("label normalization maps {0,1} to {-1,+1}")
{
    const Dataset d = parse_libsvm_text("0 1:1\n1 1:2\n0 1:3\n");
    CHECK(d.labels[0] == -1);
    CHECK(d.labels[1] == 1);
    CHECK(d.labels[2] == -1);
}

TEST_CASE("strict mode rejects labels outside {-1,+1}")
{
    CHECK_THROWS_AS(parse_libsvm_text("0 1:1\n", LabelMode::strict), LabelError);
    CHECK_NOTHROW(parse_libsvm_text("-1 1:1\n+1 2:1\n", LabelMode::strict));
}

TEST_CASE("malformed tokens raise ParseError with position")
{
    try {
        parse_libsvm_text("+1 1:0.5\n+1 abc\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.column > 0);
    }
    CHECK_THROWS_AS(parse_libsvm_text("+1 0:1.0\n"), ParseError);  // 1-based indices
    CHECK_THROWS_AS(parse_libsvm_text("+1 2:\n"), ParseError);
}

TEST_CASE("serialize then parse is the identity")
{
    const Dataset d = synthetic_logistic_dataset(60, 12, 99);
    const Dataset back = parse_libsvm_text(serialize_libsvm(d));
    REQUIRE(back.size() == d.size());
    CHECK(back.n_features == d.n_features);
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(back.labels[i] == d.labels[i]);
        REQUIRE(back.rows[i].size() == d.rows[i].size());
        for (std::size_t j = 0; j < d.rows[i].size(); ++j) {
            CHECK(back.rows[i][j].first == d.rows[i][j].first);
            CHECK(back.rows[i][j].second == d.rows[i][j].second);  // exact
        }
    }
}

TEST_CASE("synthetic dataset is deterministic in the seed")
{
    const Dataset a = synthetic_logistic_dataset(40, 10, 5);
    const Dataset b = synthetic_logistic_dataset(40, 10, 5);
    const Dataset c = synthetic_logistic_dataset(40, 10, 6);
    CHECK(serialize_libsvm(a) == serialize_libsvm(b));
    CHECK(serialize_libsvm(a) != serialize_libsvm(c));
    CHECK(a.n_features == 10);
    REQUIRE(a.size() == 40);
    bool has_pos = false, has_neg = false;
    for (int l : a.labels) {
        has_pos = has_pos || l == 1;
        has_neg = has_neg || l == -1;
    }
    CHECK(has_pos);
    CHECK(has_neg);
}

TEST_CASE("file round trip")
{
    const Dataset d = synthetic_logistic_dataset(20, 6, 3);
    const std::string path = "test_dataset_roundtrip.libsvm";
    save_libsvm(d, path);
    const Dataset back = load_libsvm(path);
    CHECK(serialize_libsvm(back) == serialize_libsvm(d));
    std::remove(path.c_str());
}

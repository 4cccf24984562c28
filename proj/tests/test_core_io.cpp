#include "doctest.h"

#include <filesystem>
#include <sstream>

#include "helpers.hpp"
#include "tmfusion/dataset.hpp"
#include "tmfusion/errors.hpp"
#include "tmfusion/random.hpp"

using namespace tmfusion;
using testing::Bits;

TEST_CASE("stream draws follow mt19937_64") {
    // 10000th output of the default-seeded engine, as fixed by the C++ standard.
    Stream s(5489);
    std::uint64_t x = 0;
    for (int i = 0; i < 10000; ++i) x = s.next();
    CHECK(x == 9981545732273789042ULL);

    Stream u(1);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
        CHECK(u.below(7) < 7);
    }
    CHECK_FALSE(u.bernoulli(0.0));
    CHECK(u.bernoulli(1.0));
}

TEST_CASE("substream derivation") {
    CHECK(mix_seed(1, 2) == 11209615845322764050ULL);
    CHECK(Stream(1).split(2).seed() == 11209615845322764050ULL);
    // String tags hash with 64-bit FNV-1a.
    CHECK(Stream(9).split("a").seed() == Stream(9).split(0xaf63dc4c8601ec8cULL).seed());
    CHECK(Stream(9).split("train").seed() == Stream(9).split(0xdee795a6c5087209ULL).seed());

    Stream parent(4);
    const auto before = parent.split("x").seed();
    parent.next();
    CHECK(parent.split("x").seed() == before);
    CHECK(parent.split("x").seed() != parent.split("y").seed());
}

TEST_CASE("dataset rows and ids") {
    BinaryDataset d(std::vector<std::string>{"a", "b"});
    d.add_row(Bits{1, 0}, 1);
    d.add_row(Bits{0, 1}, 0);
    d.add_row(Bits{1, 1}, 1, 40);
    d.add_row(Bits{0, 0}, 2);
    CHECK(d.size() == 4);
    CHECK(d.row_ids() == std::vector<RowId>{0, 1, 40, 41});
    CHECK(d.classes() == std::vector<Label>{0, 1, 2});
    CHECK(d.count(1) == 2);
    CHECK_THROWS_AS(d.add_row(Bits{1}, 0), DimensionError);

    const std::vector<std::size_t> pick{2, 0};
    const auto sub = d.subset(pick);
    CHECK(sub.row_ids() == std::vector<RowId>{40, 0});
    const std::vector<RowId> drop{0, 41};
    CHECK(d.without_ids(drop).row_ids() == std::vector<RowId>{1, 40});
    const std::vector<Label> keep{1};
    CHECK(d.filter_labels(keep).size() == 2);
}

TEST_CASE("dataset CSV round trip") {
    BinaryDataset d(std::vector<std::string>{"T0_A,R", "plain", "say \"hi\""});
    d.add_row(Bits{1, 0, 1}, 3);
    d.add_row(Bits{0, 1, 0}, -1);
    std::ostringstream out;
    d.write_csv(out);
    CHECK(out.str().rfind("\"T0_A,R\",plain,\"say \"\"hi\"\"\",label\n", 0) == 0);

    std::istringstream in(out.str());
    const auto back = BinaryDataset::read_csv(in);
    CHECK(back.feature_names() == d.feature_names());
    CHECK(back.labels() == d.labels());
    CHECK(std::equal(back.row(0).begin(), back.row(0).end(), d.row(0).begin()));

    const auto path = std::filesystem::temp_directory_path() / "tmfusion_core_io.csv";
    d.write_csv(path);
    CHECK(BinaryDataset::read_csv(path).labels() == d.labels());
    std::filesystem::remove(path);
}

TEST_CASE("malformed CSV") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return BinaryDataset::read_csv(in);
    };
    CHECK_THROWS_AS(parse(""), FormatError);
    CHECK_THROWS_AS(parse("a,b\n0,1\n"), FormatError);
    CHECK_THROWS_AS(parse("a,label\n0,1,1\n"), FormatError);
    CHECK_THROWS_AS(parse("a,label\n2,1\n"), FormatError);
    CHECK_THROWS_AS(parse("a,label\n1,x\n"), FormatError);
    CHECK_THROWS_AS(parse("\"a,label\n1,0\n"), FormatError);
    CHECK_THROWS_AS(BinaryDataset::read_csv(std::filesystem::path("/nonexistent/x.csv")), FormatError);
}

TEST_CASE("numeric tables") {
    std::istringstream in("x,y,label\n1.5,2,0\n-3,4e2,1\n");
    const auto t = NumericTable::read_csv(in);
    CHECK(t.names == std::vector<std::string>{"x", "y"});
    CHECK(t.rows[1][1] == 400.0);
    CHECK(t.labels == std::vector<Label>{0, 1});

    std::istringstream bad("x\nfoo\n");
    CHECK_THROWS_AS(NumericTable::read_csv(bad), FormatError);
}

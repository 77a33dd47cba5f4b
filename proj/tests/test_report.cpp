#include <cstdio>
#include <fstream>

#include <doctest.h>

#include "nof/help_model.hpp"
#include "nof/report.hpp"
#include "oracles.hpp"

using namespace nof;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const char* name) : path(std::string("/tmp/nof_test_") + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("reports round-trip through disk") {
    const ComplexityReport rep = harness_verify(gen_latin(2));
    const Json record = make_report("verify", Json{{"side", 2}}, complexity_report_json(rep));

    TempFile tmp("report.json");
    write_report(record, tmp.path);
    CHECK(load_report(tmp.path) == record);
}

TEST_CASE("reports carry the format version and reject others") {
    Json record = make_report("stars", Json::object(), Json{{"count", 4}});
    record["format_version"] = 99;

    TempFile tmp("report_v99.json");
    write_report(record, tmp.path);
    CHECK_THROWS_AS(load_report(tmp.path), VersionError);
}

TEST_CASE("truncated report files are parse errors") {
    TempFile tmp("report_trunc.json");
    {
        std::ofstream out(tmp.path);
        out << "{\"tool_version\": \"0.1";
    }
    CHECK_THROWS_AS(load_report(tmp.path), ParseError);

    {
        std::ofstream out(tmp.path);
        out << "{\"results\": 1}";
    }
    CHECK_THROWS_AS(load_report(tmp.path), ParseError);  // no format_version
}

TEST_CASE("json helpers keep rationals exact") {
    const Json r = rational_json(Rational(3, 12));
    CHECK(r["num"] == 1);
    CHECK(r["den"] == 4);

    const Json rect = rectangle_json(Rectangle::from_masks(0b101, 0b011, 3));
    CHECK(rect["rows"] == Json::array({0, 2}));
    CHECK(rect["cols"] == Json::array({0, 1}));
}

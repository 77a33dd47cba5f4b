#include "nof/report.hpp"

#include <fstream>
#include <sstream>

namespace nof {

Json rational_json(const Rational& r) { return Json{{"num", r.num()}, {"den", r.den()}}; }

Json rectangle_json(const Rectangle& r) {
    return Json{{"rows", r.rows.indices()}, {"cols", r.cols.indices()}};
}

namespace {

Json optional_int(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }
Json optional_double(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json complexity_report_json(const ComplexityReport& rep) {
    Json partitions = Json::array();
    for (const PartitionRow& row : rep.value_bucket_rows) {
        partitions.push_back({{"help_bits", row.help_bits},
                              {"part_count", row.part_count},
                              {"det_cost", optional_int(row.det_cost)},
                              {"nondet_cost", optional_int(row.nondet_cost)}});
    }
    Json checks = Json::array();
    for (const CheckRecord& c : rep.checks) {
        Json item{{"name", c.name},
                  {"verdict", std::string(verdict_name(c.verdict))},
                  {"note", c.note}};
        if (c.verdict != Verdict::Skipped) {
            item["lhs"] = c.lhs;
            item["rhs"] = c.rhs;
        }
        checks.push_back(item);
    }
    return Json{{"instance", {{"side", rep.side}, {"colors", rep.colors}}},
                {"chi_star", optional_int(rep.chi_star)},
                {"chi_exceeded", rep.chi_exceeded},
                {"greedy_colors", rep.greedy_colors},
                {"peel_iterations", rep.peel_iterations},
                {"cover_chi", rep.cover_chi},
                {"cover_bits", rep.cover_bits},
                {"cover_exact", rep.cover_exact},
                {"disc", rational_json(rep.disc)},
                {"disc_exact", rep.disc_exact},
                {"disc_bound_bits", optional_double(rep.disc_bound_bits)},
                {"det_cc_full", optional_int(rep.det_cc_full)},
                {"value_bucket_partitions", partitions},
                {"best_cost_b0", optional_int(rep.best_cost_b0)},
                {"best_cost_b1", optional_int(rep.best_cost_b1)},
                {"checks", checks}};
}

Json make_report(const std::string& command, Json config, Json results) {
    return Json{{"tool_version", std::string(kToolVersion)},
                {"format_version", kFormatVersion},
                {"config", std::move(config.is_null() ? Json::object() : config)},
                {"command", command},
                {"results", std::move(results)}};
}

void write_report(const Json& record, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write report file: " + path);
    out << record.dump(2) << '\n';
}

Json load_report(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open report file: " + path);
    Json record;
    try {
        record = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("malformed report file: ") + e.what());
    }
    if (!record.is_object() || !record.contains("format_version"))
        throw ParseError("report file lacks a format_version field");
    const auto& ver = record["format_version"];
    if (!ver.is_number_integer() || ver.get<int>() != kFormatVersion) {
        std::ostringstream msg;
        msg << "report format version " << ver.dump() << " is not supported (expected "
            << kFormatVersion << "); no migration path exists";
        throw VersionError(msg.str());
    }
    return record;
}

}  // namespace nof

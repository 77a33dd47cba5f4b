// Command-line front end for the workbench: thin wrappers over the library
// modules, deterministic output, JSON reports via --out on analysis commands.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nof/discrepancy.hpp"
#include "nof/function_core.hpp"
#include "nof/help_model.hpp"
#include "nof/report.hpp"
#include "nof/star_analysis.hpp"

namespace {

using nof::Json;

std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string fmt_indices(const nof::Bitset& b) {
    std::string out = "{";
    bool first = true;
    for (int i : b.indices()) {
        if (!first) out += ",";
        out += std::to_string(i);
        first = false;
    }
    return out + "}";
}

nof::Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return nof::Rational(std::stoll(text), 1);
        return nof::Rational(std::stoll(text.substr(0, slash)),
                             std::stoll(text.substr(slash + 1)));
    } catch (const std::exception&) {
        throw nof::RangeError("malformed rational: " + text + " (expected p or p/q)");
    }
}

void emit_report(const std::string& path, const std::string& command, Json config, Json results) {
    if (path.empty()) return;
    nof::write_report(nof::make_report(command, std::move(config), std::move(results)), path);
}

Json star_json(const nof::Star& s) {
    return Json{{"base", {s.base.row, s.base.col}},
                {"row_partner", {s.row_partner.row, s.row_partner.col}},
                {"col_partner", {s.col_partner.row, s.col_partner.col}},
                {"shared_value", s.shared_value},
                {"base_value", s.base_value}};
}

// Shared option state, filled by CLI11.
struct Options {
    std::string in_path, out_path, coloring_path, kind = "unary", mode = "det", disc_text;
    int dims = 2, side = 2, colors = 2, q = 2, d = 1, k = 2, b = 0, cn = 0, limit = 4;
    int samples = 200, threads = 0, budget_b = 0;
    double dh = -1, nh = -1, c_param = -1;
    std::uint64_t seed = 0;
    std::uint64_t node_budget = 20'000'000;
    bool exact = false;
    bool sampled = false;
    bool best = false;
    std::vector<int> q_list{2, 3}, d_list{1};
};

int run_gen(const std::string& which, const Options& opt) {
    nof::BaseFunction A;
    if (which == "random")
        A = nof::gen_random(opt.dims, opt.side, opt.colors, opt.seed);
    else if (which == "latin")
        A = nof::gen_latin(opt.side);
    else
        A = nof::gen_trace(opt.q, opt.d, opt.k);
    std::cout << "function: dims=" << A.dims << " side=" << A.side << " colors=" << A.colors
              << "\n";
    if (opt.out_path.empty())
        std::cout << nof::serialize(A);
    else
        nof::save_function(A, opt.out_path);
    return 0;
}

int run_lift(const Options& opt) {
    const nof::BaseFunction A = nof::load_function(opt.in_path);
    nof::LiftKind kind;
    if (opt.kind == "unary")
        kind = nof::LiftKind::Unary;
    else if (opt.kind == "binary")
        kind = nof::LiftKind::Binary;
    else if (opt.kind == "gt")
        kind = nof::LiftKind::GreaterThan;
    else
        throw CLI::ValidationError("--kind must be unary, binary or gt");

    const nof::BooleanFunction f = nof::lift(A, kind);
    const bool roundtrip = nof::base_of(f) == A;
    std::cout << "lift: kind=" << nof::lift_kind_name(kind) << " last_dim=" << f.last_dim
              << " tuples=" << f.tuple_count() << " roundtrip=" << (roundtrip ? "ok" : "BROKEN")
              << "\n";
    emit_report(opt.out_path, "lift", Json{{"in", opt.in_path}, {"kind", opt.kind}},
                Json{{"last_dim", f.last_dim},
                     {"tuples", f.tuple_count()},
                     {"roundtrip", roundtrip}});
    return roundtrip ? 0 : 1;
}

int run_stars(const Options& opt) {
    const nof::BaseFunction A = nof::load_function(opt.in_path);
    const auto stars = nof::enumerate_stars(A);
    std::cout << "stars: " << stars.size() << "\n";
    Json results{{"count", stars.size()}};
    if (stars.size() <= 10000) {  // keep reports desk-sized
        Json list = Json::array();
        for (const nof::Star& s : stars) list.push_back(star_json(s));
        results["stars"] = std::move(list);
    }
    emit_report(opt.out_path, "stars", Json{{"in", opt.in_path}}, std::move(results));
    return 0;
}

int run_color(const std::string& which, const Options& opt) {
    const nof::BaseFunction A = nof::load_function(opt.in_path);
    if (which == "greedy") {
        const nof::Coloring c = nof::color_greedy(A);
        std::cout << "colors: " << c.colors_used << "\n";
        if (!opt.out_path.empty()) nof::save_coloring(c, opt.out_path);
        return 0;
    }
    nof::ChiStarLimits limits;
    limits.max_colors = opt.limit;
    limits.node_budget = opt.node_budget;
    const nof::ChiStarResult r = nof::chi_star_exact(A, limits);
    if (r.exceeded) {
        std::cout << "chi_star: exceeds limit " << opt.limit << "\n";
        return 0;
    }
    std::cout << "chi_star: " << *r.colors << "\n";
    if (!opt.out_path.empty()) nof::save_coloring(*r.witness, opt.out_path);
    return 0;
}

int run_peel(const Options& opt) {
    const nof::BaseFunction A = nof::load_function(opt.in_path);
    const nof::Coloring coloring = nof::load_coloring(opt.coloring_path);
    const nof::PeelingTrace trace = nof::peel(A, coloring);

    Json iterations = Json::array();
    for (std::size_t i = 0; i < trace.iterations.size(); ++i) {
        const nof::PeelIteration& it = trace.iterations[i];
        std::cout << "iteration " << (i + 1) << ": value=" << it.value << " color=" << it.color
                  << " chosen=" << it.chosen.size() << " enclosure=" << it.enclosure.rows.count()
                  << "x" << it.enclosure.cols.count() << " ratio=" << it.coverage_ratio.str()
                  << "\n";
        Json chosen = Json::array();
        for (const nof::Entry& e : it.chosen) chosen.push_back({e.row, e.col});
        iterations.push_back({{"scope", nof::rectangle_json(it.scope)},
                              {"value", it.value},
                              {"color", it.color},
                              {"chosen", std::move(chosen)},
                              {"enclosure", nof::rectangle_json(it.enclosure)},
                              {"used_values_before", it.used_values_before},
                              {"coverage_ratio", nof::rational_json(it.coverage_ratio)}});
    }
    std::cout << "iterations: " << trace.iteration_count() << "\n";
    emit_report(opt.out_path, "peel", Json{{"in", opt.in_path}, {"coloring", opt.coloring_path}},
                Json{{"iterations", std::move(iterations)},
                     {"iteration_count", trace.iteration_count()}});
    return 0;
}

int run_cover(const Options& opt) {
    const nof::BaseFunction A = nof::load_function(opt.in_path);
    nof::CoverSearchLimits limits;
    limits.node_budget = opt.node_budget;
    const nof::CoverResult r = nof::min_mono_cover(A, nof::EntrySet::full(A.side), limits);
    std::cout << "chi: " << r.cover.chi() << "\n"
              << "cover_cc: " << nof::cover_cc(r.cover) << "\n"
              << "exact: " << (r.exact ? "yes" : "no (budget exhausted, greedy cover)") << "\n"
              << nof::serialize_cover(r.cover);
    if (!opt.out_path.empty()) {
        std::ofstream out(opt.out_path, std::ios::binary);
        if (!out) throw nof::Error("cannot write cover file: " + opt.out_path);
        out << nof::serialize_cover(r.cover);
    }
    return 0;
}

int run_disc(const Options& opt) {
    const nof::BaseFunction A = nof::load_function(opt.in_path);
    nof::DiscResult r;
    if (opt.sampled) {
        r = nof::disc_rect_sampled(A, opt.samples, opt.seed);
    } else {
        nof::DiscLimits limits;
        limits.threads = opt.threads;
        r = nof::disc_rect_exact(A, limits);
    }
    std::cout << "disc = " << r.value.str() << "\n"
              << "witness: rows=" << fmt_indices(r.witness_rect.rows)
              << " cols=" << fmt_indices(r.witness_rect.cols) << " color=" << r.witness_color
              << "\n"
              << "family: " << (r.sampled ? "sampled" : "rectangles") << "\n";
    Json config{{"in", opt.in_path}, {"mode", r.sampled ? "sampled" : "exact"}};
    if (r.sampled) {
        config["samples"] = opt.samples;
        config["seed"] = opt.seed;
    }
    emit_report(opt.out_path, "disc", std::move(config),
                Json{{"disc", nof::rational_json(r.value)},
                     {"witness", nof::rectangle_json(r.witness_rect)},
                     {"witness_color", r.witness_color},
                     {"sampled", r.sampled}});
    return 0;
}

int run_bound_bhk(const Options& opt) {
    const nof::Rational disc = parse_rational(opt.disc_text);
    const auto bound = nof::disc_help_lower_bound(disc, opt.b, opt.colors);
    std::cout << "bhk_bound: " << (bound ? fmt_double(*bound) : "inapplicable") << "\n";
    emit_report(opt.out_path, "bound bhk",
                Json{{"disc", nof::rational_json(disc)}, {"b", opt.b}, {"N", opt.colors}},
                Json{{"bits", bound ? Json(*bound) : Json(nullptr)}});
    return 0;
}

int run_bound_detsim(const Options& opt) {
    const std::int64_t v = nof::det_sim_bound(opt.k, opt.cn);
    std::cout << "det_sim_bound: " << v << "\n";
    emit_report(opt.out_path, "bound detsim", Json{{"k", opt.k}, {"cn", opt.cn}},
                Json{{"bits", v}});
    return 0;
}

int run_bound_evaluators(const Options& opt) {
    Json results = Json::object();
    const auto line = [&](const std::string& name, const std::optional<double>& v) {
        std::cout << name << ": " << (v ? fmt_double(*v) : "inapplicable") << "\n";
        results[name] = v ? Json(*v) : Json(nullptr);
    };
    if (opt.dh >= 0)
        line("graph_det_lower_bound",
             nof::graph_det_lower_bound(opt.dh, opt.k, opt.colors, opt.b));
    if (opt.nh >= 0)
        line("graph_nondet_lower_bound",
             nof::graph_nondet_lower_bound(opt.nh, opt.colors, opt.k, opt.b));
    if (opt.c_param > 0)
        line("loglog_identity", nof::loglog_identity(opt.colors, opt.k, opt.c_param));
    if (opt.dh >= 0) {
        line("gt_lift_lower_bound", nof::gt_lift_lower_bound(opt.dh, opt.colors));
        line("nondet_from_det_bound", nof::nondet_from_det_bound(opt.dh, opt.colors, opt.k));
    }
    if (results.empty())
        throw CLI::ValidationError("bound evaluators needs at least one of --dh, --nh, --c");
    emit_report(opt.out_path, "bound evaluators",
                Json{{"dh", opt.dh},
                     {"nh", opt.nh},
                     {"N", opt.colors},
                     {"k", opt.k},
                     {"b", opt.b},
                     {"c", opt.c_param}},
                std::move(results));
    return 0;
}

int run_partition(const Options& opt) {
    const nof::BaseFunction A = nof::load_function(opt.in_path);
    if (opt.mode != "det" && opt.mode != "nondet")
        throw CLI::ValidationError("--mode must be det or nondet");
    const nof::CostMode mode =
        opt.mode == "nondet" ? nof::CostMode::Nondeterministic : nof::CostMode::Deterministic;

    Json results;
    if (opt.best) {
        const nof::BestPartitionResult r = nof::best_partition_micro(A, opt.budget_b, mode);
        if (!r.cost) {
            std::cout << "best_cost: exceeds per-part limits\n";
            return 0;
        }
        std::cout << "best_cost: " << *r.cost << " (parts=" << r.partition.parts.size()
                  << ", exhaustive=" << (r.exhaustive ? "yes" : "no, canonical family") << ")\n";
        results = Json{{"cost", *r.cost},
                       {"parts", r.partition.parts.size()},
                       {"exhaustive", r.exhaustive}};
    } else {
        const nof::Partition p = nof::value_bucket_partition(A, opt.budget_b);
        const nof::PartitionCostResult r = nof::partition_cost(A, p, mode);
        if (!r.cost) {
            std::cout << "partition_cost: part " << r.offending_part
                      << " exceeds per-part limits\n";
            return 0;
        }
        std::cout << "partition_cost: " << *r.cost << " (parts=" << p.parts.size()
                  << ", help_bits=" << p.help_bits() << ")\n";
        results = Json{{"cost", *r.cost},
                       {"parts", p.parts.size()},
                       {"help_bits", p.help_bits()}};
    }
    emit_report(opt.out_path, "partition",
                Json{{"in", opt.in_path}, {"b", opt.budget_b}, {"mode", opt.mode},
                     {"best", opt.best}},
                std::move(results));
    return 0;
}

int run_trend(const Options& opt) {
    nof::DiscLimits limits;
    limits.threads = opt.threads;
    const auto rows =
        nof::trace_trend(opt.q_list, opt.d_list, opt.k, opt.samples, opt.seed, limits);
    std::printf(" q  d  k  exact  %-14s %-14s %s\n", "disc", "neglog2_disc", "predictor");
    Json jrows = Json::array();
    for (const nof::TrendRow& row : rows) {
        std::printf("%2d %2d %2d  %-5s  %-14s %-14s %s\n", row.q, row.d, row.k,
                    row.exact ? "yes" : "no", row.disc.str().c_str(),
                    fmt_double(row.neg_log2_disc).c_str(), fmt_double(row.predictor).c_str());
        jrows.push_back({{"q", row.q},
                         {"d", row.d},
                         {"k", row.k},
                         {"exact", row.exact},
                         {"disc", nof::rational_json(row.disc)},
                         {"neg_log2_disc", row.neg_log2_disc},
                         {"predictor", row.predictor}});
    }
    emit_report(opt.out_path, "trend",
                Json{{"q", opt.q_list},
                     {"d", opt.d_list},
                     {"k", opt.k},
                     {"samples", opt.samples},
                     {"seed", opt.seed}},
                Json{{"rows", std::move(jrows)}});
    return 0;
}

int run_verify(const Options& opt) {
    const nof::BaseFunction A = nof::load_function(opt.in_path);
    const nof::ComplexityReport rep = nof::harness_verify(A);
    for (const nof::CheckRecord& c : rep.checks) {
        std::cout << nof::verdict_name(c.verdict) << "  " << c.name;
        if (c.verdict != nof::Verdict::Skipped)
            std::cout << "  lhs=" << fmt_double(c.lhs) << " rhs=" << fmt_double(c.rhs);
        if (!c.note.empty()) std::cout << "  (" << c.note << ")";
        std::cout << "\n";
    }
    emit_report(opt.out_path, "verify", Json{{"in", opt.in_path}},
                nof::complexity_report_json(rep));
    return rep.all_passed() ? 0 : 1;
}

int run_report_show(const Options& opt) {
    const Json record = nof::load_report(opt.in_path);
    std::cout << record.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"workbench for base functions, lifts, A-stars, monochromatic covers,\n"
                 "multicolor discrepancy and help-bit partitions (env NOF_LIMIT_MB caps memory)"};
    app.require_subcommand(1);
    Options opt;
    int rc = 0;

    // gen {random|latin|trace}
    auto* gen = app.add_subcommand("gen", "generate a base function");
    gen->require_subcommand(1);
    auto* gen_random = gen->add_subcommand("random", "seeded uniform values");
    gen_random->add_option("--dims", opt.dims, "coordinate count")->capture_default_str();
    gen_random->add_option("--n", opt.side, "side per coordinate")->required();
    gen_random->add_option("--N", opt.colors, "color count")->required();
    gen_random->add_option("--seed", opt.seed, "generator seed")->capture_default_str();
    gen_random->add_option("--out", opt.out_path, "function file (stdout when absent)");
    gen_random->callback([&] { rc = run_gen("random", opt); });

    auto* gen_latin = gen->add_subcommand("latin", "cyclic Latin square");
    gen_latin->add_option("--n", opt.side, "side")->required();
    gen_latin->add_option("--out", opt.out_path, "function file (stdout when absent)");
    gen_latin->callback([&] { rc = run_gen("latin", opt); });

    auto* gen_trace = gen->add_subcommand("trace", "matrix-product trace function");
    gen_trace->add_option("--q", opt.q, "prime field order")->required();
    gen_trace->add_option("--d", opt.d, "matrix dimension")->required();
    gen_trace->add_option("--k", opt.k, "matrix count")->required();
    gen_trace->add_option("--out", opt.out_path, "function file (stdout when absent)");
    gen_trace->callback([&] { rc = run_gen("trace", opt); });

    // lift
    auto* lift = app.add_subcommand("lift", "lift a base function and check the round trip");
    lift->add_option("--in", opt.in_path, "function file")->required();
    lift->add_option("--kind", opt.kind, "unary | binary | gt")->capture_default_str();
    lift->add_option("--out", opt.out_path, "JSON report");
    lift->callback([&] { rc = run_lift(opt); });

    // stars
    auto* stars = app.add_subcommand("stars", "enumerate stars of a two-coordinate function");
    stars->add_option("--in", opt.in_path, "function file")->required();
    stars->add_option("--out", opt.out_path, "JSON report");
    stars->callback([&] { rc = run_stars(opt); });

    // color {greedy|exact}
    auto* color = app.add_subcommand("color", "star-free colorings");
    color->require_subcommand(1);
    auto* color_greedy = color->add_subcommand("greedy", "row-major greedy coloring");
    color_greedy->add_option("--in", opt.in_path, "function file")->required();
    color_greedy->add_option("--out", opt.out_path, "coloring file");
    color_greedy->callback([&] { rc = run_color("greedy", opt); });
    auto* color_exact = color->add_subcommand("exact", "exact minimum color count");
    color_exact->add_option("--in", opt.in_path, "function file")->required();
    color_exact->add_option("--limit", opt.limit, "color budget")->capture_default_str();
    color_exact->add_option("--node-budget", opt.node_budget, "search node budget")
        ->capture_default_str();
    color_exact->add_option("--out", opt.out_path, "witness coloring file");
    color_exact->callback([&] { rc = run_color("exact", opt); });

    // peel
    auto* peel = app.add_subcommand("peel", "run the peeling procedure under a coloring");
    peel->add_option("--in", opt.in_path, "function file")->required();
    peel->add_option("--coloring", opt.coloring_path, "coloring file")->required();
    peel->add_option("--out", opt.out_path, "JSON report");
    peel->callback([&] { rc = run_peel(opt); });

    // cover
    auto* cover = app.add_subcommand("cover", "minimum monochromatic rectangle cover");
    cover->add_option("--in", opt.in_path, "function file")->required();
    cover->add_option("--node-budget", opt.node_budget, "search node budget")
        ->capture_default_str();
    cover->add_option("--out", opt.out_path, "cover file");
    cover->callback([&] { rc = run_cover(opt); });

    // disc
    auto* disc = app.add_subcommand("disc", "multicolor discrepancy over rectangles");
    disc->add_option("--in", opt.in_path, "function file")->required();
    disc->add_flag("--exact", opt.exact, "exact scan (default)");
    auto* samples_opt = disc->add_option("--samples", opt.samples, "sampled family size");
    disc->add_option("--seed", opt.seed, "sampling seed")->capture_default_str();
    disc->add_option("--threads", opt.threads, "0 = machine parallelism")->capture_default_str();
    disc->add_option("--out", opt.out_path, "JSON report");
    disc->callback([&] {
        opt.sampled = samples_opt->count() > 0 && !opt.exact;
        rc = run_disc(opt);
    });

    // bound {bhk|detsim|evaluators}
    auto* bound = app.add_subcommand("bound", "closed-form bound evaluators");
    bound->require_subcommand(1);
    auto* bhk = bound->add_subcommand("bhk", "discrepancy lower bound on help complexity");
    bhk->add_option("--disc", opt.disc_text, "discrepancy as p/q")->required();
    bhk->add_option("--b", opt.b, "help bits")->required();
    bhk->add_option("--N", opt.colors, "color count")->required();
    bhk->add_option("--out", opt.out_path, "JSON report");
    bhk->callback([&] { rc = run_bound_bhk(opt); });
    auto* detsim = bound->add_subcommand("detsim", "deterministic replay of a cover");
    detsim->add_option("--k", opt.k, "player count")->required();
    detsim->add_option("--cn", opt.cn, "nondeterministic communication bits")->required();
    detsim->add_option("--out", opt.out_path, "JSON report");
    detsim->callback([&] { rc = run_bound_detsim(opt); });
    auto* evals = bound->add_subcommand("evaluators", "all closed-form right-hand sides");
    evals->add_option("--dh", opt.dh, "deterministic help complexity");
    evals->add_option("--nh", opt.nh, "nondeterministic help complexity");
    evals->add_option("--N", opt.colors, "color count")->capture_default_str();
    evals->add_option("--k", opt.k, "player count")->capture_default_str();
    evals->add_option("--b", opt.b, "help bits")->capture_default_str();
    evals->add_option("--c", opt.c_param, "constant of the dimension choice");
    evals->add_option("--out", opt.out_path, "JSON report");
    evals->callback([&] { rc = run_bound_evaluators(opt); });

    // partition
    auto* partition = app.add_subcommand("partition", "help-bit partition costs");
    partition->add_option("--in", opt.in_path, "function file")->required();
    partition->add_option("--b", opt.budget_b, "help bits")->required();
    partition->add_option("--mode", opt.mode, "det | nondet")->capture_default_str();
    partition->add_flag("--best", opt.best, "search the partition family for the minimum");
    partition->add_option("--out", opt.out_path, "JSON report");
    partition->callback([&] { rc = run_partition(opt); });

    // trend
    auto* trend = app.add_subcommand("trend", "discrepancy trend of trace functions");
    trend->add_option("--q", opt.q_list, "prime field orders")
        ->delimiter(',')
        ->capture_default_str();
    trend->add_option("--d", opt.d_list, "matrix dimensions")
        ->delimiter(',')
        ->capture_default_str();
    trend->add_option("--k", opt.k, "matrix count (2: rectangle family)")->capture_default_str();
    trend->add_option("--samples", opt.samples, "sample count past the exact limit")
        ->capture_default_str();
    trend->add_option("--seed", opt.seed, "sampling seed")->capture_default_str();
    trend->add_option("--threads", opt.threads, "0 = machine parallelism")->capture_default_str();
    trend->add_option("--out", opt.out_path, "JSON report");
    trend->callback([&] { rc = run_trend(opt); });

    // verify
    auto* verify = app.add_subcommand("verify", "run every harness check on a micro instance");
    verify->add_option("--in", opt.in_path, "function file")->required();
    verify->add_option("--out", opt.out_path, "JSON report");
    verify->callback([&] { rc = run_verify(opt); });

    // report show
    auto* report = app.add_subcommand("report", "report file utilities");
    report->require_subcommand(1);
    auto* report_show = report->add_subcommand("show", "validate and pretty-print a report");
    report_show->add_option("--in", opt.in_path, "report file")->required();
    report_show->callback([&] { rc = run_report_show(opt); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        std::cerr << app.help() << "\n";
        return 2;
    } catch (const nof::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}

#include <doctest.h>

#include <json.hpp>

#include <sstream>

#include "bounds.hpp"
#include "compare.hpp"
#include "fuzz.hpp"
#include "workload.hpp"

using namespace bitstree;
using namespace bitstree::bench;
using nlohmann::json;

namespace {

std::vector<json> parse_report(const std::string& text) {
    std::vector<json> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) out.push_back(json::parse(line));
    return out;
}

const char* sample_segments_text =
    "# sample\n"
    "a 5 12\n"
    "b 10 15\n"
    "c 18 21\n";

}  // namespace

TEST_CASE("segment files parse with comments and fail with line numbers") {
    id_table table;
    std::vector<segment> segs;
    std::istringstream good(sample_segments_text);
    CHECK_FALSE(parse_segments(good, table, segs).has_value());
    REQUIRE(segs.size() == 3);
    CHECK(table.name(segs[0].id) == "a");
    CHECK(segs[1].lo == 10);

    SUBCASE("bad coordinate") {
        id_table t2;
        std::vector<segment> out;
        std::istringstream bad("a 5 12\nb ten 15\n");
        auto err = parse_segments(bad, t2, out);
        REQUIRE(err.has_value());
        CHECK(err->line == 2);
    }
    SUBCASE("zero length") {
        id_table t2;
        std::vector<segment> out;
        std::istringstream bad("a 5 5\n");
        auto err = parse_segments(bad, t2, out);
        REQUIRE(err.has_value());
        CHECK(err->line == 1);
    }
    SUBCASE("duplicate id") {
        id_table t2;
        std::vector<segment> out;
        std::istringstream bad("a 5 12\n\na 6 13\n");
        auto err = parse_segments(bad, t2, out);
        REQUIRE(err.has_value());
        CHECK(err->line == 3);
    }
}

TEST_CASE("script files parse every op form") {
    id_table table;
    std::vector<workload_op> ops;
    std::istringstream good(
        "insert d 2 7\n"
        "delete d\n"
        "stab 11\n"
        "range 15 18\n"
        "stats\n"
        "check\n");
    CHECK_FALSE(parse_script(good, table, ops).has_value());
    REQUIRE(ops.size() == 6);
    CHECK(ops[0].k == workload_op::kind::insert);
    CHECK(ops[3].r == range{15, 18});

    std::ostringstream rendered;
    write_script(rendered, ops, table);
    id_table table2;
    std::vector<workload_op> reparsed;
    std::istringstream again(rendered.str());
    CHECK_FALSE(parse_script(again, table2, reparsed).has_value());
    CHECK(reparsed.size() == ops.size());

    SUBCASE("unknown verb") {
        id_table t2;
        std::vector<workload_op> out;
        std::istringstream bad("stab 3\nfrobnicate 1\n");
        auto err = parse_script(bad, t2, out);
        REQUIRE(err.has_value());
        CHECK(err->line == 2);
    }
    SUBCASE("empty range") {
        id_table t2;
        std::vector<workload_op> out;
        std::istringstream bad("range 7 7\n");
        auto err = parse_script(bad, t2, out);
        REQUIRE(err.has_value());
        CHECK(err->line == 1);
    }
}

TEST_CASE("run_workload reports queries and honors --check") {
    id_table table;
    std::vector<segment> segs;
    std::istringstream seg_in(sample_segments_text);
    REQUIRE_FALSE(parse_segments(seg_in, table, segs).has_value());

    std::vector<workload_op> ops;
    std::istringstream script_in(
        "stab 11\n"
        "insert d 2 7\n"
        "stab 5\n"
        "delete ghost\n"
        "stats\n"
        "check\n");
    REQUIRE_FALSE(parse_script(script_in, table, ops).has_value());

    run_options opt;
    opt.check = true;
    std::ostringstream out;
    CHECK(run_workload(segs, ops, table, opt, out) == 0);

    const auto records = parse_report(out.str());
    REQUIRE(records.size() == ops.size() + 2);  // header + ops + summary
    CHECK(records.front()["event"] == "header");
    CHECK(records[1]["bits"]["ids"] == json::array({"a", "b"}));
    CHECK(records[1]["bits"]["nodes_visited"].get<int>() <= 4);
    CHECK(records[3]["bits"]["ids"] == json::array({"a", "d"}));
    CHECK(records[4]["bits"] == "absent");
    CHECK(records[5]["bits"]["nodes"] == 6);
    CHECK(records[6]["bits"] == "ok");
    CHECK(records.back()["check_failures"] == 0);
}

TEST_CASE("run_workload drives the skeleton trees alongside") {
    id_table table;
    std::vector<segment> segs;
    std::istringstream seg_in(sample_segments_text);
    REQUIRE_FALSE(parse_segments(seg_in, table, segs).has_value());

    std::vector<workload_op> ops;
    std::istringstream script_in(
        "stab 11\n"
        "insert e 0 30\n"
        "stats\n");
    REQUIRE_FALSE(parse_script(script_in, table, ops).has_value());

    run_options opt;
    opt.structure = structure_sel::all;
    std::ostringstream out;
    CHECK(run_workload(segs, ops, table, opt, out) == 0);

    const auto records = parse_report(out.str());
    CHECK(records[1]["sst"]["ids"] == json::array({"a", "b"}));
    CHECK(records[1]["dst"]["ids"] == json::array({"a", "b"}));
    CHECK(records[2]["sst"] == "static");            // immutable after build
    CHECK(records[2]["dst"] == "range_exceeded");    // outside [5,21]
    CHECK(records[2]["bits"] == "ok");               // unbounded by design
    CHECK(records[3]["sst"]["nodes"] == 13);
    CHECK(records[3]["dst"]["nodes"] == 31);
}

TEST_CASE("compare reproduces the desk-example metric table") {
    id_table table;
    std::vector<segment> segs;
    std::istringstream seg_in(sample_segments_text);
    REQUIRE_FALSE(parse_segments(seg_in, table, segs).has_value());

    std::ostringstream out;
    CHECK(run_compare(segs, table, {}, out) == 0);
    const auto records = parse_report(out.str());

    REQUIRE(records.size() == 6);
    CHECK(records[0]["dst_range"] == json::array({5, 21}));
    CHECK(records[1]["metric"] == "node_count");
    CHECK(records[1]["sst"] == 13);
    CHECK(records[1]["dst"] == 31);
    CHECK(records[1]["bits"] == 4);
    CHECK(records[2]["sst"] == 4);
    CHECK(records[2]["dst"] == 8);
    CHECK(records[2]["bits"] == 5);
    CHECK(records[3]["sst"] == 3);
    CHECK(records[3]["dst"] == 4);
    CHECK(records[3]["bits"] == 2);
    CHECK(records[4]["metric"] == "max_stab_visits");
    CHECK(records[4]["sst"] == 7);
    CHECK(records[4]["sst_at"] == 15);
    CHECK(records[4]["dst"] == 9);
    CHECK(records[4]["dst_at"] == 13);
    CHECK(records[4]["bits"] == 4);
    for (const auto& rec : records)
        if (rec.contains("pass")) CHECK(rec["pass"] == true);
}

TEST_CASE("identical seeds produce byte-identical reports") {
    fuzz_options opt;
    opt.seed = 31337;
    opt.ops = 1500;
    opt.window_hi = 250;
    std::ostringstream a, b;
    const auto ra = run_fuzz(opt, &a);
    const auto rb = run_fuzz(opt, &b);
    CHECK(ra.ok());
    CHECK(a.str() == b.str());
    CHECK_FALSE(a.str().empty());

    bounds_options bopt;
    bopt.n_max = 12;
    bopt.trials = 3;
    bopt.seed = 7;
    std::ostringstream c, d;
    CHECK(run_bounds(bopt, &c).violations == 0);
    CHECK(run_bounds(bopt, &d).violations == 0);
    CHECK(c.str() == d.str());
}

TEST_CASE("the shrinker reduces a failing sequence to its essence") {
    // Synthetic failure predicate: a sequence fails when it contains both a
    // stab at 1 and a stab at 2, regardless of anything else.
    std::vector<workload_op> ops;
    for (coord x = 0; x < 40; ++x) {
        workload_op op;
        op.k = workload_op::kind::stab;
        op.x = x % 7;
        ops.push_back(op);
    }
    auto failing = [](const std::vector<workload_op>& seq) {
        bool one = false, two = false;
        for (const auto& op : seq) {
            one = one || op.x == 1;
            two = two || op.x == 2;
        }
        return one && two;
    };
    REQUIRE(failing(ops));
    const auto minimal = shrink_ops(ops, failing);
    CHECK(minimal.size() == 2);
    CHECK(failing(minimal));
}

TEST_CASE("bounds sweep finds no violations at a small scale") {
    bounds_options opt;
    opt.n_max = 25;
    opt.trials = 4;
    opt.seed = 3;
    std::ostringstream out;
    const auto result = run_bounds(opt, &out);
    CHECK(result.violations == 0);
    const auto records = parse_report(out.str());
    CHECK(records.back()["violations"] == 0);
}

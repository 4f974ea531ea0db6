#include "bounds.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <ostream>
#include <random>
#include <set>

#include "bitstree/bits_tree.hpp"
#include "bitstree/segment_tree.hpp"

namespace bitstree::bench {

using ordered_json = nlohmann::ordered_json;

namespace {

std::uint64_t pick(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

int ceil_log2(std::size_t n) {
    return n <= 1 ? 0 : std::bit_width(n - 1);
}

std::vector<segment> random_segments(std::mt19937_64& rng, std::size_t n,
                                     coord window) {
    const coord max_len = std::max<coord>(1, window / 4);
    std::vector<segment> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const coord len = 1 + static_cast<coord>(pick(rng, max_len));
        const coord lo = static_cast<coord>(
            pick(rng, static_cast<std::uint64_t>(window - len + 1)));
        out.push_back({i + 1, lo, lo + len});
    }
    return out;
}

// Segments [4i, 4i+2]: every endpoint distinct, so the static tree must hit
// its 4n+1 node maximum exactly.
std::vector<segment> distinct_endpoint_segments(std::size_t n) {
    std::vector<segment> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const coord base = static_cast<coord>(4 * i);
        out.push_back({i + 1, base, base + 2});
    }
    return out;
}

}  // namespace

bounds_result run_bounds(const bounds_options& opt, std::ostream* report) {
    bounds_result result;
    std::mt19937_64 rng(opt.seed);

    if (report) {
        *report << ordered_json{
            {"event", "header"},
            {"tool", "bounds"},
            {"n_max", opt.n_max},
            {"trials", opt.trials},
            {"seed", opt.seed},
            {"distribution",
             "window 4n, endpoints uniform over the window, lengths uniform "
             "in [1, window/4]"}} << '\n';
    }

    for (std::size_t n = 1; n <= opt.n_max; ++n) {
        std::size_t max_nodes = 0, max_cumulative = 0;
        int max_height = -1;
        std::size_t sst_max_nodes = 0;
        bool ok = true;
        std::string why;

        auto check_set = [&](const std::vector<segment>& segs,
                             bool endpoints_distinct_by_construction) {
            ++result.trials_run;
            bits_tree tree;
            for (const segment& s : segs) tree.insert(s);
            const auto st = tree.stats();
            max_nodes = std::max(max_nodes, st.node_count);
            max_cumulative = std::max(max_cumulative, st.cumulative_list_size);
            max_height = std::max(max_height, st.height);

            if (st.node_count > 2 * n - 1) {
                ok = false;
                why = "tree node count exceeds 2n-1";
            }
            if (st.cumulative_list_size > n * n) {
                ok = false;
                why = "cumulative list size exceeds n^2";
            }
            if (st.node_count >= 2 &&
                !(st.height < 1.441 * ceil_log2(st.node_count) + 1)) {
                ok = false;
                why = "height exceeds the balanced-tree bound";
            }
            if (auto violation = tree.check_invariants()) {
                ok = false;
                why = "invariant: " + *violation;
            }

            auto sst = sst_tree::build(segs);
            const auto sst_nodes = sst.stats().node_count;
            sst_max_nodes = std::max(sst_max_nodes, sst_nodes);
            if (sst_nodes > 4 * n + 1) {
                ok = false;
                why = "static tree node count exceeds 4n+1";
            }
            std::set<coord> distinct;
            for (const segment& s : segs) {
                distinct.insert(s.lo);
                distinct.insert(s.hi);
            }
            if ((endpoints_distinct_by_construction || distinct.size() == 2 * n) &&
                sst_nodes != 4 * n + 1) {
                ok = false;
                why = "static tree missed 4n+1 with distinct endpoints";
            }

            coord lo = segs.front().lo, hi = segs.front().hi;
            for (const segment& s : segs) {
                lo = std::min(lo, s.lo);
                hi = std::max(hi, s.hi);
            }
            dst_tree dst(lo, hi);
            for (const segment& s : segs) dst.insert(s);
            if (dst.stats().node_count !=
                static_cast<std::size_t>(2 * (hi - lo) - 1)) {
                ok = false;
                why = "dynamic tree node count is not 2(hi-lo)-1";
            }
        };

        const coord window = static_cast<coord>(std::max<std::size_t>(8, 4 * n));
        for (std::size_t trial = 0; trial < opt.trials; ++trial)
            check_set(random_segments(rng, n, window), false);
        check_set(distinct_endpoint_segments(n), true);

        if (!ok) ++result.violations;
        if (report) {
            *report << ordered_json{{"event", "bounds"},
                                    {"n", n},
                                    {"max_nodes", max_nodes},
                                    {"node_bound", 2 * n - 1},
                                    {"max_cumulative", max_cumulative},
                                    {"cumulative_bound", n * n},
                                    {"max_height", max_height},
                                    {"sst_max_nodes", sst_max_nodes},
                                    {"sst_node_bound", 4 * n + 1},
                                    {"ok", ok},
                                    {"why", why}} << '\n';
        }
    }

    if (report) {
        *report << ordered_json{{"event", "summary"},
                                {"violations", result.violations},
                                {"trials", result.trials_run}} << '\n';
    }
    return result;
}

}  // namespace bitstree::bench

#include "fuzz.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "bitstree/bits_tree.hpp"
#include "bitstree/oracle.hpp"

namespace bitstree::bench {

using ordered_json = nlohmann::ordered_json;

namespace {

// Modulo reduction keeps the stream identical across standard libraries,
// which uniform_int_distribution would not.
std::uint64_t pick(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

int ceil_log2(std::size_t n) {
    return n <= 1 ? 0 : std::bit_width(n - 1);
}

struct replay_outcome {
    fuzz_result totals;
    bool failed = false;
    std::size_t fail_index = 0;
    std::string message;
};

std::string describe(const workload_op& op) {
    std::ostringstream os;
    switch (op.k) {
        case workload_op::kind::insert:
            os << "insert s" << op.seg.id << " [" << op.seg.lo << ',' << op.seg.hi << ']';
            break;
        case workload_op::kind::erase:
            os << "delete s" << op.seg.id;
            break;
        case workload_op::kind::stab:
            os << "stab " << op.x;
            break;
        case workload_op::kind::range:
            os << "range [" << op.r.lo << ',' << op.r.hi << ']';
            break;
        default:
            os << "op";
    }
    return os.str();
}

// Executes ops against tree and bag in lockstep, stopping at the first
// failure. Collects the aggregate instrumentation either way.
replay_outcome replay(const std::vector<workload_op>& ops) {
    replay_outcome out;
    bits_tree tree;
    segment_bag bag;

    // Rotation transparency: the subtree under the rotated slot must read the
    // same before and after; periodically cross-check the full sequence too.
    std::vector<inorder_entry> before_subtree;
    std::vector<inorder_entry> before_full;
    bool want_full = false;
    std::size_t rotation_seen = 0;
    std::size_t rotation_violations = 0;
    tree.set_rotation_observer([&](const rotation_event& ev) {
        if (!ev.after) {
            ++rotation_seen;
            want_full = rotation_seen % 512 == 1;
            before_subtree = tree.subtree_entries(ev.subtree_root);
            if (want_full) before_full = tree.inorder();
        } else {
            if (before_subtree != tree.subtree_entries(ev.subtree_root))
                ++rotation_violations;
            if (want_full && before_full != tree.inorder())
                ++rotation_violations;
        }
    });

    auto fail = [&](std::size_t idx, std::string why) {
        out.failed = true;
        out.fail_index = idx;
        out.message = describe(ops[idx]) + ": " + std::move(why);
    };

    for (std::size_t i = 0; i < ops.size() && !out.failed; ++i) {
        const workload_op& op = ops[i];
        const bool mutation = op.k == workload_op::kind::insert ||
                              op.k == workload_op::kind::erase;
        switch (op.k) {
            case workload_op::kind::insert:
                tree.insert(op.seg);
                bag.insert(op.seg);
                ++out.totals.inserts;
                break;
            case workload_op::kind::erase: {
                const bool t = tree.erase(op.seg.id);
                const bool o = bag.erase(op.seg.id);
                if (t != o) {
                    ++out.totals.divergences;
                    fail(i, "presence disagrees with the oracle");
                }
                break;
            }
            case workload_op::kind::stab: {
                const auto tr = tree.stab(op.x);
                if (tr.segments != bag.stab(op.x)) {
                    ++out.totals.divergences;
                    fail(i, "stab answer diverges from the oracle");
                    break;
                }
                const auto st = tree.stats();
                if (tree.node_count() > 0 &&
                    tr.nodes_visited > static_cast<std::size_t>(st.height) + 2) {
                    ++out.totals.stab_bound_violations;
                    fail(i, "stab visited more than height+2 nodes");
                }
                break;
            }
            case workload_op::kind::range: {
                const auto tr = tree.range_query(op.r);
                if (tr.segments != bag.range_query(op.r)) {
                    ++out.totals.divergences;
                    fail(i, "range answer diverges from the oracle");
                    break;
                }
                std::size_t walked = 0;
                tree.for_each_node([&](const range& r, const id_set&) {
                    if (r.hi >= op.r.lo && r.lo <= op.r.hi) ++walked;
                });
                const auto st = tree.stats();
                const std::size_t height = st.height < 0 ? 0 : st.height;
                if (tr.nodes_visited > height + walked + 2) {
                    ++out.totals.range_bound_violations;
                    fail(i, "range query visited more than height+p+2 nodes");
                }
                break;
            }
            default:
                break;
        }
        ++out.totals.executed;

        if (mutation && !out.failed) {
            if (auto violation = tree.check_invariants()) {
                ++out.totals.invariant_failures;
                fail(i, "invariant violated: " + *violation);
            } else {
                const auto st = tree.stats();
                const std::size_t n = st.segment_count;
                bool bounds_ok = n == 0 ? st.node_count == 0
                                       : st.node_count <= 2 * n - 1;
                if (st.cumulative_list_size > n * n) bounds_ok = false;
                if (st.node_count >= 2 &&
                    !(st.height < 1.441 * ceil_log2(st.node_count) + 1))
                    bounds_ok = false;
                if (!bounds_ok) {
                    ++out.totals.size_bound_violations;
                    fail(i, "size/height bound violated");
                }
                out.totals.max_live_segments =
                    std::max(out.totals.max_live_segments, n);
                out.totals.max_nodes =
                    std::max(out.totals.max_nodes, st.node_count);
            }
        }
    }

    out.totals.rotation_violations = rotation_violations;
    out.totals.rotations = tree.rotation_count();
    out.totals.insert_node_exams = tree.counters().insert_node_exams;
    return out;
}

}  // namespace

std::vector<workload_op> shrink_ops(
    std::vector<workload_op> ops,
    const std::function<bool(const std::vector<workload_op>&)>& still_fails) {
    std::size_t chunk = std::max<std::size_t>(1, ops.size() / 2);
    for (;;) {
        bool removed_any = false;
        for (std::size_t start = 0; start < ops.size();) {
            std::vector<workload_op> candidate;
            candidate.reserve(ops.size());
            candidate.insert(candidate.end(), ops.begin(), ops.begin() + start);
            candidate.insert(candidate.end(),
                             ops.begin() + std::min(start + chunk, ops.size()),
                             ops.end());
            if (!candidate.empty() && still_fails(candidate)) {
                ops = std::move(candidate);
                removed_any = true;
            } else {
                start += chunk;
            }
        }
        if (chunk > 1)
            chunk /= 2;
        else if (!removed_any)
            break;
    }
    return ops;
}

fuzz_result run_fuzz(const fuzz_options& opt, std::ostream* report) {
    std::mt19937_64 rng(opt.seed);
    const coord window = opt.window_hi - opt.window_lo;
    const coord max_len = std::max<coord>(1, window / 4);

    // Pre-generate the whole deterministic workload so a failure can be
    // shrunk by replaying subsets.
    std::vector<workload_op> ops;
    ops.reserve(opt.ops);
    std::vector<segment_id> live;
    segment_id next_id = 1;
    for (std::size_t i = 0; i < opt.ops; ++i) {
        workload_op op;
        // 30% insert, 20% delete, 30% stab, 20% range; the surplus of inserts
        // grows the tree over the run.
        std::uint64_t k = pick(rng, 10);
        k = k < 3 ? 0 : k < 5 ? 1 : k < 8 ? 2 : 3;
        if (k == 1 && live.empty()) k = 0;  // nothing to delete yet
        switch (k) {
            case 0: {
                const coord len = 1 + static_cast<coord>(pick(rng, max_len));
                const coord lo =
                    opt.window_lo + static_cast<coord>(pick(
                                        rng, static_cast<std::uint64_t>(
                                                 window - len + 1)));
                op.k = workload_op::kind::insert;
                op.seg = {next_id++, lo, lo + len};
                live.push_back(op.seg.id);
                break;
            }
            case 1: {
                const std::size_t at = pick(rng, live.size());
                op.k = workload_op::kind::erase;
                op.seg.id = live[at];
                live[at] = live.back();
                live.pop_back();
                break;
            }
            case 2: {
                op.k = workload_op::kind::stab;
                op.x = opt.window_lo - 5 +
                       static_cast<coord>(pick(
                           rng, static_cast<std::uint64_t>(window + 11)));
                break;
            }
            default: {
                coord u = opt.window_lo +
                          static_cast<coord>(pick(
                              rng, static_cast<std::uint64_t>(window + 1)));
                coord v = opt.window_lo +
                          static_cast<coord>(pick(
                              rng, static_cast<std::uint64_t>(window + 1)));
                if (u > v) std::swap(u, v);
                if (u == v) ++v;
                op.k = workload_op::kind::range;
                op.r = {u, v};
                break;
            }
        }
        ops.push_back(op);
    }

    if (report) {
        *report << ordered_json{
            {"event", "header"},
            {"tool", "fuzz"},
            {"seed", opt.seed},
            {"ops", opt.ops},
            {"window", {opt.window_lo, opt.window_hi}},
            {"distribution",
             "endpoints uniform over the window, lengths uniform in [1, "
             "window/4], deletes uniform over live ids"}} << '\n';
    }

    replay_outcome outcome = replay(ops);
    fuzz_result result = outcome.totals;

    if (outcome.failed) {
        result.first_failure = outcome.message;
        std::vector<workload_op> slice(ops.begin(),
                                       ops.begin() + outcome.fail_index + 1);
        result.reproducer = shrink_ops(
            std::move(slice), [](const std::vector<workload_op>& candidate) {
                return replay(candidate).failed;
            });
        if (!opt.reproducer_path.empty()) {
            std::ofstream repro(opt.reproducer_path);
            repro << "# minimized failing sequence, seed " << opt.seed << "\n";
            // Tokens mirror the numeric ids so the script replays standalone.
            id_table table;
            std::vector<workload_op> renamed = result.reproducer;
            for (workload_op& op : renamed)
                if (op.k == workload_op::kind::insert ||
                    op.k == workload_op::kind::erase)
                    op.seg.id = table.intern("s" + std::to_string(op.seg.id));
            write_script(repro, renamed, table);
        }
    }

    if (report) {
        *report << ordered_json{
            {"event", "summary"},
            {"executed", result.executed},
            {"divergences", result.divergences},
            {"invariant_failures", result.invariant_failures},
            {"rotation_violations", result.rotation_violations},
            {"stab_bound_violations", result.stab_bound_violations},
            {"range_bound_violations", result.range_bound_violations},
            {"size_bound_violations", result.size_bound_violations},
            {"rotations", result.rotations},
            {"inserts", result.inserts},
            {"insert_node_exams", result.insert_node_exams},
            {"max_live_segments", result.max_live_segments},
            {"max_nodes", result.max_nodes},
            {"first_failure", result.first_failure}} << '\n';
    }
    return result;
}

}  // namespace bitstree::bench

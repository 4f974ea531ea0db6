#include "compare.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <ostream>

#include "bitstree/bits_tree.hpp"
#include "bitstree/segment_tree.hpp"

namespace bitstree::bench {

using ordered_json = nlohmann::ordered_json;

namespace {

int ceil_log2(std::size_t n) {
    return n <= 1 ? 0 : std::bit_width(n - 1);
}

struct stab_scan {
    std::size_t max_visits = 0;
    coord argmax = 0;
};

template <typename StabFn>
stab_scan scan_stabs(coord lo, coord hi, StabFn&& stab) {
    stab_scan out;
    for (coord x = lo; x <= hi; ++x) {
        const std::size_t visits = stab(x);
        if (visits > out.max_visits) {
            out.max_visits = visits;
            out.argmax = x;
        }
    }
    return out;
}

}  // namespace

int run_compare(const std::vector<segment>& segs, const id_table& table,
                const compare_options& opt, std::ostream& out) {
    (void)table;
    if (segs.empty()) {
        out << ordered_json{{"event", "error"},
                            {"reason", "compare needs at least one segment"}}
            << '\n';
        return 1;
    }

    const std::size_t n = segs.size();
    coord span_lo = segs.front().lo, span_hi = segs.front().hi;
    for (const segment& s : segs) {
        span_lo = std::min(span_lo, s.lo);
        span_hi = std::max(span_hi, s.hi);
    }
    const auto [dst_lo, dst_hi] =
        opt.dst_range.value_or(std::make_pair(span_lo, span_hi));

    bits_tree bits;
    for (const segment& s : segs) bits.insert(s);
    auto sst = sst_tree::build(segs);
    dst_tree dst(dst_lo, dst_hi);
    std::size_t dst_skipped = 0;
    for (const segment& s : segs) {
        try {
            dst.insert(s);
        } catch (const std::out_of_range&) {
            ++dst_skipped;
        }
    }

    const auto bits_st = bits.stats();
    const auto sst_st = sst.stats();
    const auto dst_st = dst.stats();
    const coord dst_span = dst_hi - dst_lo;

    out << ordered_json{{"event", "header"},
                        {"tool", "compare"},
                        {"segments", n},
                        {"span", {span_lo, span_hi}},
                        {"dst_range", {dst_lo, dst_hi}},
                        {"dst_skipped_out_of_range", dst_skipped}} << '\n';

    std::size_t failures = 0;
    auto row = [&](const char* metric, std::size_t sst_v, std::size_t dst_v,
                   std::size_t bits_v, bool pass) {
        if (!pass) ++failures;
        out << ordered_json{{"event", "row"},
                            {"metric", metric},
                            {"sst", sst_v},
                            {"dst", dst_v},
                            {"bits", bits_v},
                            {"pass", pass}} << '\n';
    };

    row("node_count", sst_st.node_count, dst_st.node_count, bits_st.node_count,
        sst_st.node_count <= 4 * n + 1 &&
            dst_st.node_count == static_cast<std::size_t>(2 * dst_span - 1) &&
            bits_st.node_count <= 2 * n - 1);
    row("cumulative_list_size", sst_st.cumulative_list_size,
        dst_st.cumulative_list_size, bits_st.cumulative_list_size,
        bits_st.cumulative_list_size <= n * n &&
            sst_st.cumulative_list_size <=
                2 * n * static_cast<std::size_t>(ceil_log2(2 * n + 1)) - 1);
    row("height", sst_st.height, dst_st.height, bits_st.height,
        sst_st.height <= ceil_log2(2 * n + 1) &&
            dst_st.height == ceil_log2(static_cast<std::size_t>(dst_span)) &&
            (bits_st.node_count < 2 ||
             bits_st.height < 1.441 * ceil_log2(bits_st.node_count) + 1));

    const auto sst_scan = scan_stabs(
        span_lo - 2, span_hi + 2,
        [&](coord x) { return sst.stab(x).nodes_visited; });
    const auto dst_scan = scan_stabs(
        span_lo - 2, span_hi + 2,
        [&](coord x) { return dst.stab(x).nodes_visited; });
    const auto bits_scan = scan_stabs(
        span_lo - 2, span_hi + 2,
        [&](coord x) { return bits.stab(x).nodes_visited; });

    const bool stab_pass =
        sst_scan.max_visits <= 2 * static_cast<std::size_t>(sst_st.height) + 1 &&
        dst_scan.max_visits <= 2 * static_cast<std::size_t>(dst_st.height) + 1 &&
        bits_scan.max_visits <= static_cast<std::size_t>(bits_st.height) + 2;
    if (!stab_pass) ++failures;
    out << ordered_json{{"event", "row"},
                        {"metric", "max_stab_visits"},
                        {"sst", sst_scan.max_visits},
                        {"sst_at", sst_scan.argmax},
                        {"dst", dst_scan.max_visits},
                        {"dst_at", dst_scan.argmax},
                        {"bits", bits_scan.max_visits},
                        {"bits_at", bits_scan.argmax},
                        {"pass", stab_pass}} << '\n';

    out << ordered_json{{"event", "summary"}, {"failures", failures}} << '\n';
    return failures == 0 ? 0 : 2;
}

}  // namespace bitstree::bench

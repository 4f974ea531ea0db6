#pragma once

#include <iosfwd>
#include <optional>
#include <utility>

#include "workload.hpp"

namespace bitstree::bench {

struct compare_options {
    std::optional<std::pair<coord, coord>> dst_range;  // default: segment span
};

/// Builds all three structures over the same segment set and reports the
/// node-count, cumulative-list-size, height, and maximum-stabbing-visit
/// metrics side by side, each checked against its size/height bound. Returns
/// 0, or 2 when any bound fails.
int run_compare(const std::vector<segment>& segs, const id_table& table,
                const compare_options& opt, std::ostream& out);

}  // namespace bitstree::bench

#pragma once

#include <cstdint>
#include <iosfwd>

#include "workload.hpp"

namespace bitstree::bench {

struct bounds_options {
    std::size_t n_max = 200;
    std::size_t trials = 20;
    std::uint64_t seed = 0;
};

struct bounds_result {
    std::size_t violations = 0;
    std::size_t trials_run = 0;
};

/// For every segment-set size up to n_max, over `trials` random sets each,
/// checks the size and height bounds of all three structures: tree nodes
/// <= 2n-1, cumulative list size <= n^2, height < 1.441*ceil(log2(nodes))+1,
/// static-tree nodes <= 4n+1 (equal when all endpoints are distinct), and
/// dynamic-tree nodes == 2*(hi-lo)-1. Emits one JSON record per size.
bounds_result run_bounds(const bounds_options& opt, std::ostream* report);

}  // namespace bitstree::bench

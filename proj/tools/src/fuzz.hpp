#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "workload.hpp"

namespace bitstree::bench {

struct fuzz_options {
    std::uint64_t seed = 0;
    std::size_t ops = 10000;
    coord window_lo = 0;
    coord window_hi = 1000;
    std::string reproducer_path;  // empty: do not write one
};

struct fuzz_result {
    std::size_t executed = 0;
    std::size_t divergences = 0;
    std::size_t invariant_failures = 0;
    std::size_t rotation_violations = 0;
    std::size_t stab_bound_violations = 0;
    std::size_t range_bound_violations = 0;
    std::size_t size_bound_violations = 0;
    std::uint64_t rotations = 0;
    std::uint64_t insert_node_exams = 0;
    std::size_t inserts = 0;
    std::size_t max_live_segments = 0;
    std::size_t max_nodes = 0;
    std::string first_failure;
    std::vector<workload_op> reproducer;  // minimized; empty when clean

    std::size_t failures() const {
        return divergences + invariant_failures + rotation_violations +
               stab_bound_violations + range_bound_violations + size_bound_violations;
    }
    bool ok() const { return failures() == 0; }
};

/// Generates a deterministic mixed workload from the seed, executes it against
/// the tree and the brute-force bag in lockstep, runs the invariant checker
/// after every mutation, compares every query, and verifies the rotation
/// and visit-count properties along the way. On failure the op sequence is
/// shrunk to a minimal reproducer. The JSONL report is written to `report`
/// when non-null.
fuzz_result run_fuzz(const fuzz_options& opt, std::ostream* report);

/// Greedily removes chunks of `ops` while `still_fails` keeps returning true.
std::vector<workload_op> shrink_ops(
    std::vector<workload_op> ops,
    const std::function<bool(const std::vector<workload_op>&)>& still_fails);

}  // namespace bitstree::bench

#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

namespace bitstree {

// Coordinates are exact 64-bit integers: every boundary comparison in the
// interval algebra is an exact equality test, so floating point is out.
using coord = std::int64_t;
using segment_id = std::uint64_t;

/// Sorted, duplicate-free set of segment ids with value semantics.
/// Node lists are id sets: two segments may share endpoints but never an id.
class id_set {
public:
    id_set() = default;
    id_set(std::initializer_list<segment_id> init);

    bool contains(segment_id id) const;
    bool insert(segment_id id);  // false if already present
    bool erase(segment_id id);   // false if absent
    void clear() { ids_.clear(); }

    std::size_t size() const { return ids_.size(); }
    bool empty() const { return ids_.empty(); }

    auto begin() const { return ids_.begin(); }
    auto end() const { return ids_.end(); }

    friend bool operator==(const id_set&, const id_set&) = default;
    friend id_set set_union(const id_set& a, const id_set& b);

private:
    std::vector<segment_id> ids_;
};

id_set set_union(const id_set& a, const id_set& b);

/// A node range [lo, hi]. Default-constructed ranges are the empty range;
/// any value with lo >= hi counts as empty and all empty ranges compare equal.
struct range {
    coord lo = 0;
    coord hi = 0;

    bool empty() const { return !(lo < hi); }
    bool contains(coord x) const { return !empty() && lo <= x && x <= hi; }
    coord length() const { return empty() ? 0 : hi - lo; }

    friend bool operator==(const range& a, const range& b) {
        if (a.empty() || b.empty()) return a.empty() && b.empty();
        return a.lo == b.lo && a.hi == b.hi;
    }
};

/// A stored segment: a closed interval [lo, hi] with lo < hi, identified by id.
struct segment {
    segment_id id = 0;
    coord lo = 0;
    coord hi = 0;

    segment() = default;
    segment(segment_id id, coord lo, coord hi);

    range extent() const { return {lo, hi}; }
};

enum class interval_order {
    left_of,      // s.hi <= t.lo
    right_of,     // t.hi <= s.lo
    overlapping,  // interiors intersect
};

enum class overlap_class {
    left_of,
    right_of,
    left_overlaps,   // p < m < q < n
    right_overlaps,  // m < p < n < q
    contained_in,    // s inside t, not equal
    covered_up,      // t inside s, not equal
    equal,
};

std::string to_string(const range& r);
std::string to_string(overlap_class c);
std::ostream& operator<<(std::ostream& os, const range& r);
std::ostream& operator<<(std::ostream& os, const id_set& ids);

/// Three-way position of two non-empty ranges. Endpoint touching counts as
/// disjoint; the shared point belongs to both closed ranges but not to the
/// interiors.
interval_order compare_intervals(const range& s, const range& t);

/// Full overlap classification of two non-empty ranges.
overlap_class classify_overlap(const range& s, const range& t);

/// [min(lo), max(hi)] of two overlapping ranges.
range interval_union(const range& s, const range& t);

/// [max(lo), min(hi)], or the empty range when interiors do not intersect.
range interval_intersection(const range& s, const range& t);

/// Decomposition of the union of two overlapping ranges into the part left of
/// the intersection, the intersection, and the part right of it, with the id
/// list each part carries.
struct partition_result {
    range left;
    range center;
    range right;
    id_set left_list;
    id_set center_list;
    id_set right_list;
};

/// Splits s ∪ t into left/center/right. The center keeps the union of both
/// lists; the side parts carry the list of whichever input extends further on
/// that side, computed independently from the original inputs.
partition_result partition(const range& s, const id_set& list_s,
                           const range& t, const id_set& list_t);

}  // namespace bitstree

#include "bitstree/interval.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bitstree {

id_set::id_set(std::initializer_list<segment_id> init) : ids_(init) {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

bool id_set::contains(segment_id id) const {
    return std::binary_search(ids_.begin(), ids_.end(), id);
}

bool id_set::insert(segment_id id) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it != ids_.end() && *it == id) return false;
    ids_.insert(it, id);
    return true;
}

bool id_set::erase(segment_id id) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return false;
    ids_.erase(it);
    return true;
}

id_set set_union(const id_set& a, const id_set& b) {
    id_set out;
    out.ids_.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                   std::back_inserter(out.ids_));
    return out;
}

segment::segment(segment_id id, coord lo, coord hi) : id(id), lo(lo), hi(hi) {
    if (!(lo < hi))
        throw std::invalid_argument("segment endpoints must satisfy lo < hi");
}

namespace {

void require_nonempty(const range& s, const range& t, const char* op) {
    if (s.empty() || t.empty())
        throw std::invalid_argument(std::string(op) + ": empty range operand");
}

}  // namespace

interval_order compare_intervals(const range& s, const range& t) {
    require_nonempty(s, t, "compare_intervals");
    if (s.hi <= t.lo) return interval_order::left_of;
    if (t.hi <= s.lo) return interval_order::right_of;
    return interval_order::overlapping;
}

overlap_class classify_overlap(const range& s, const range& t) {
    require_nonempty(s, t, "classify_overlap");
    const coord p = s.lo, q = s.hi, m = t.lo, n = t.hi;
    if (q <= m) return overlap_class::left_of;
    if (n <= p) return overlap_class::right_of;
    if (p == m && q == n) return overlap_class::equal;
    if (m <= p && q <= n) return overlap_class::contained_in;
    if (p <= m && n <= q) return overlap_class::covered_up;
    if (p < m) return overlap_class::left_overlaps;
    return overlap_class::right_overlaps;
}

range interval_union(const range& s, const range& t) {
    if (compare_intervals(s, t) != interval_order::overlapping)
        throw std::invalid_argument("interval_union: ranges do not overlap");
    return {std::min(s.lo, t.lo), std::max(s.hi, t.hi)};
}

range interval_intersection(const range& s, const range& t) {
    require_nonempty(s, t, "interval_intersection");
    const coord lo = std::max(s.lo, t.lo);
    const coord hi = std::min(s.hi, t.hi);
    if (lo >= hi) return {};
    return {lo, hi};
}

partition_result partition(const range& s, const id_set& list_s,
                           const range& t, const id_set& list_t) {
    if (compare_intervals(s, t) != interval_order::overlapping)
        throw std::invalid_argument("partition: ranges do not overlap");

    partition_result out;
    const coord a = std::min(s.lo, t.lo);
    const coord b = std::max(s.hi, t.hi);
    out.center = interval_intersection(s, t);

    if (a != out.center.lo) {
        out.left = {a, out.center.lo};
        out.left_list = s.lo < t.lo ? list_s : list_t;
    }
    if (b != out.center.hi) {
        out.right = {out.center.hi, b};
        out.right_list = t.hi < s.hi ? list_s : list_t;
    }
    out.center_list = set_union(list_s, list_t);
    return out;
}

std::string to_string(const range& r) {
    if (r.empty()) return "[empty]";
    std::ostringstream os;
    os << '[' << r.lo << ',' << r.hi << ']';
    return os.str();
}

std::string to_string(overlap_class c) {
    switch (c) {
        case overlap_class::left_of: return "left_of";
        case overlap_class::right_of: return "right_of";
        case overlap_class::left_overlaps: return "left_overlaps";
        case overlap_class::right_overlaps: return "right_overlaps";
        case overlap_class::contained_in: return "contained_in";
        case overlap_class::covered_up: return "covered_up";
        case overlap_class::equal: return "equal";
    }
    return "?";
}

std::ostream& operator<<(std::ostream& os, const range& r) {
    return os << to_string(r);
}

std::ostream& operator<<(std::ostream& os, const id_set& ids) {
    os << '{';
    bool first = true;
    for (segment_id id : ids) {
        if (!first) os << ',';
        os << id;
        first = false;
    }
    return os << '}';
}

}  // namespace bitstree

#include "bitstree/segment_tree.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace bitstree {

namespace {

// Open-interval intersection test between a slab and a segment; infinite slab
// ends never restrict the segment side.
bool interior_intersects(const sst_tree::slab_node& n, const segment& s) {
    const coord lo = n.neg_inf ? s.lo : std::max(n.lo, s.lo);
    const coord hi = n.pos_inf ? s.hi : std::min(n.hi, s.hi);
    return lo < hi;
}

bool interior_intersects(const dst_tree::dst_node& n, const segment& s) {
    return std::max(n.lo, s.lo) < std::min(n.hi, s.hi);
}

}  // namespace

// -- static segment tree --------------------------------------------------------

std::int32_t sst_tree::build_skeleton(std::vector<slab_node>& leaves,
                                      std::int32_t i, std::int32_t j,
                                      int& height) {
    if (i == j) {
        height = 0;
        nodes_.push_back(leaves[i]);
        return static_cast<std::int32_t>(nodes_.size() - 1);
    }
    const std::int32_t mid = i + (j - i) / 2;
    int hl = 0, hr = 0;
    const std::int32_t l = build_skeleton(leaves, i, mid, hl);
    const std::int32_t r = build_skeleton(leaves, mid + 1, j, hr);
    slab_node n;
    n.lo = nodes_[l].lo;
    n.neg_inf = nodes_[l].neg_inf;
    n.hi = nodes_[r].hi;
    n.pos_inf = nodes_[r].pos_inf;
    n.left = l;
    n.right = r;
    nodes_.push_back(std::move(n));
    height = 1 + std::max(hl, hr);
    return static_cast<std::int32_t>(nodes_.size() - 1);
}

sst_tree sst_tree::build(const std::vector<segment>& segs) {
    if (segs.empty())
        throw std::invalid_argument("sst_tree: at least one segment required");

    std::vector<coord> endpoints;
    endpoints.reserve(segs.size() * 2);
    for (const segment& s : segs) {
        if (!(s.lo < s.hi))
            throw std::invalid_argument("sst_tree: segment lo < hi required");
        endpoints.push_back(s.lo);
        endpoints.push_back(s.hi);
    }
    std::sort(endpoints.begin(), endpoints.end());
    endpoints.erase(std::unique(endpoints.begin(), endpoints.end()),
                    endpoints.end());

    // m distinct endpoints give m+1 elementary slabs, the outer two unbounded.
    std::vector<slab_node> leaves;
    leaves.reserve(endpoints.size() + 1);
    slab_node first;
    first.neg_inf = true;
    first.hi = endpoints.front();
    leaves.push_back(first);
    for (std::size_t k = 0; k + 1 < endpoints.size(); ++k)
        leaves.push_back({endpoints[k], endpoints[k + 1], false, false, -1, -1, {}});
    slab_node last;
    last.lo = endpoints.back();
    last.pos_inf = true;
    leaves.push_back(last);

    sst_tree t;
    t.nodes_.reserve(2 * leaves.size() - 1);
    t.root_ = t.build_skeleton(leaves, 0,
                               static_cast<std::int32_t>(leaves.size() - 1),
                               t.height_);
    t.segment_count_ = segs.size();
    for (const segment& s : segs) t.place(t.root_, s);
    return t;
}

void sst_tree::place(std::int32_t idx, const segment& s) {
    slab_node& n = nodes_[idx];
    if (!n.neg_inf && !n.pos_inf && s.lo <= n.lo && n.hi <= s.hi) {
        if (!n.list.insert(s.id))
            throw std::invalid_argument("sst_tree: duplicate segment id");
        return;
    }
    assert(n.left >= 0);  // an intersecting leaf slab is always covered
    if (interior_intersects(nodes_[n.left], s)) place(n.left, s);
    if (interior_intersects(nodes_[n.right], s)) place(n.right, s);
}

void sst_tree::collect(std::int32_t idx, coord x, query_trace& t) const {
    const slab_node& n = nodes_[idx];
    t.segments = set_union(t.segments, n.list);
    if (n.left < 0) return;
    if (nodes_[n.left].contains(x)) {
        ++t.nodes_visited;
        collect(n.left, x, t);
    }
    if (nodes_[n.right].contains(x)) {
        ++t.nodes_visited;
        collect(n.right, x, t);
    }
}

query_trace sst_tree::stab(coord x) const {
    query_trace t;
    if (root_ < 0) return t;
    ++t.nodes_visited;
    collect(root_, x, t);
    return t;
}

tree_stats sst_tree::stats() const {
    tree_stats st;
    st.node_count = nodes_.size();
    st.height = height_;
    st.segment_count = segment_count_;
    for (const slab_node& n : nodes_) st.cumulative_list_size += n.list.size();
    return st;
}

// -- dynamic segment tree ---------------------------------------------------------

std::int32_t dst_tree::build_skeleton(coord lo, coord hi, int& height) {
    if (hi - lo == 1) {
        height = 0;
        nodes_.push_back({lo, hi, -1, -1, {}});
        return static_cast<std::int32_t>(nodes_.size() - 1);
    }
    const coord mid = lo + (hi - lo) / 2;
    int hl = 0, hr = 0;
    const std::int32_t l = build_skeleton(lo, mid, hl);
    const std::int32_t r = build_skeleton(mid, hi, hr);
    nodes_.push_back({lo, hi, l, r, {}});
    height = 1 + std::max(hl, hr);
    return static_cast<std::int32_t>(nodes_.size() - 1);
}

dst_tree::dst_tree(coord lo, coord hi) : lo_(lo), hi_(hi) {
    if (!(lo < hi))
        throw std::invalid_argument("dst_tree: range lo < hi required");
    nodes_.reserve(static_cast<std::size_t>(2 * (hi - lo) - 1));
    root_ = build_skeleton(lo, hi, height_);
}

void dst_tree::insert(const segment& s) {
    if (!(s.lo < s.hi))
        throw std::invalid_argument("dst_tree: segment lo < hi required");
    if (s.lo < lo_ || s.hi > hi_)
        throw std::out_of_range("dst_tree: segment range exceeds the tree range");
    if (registry_.contains(s.id))
        throw std::invalid_argument("dst_tree: duplicate segment id");
    place(root_, s, true);
    registry_.emplace(s.id, s);
}

bool dst_tree::erase(segment_id id) {
    auto it = registry_.find(id);
    if (it == registry_.end()) return false;
    return erase(it->second);
}

bool dst_tree::erase(const segment& s) {
    auto it = registry_.find(s.id);
    if (it == registry_.end()) return false;
    if (it->second.lo != s.lo || it->second.hi != s.hi)
        throw std::invalid_argument(
            "dst_tree: endpoints do not match the stored segment with this id");
    place(root_, s, false);
    registry_.erase(it);
    return true;
}

void dst_tree::place(std::int32_t idx, const segment& s, bool add) {
    dst_node& n = nodes_[idx];
    if (s.lo <= n.lo && n.hi <= s.hi) {
        if (add)
            n.list.insert(s.id);
        else
            n.list.erase(s.id);
        return;
    }
    assert(n.left >= 0);
    if (interior_intersects(nodes_[n.left], s)) place(n.left, s, add);
    if (interior_intersects(nodes_[n.right], s)) place(n.right, s, add);
}

void dst_tree::collect(std::int32_t idx, coord x, query_trace& t) const {
    const dst_node& n = nodes_[idx];
    t.segments = set_union(t.segments, n.list);
    if (n.left < 0) return;
    if (nodes_[n.left].contains(x)) {
        ++t.nodes_visited;
        collect(n.left, x, t);
    }
    if (nodes_[n.right].contains(x)) {
        ++t.nodes_visited;
        collect(n.right, x, t);
    }
}

query_trace dst_tree::stab(coord x) const {
    query_trace t;
    if (root_ < 0) return t;
    ++t.nodes_visited;
    if (!nodes_[root_].contains(x)) return t;  // outside the fixed range
    collect(root_, x, t);
    return t;
}

tree_stats dst_tree::stats() const {
    tree_stats st;
    st.node_count = nodes_.size();
    st.height = height_;
    st.segment_count = registry_.size();
    for (const dst_node& n : nodes_) st.cumulative_list_size += n.list.size();
    return st;
}

}  // namespace bitstree

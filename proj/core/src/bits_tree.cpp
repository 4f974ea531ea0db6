#include "bitstree/bits_tree.hpp"

#include <cassert>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace bitstree {

std::string to_string(rotation_kind k) {
    switch (k) {
        case rotation_kind::left_left: return "left_left";
        case rotation_kind::right_right: return "right_right";
        case rotation_kind::left_right: return "left_right";
        case rotation_kind::right_left: return "right_left";
    }
    return "?";
}

std::ostream& operator<<(std::ostream& os, const inorder_entry& e) {
    return os << e.r << ':' << e.ids;
}

std::shared_ptr<tree_layout> make_layout(range r,
                                         std::initializer_list<segment_id> ids,
                                         std::shared_ptr<tree_layout> left,
                                         std::shared_ptr<tree_layout> right) {
    auto out = std::make_shared<tree_layout>();
    out->r = r;
    out->ids.assign(ids);
    out->left = std::move(left);
    out->right = std::move(right);
    return out;
}

bits_tree::bits_tree() {
    node head;
    head.live = true;  // the dummy: empty range, empty list, self-threaded
    head.left = head_node;
    head.right = head_node;
    arena_.push_back(std::move(head));
}

// -- arena --------------------------------------------------------------------

node_ref bits_tree::make_node(range r, id_set list) {
    node_ref n;
    if (!free_.empty()) {
        n = free_.back();
        free_.pop_back();
        arena_[n] = node{};
    } else {
        n = static_cast<node_ref>(arena_.size());
        arena_.emplace_back();
    }
    node& nd = arena_[n];
    nd.r = r;
    nd.list = std::move(list);
    nd.live = true;
    return n;
}

void bits_tree::free_node(node_ref n) {
    arena_[n] = node{};
    free_.push_back(n);
}

// -- navigation ----------------------------------------------------------------

node_ref bits_tree::leftmost(node_ref n) const {
    while (!at(n).left_thread) n = at(n).left;
    return n;
}

node_ref bits_tree::rightmost(node_ref n) const {
    while (!at(n).right_thread) n = at(n).right;
    return n;
}

node_ref bits_tree::pred_of(node_ref n) const {
    const node& nd = at(n);
    return nd.left_thread ? nd.left : rightmost(nd.left);
}

node_ref bits_tree::succ_of(node_ref n) const {
    const node& nd = at(n);
    return nd.right_thread ? nd.right : leftmost(nd.right);
}

bits_tree::side bits_tree::side_of(node_ref parent, node_ref child) const {
    const node& p = at(parent);
    return (!p.left_thread && p.left == child) ? side::left : side::right;
}

void bits_tree::replace_child(node_ref parent, node_ref was, node_ref now) {
    if (parent == head_node) {
        root_ = now;
        return;
    }
    node& p = at(parent);
    if (!p.left_thread && p.left == was)
        p.left = now;
    else
        p.right = now;
}

// -- rotations ------------------------------------------------------------------

void bits_tree::notify(rotation_kind k, bool after, node_ref subtree_root) {
    if (observer_) observer_({k, after, subtree_root});
}

// Rotates left around x; x.right must be a real child. Only the x<->y links
// change: a thread slot that gains a subtree becomes a child slot and vice
// versa, with the thread target being the other rotation partner. No other
// node's threads are touched, so the inorder sequence is preserved.
node_ref bits_tree::rotate_left_link(node_ref x) {
    node_ref y = at(x).right;
    node_ref xp = at(x).parent;
    if (at(y).left_thread) {
        // y had no left subtree; x loses its right subtree and gains a
        // successor thread to y.
        at(x).right = y;
        at(x).right_thread = true;
    } else {
        node_ref b = at(y).left;
        at(x).right = b;
        at(x).right_thread = false;
        at(b).parent = x;
    }
    at(y).left = x;
    at(y).left_thread = false;
    at(x).parent = y;
    at(y).parent = xp;
    replace_child(xp, x, y);
    return y;
}

node_ref bits_tree::rotate_right_link(node_ref x) {
    node_ref y = at(x).left;
    node_ref xp = at(x).parent;
    if (at(y).right_thread) {
        at(x).left = y;
        at(x).left_thread = true;
    } else {
        node_ref b = at(y).right;
        at(x).left = b;
        at(x).left_thread = false;
        at(b).parent = x;
    }
    at(y).right = x;
    at(y).right_thread = false;
    at(x).parent = y;
    at(y).parent = xp;
    replace_child(xp, x, y);
    return y;
}

// Restores balance at x (|balance| == 2). Returns the new subtree root.
node_ref bits_tree::rebalance_rotate(node_ref x) {
    ++counters_.rotations;
    if (at(x).balance > 0) {
        node_ref y = at(x).right;
        if (at(y).balance >= 0) {
            const int yb = at(y).balance;
            notify(rotation_kind::right_right, false, x);
            rotate_left_link(x);
            at(x).balance = yb == 0 ? 1 : 0;
            at(y).balance = yb == 0 ? -1 : 0;
            notify(rotation_kind::right_right, true, y);
            return y;
        }
        node_ref z = at(y).left;
        const int zb = at(z).balance;
        notify(rotation_kind::right_left, false, x);
        rotate_right_link(y);
        rotate_left_link(x);
        at(x).balance = zb == 1 ? -1 : 0;
        at(y).balance = zb == -1 ? 1 : 0;
        at(z).balance = 0;
        notify(rotation_kind::right_left, true, z);
        return z;
    }
    node_ref y = at(x).left;
    if (at(y).balance <= 0) {
        const int yb = at(y).balance;
        notify(rotation_kind::left_left, false, x);
        rotate_right_link(x);
        at(x).balance = yb == 0 ? -1 : 0;
        at(y).balance = yb == 0 ? 1 : 0;
        notify(rotation_kind::left_left, true, y);
        return y;
    }
    node_ref z = at(y).right;
    const int zb = at(z).balance;
    notify(rotation_kind::left_right, false, x);
    rotate_left_link(y);
    rotate_right_link(x);
    at(x).balance = zb == -1 ? 1 : 0;
    at(y).balance = zb == 1 ? -1 : 0;
    at(z).balance = 0;
    notify(rotation_kind::left_right, true, z);
    return z;
}

void bits_tree::rebalance_after_insert(node_ref child) {
    node_ref prev = child;
    node_ref cur = at(child).parent;
    while (cur != head_node) {
        node& c = at(cur);
        c.balance += side_of(cur, prev) == side::left ? -1 : 1;
        if (c.balance == 0) break;
        if (c.balance == 1 || c.balance == -1) {
            prev = cur;
            cur = c.parent;
            continue;
        }
        rebalance_rotate(cur);  // one rotation restores the pre-insert height
        break;
    }
}

void bits_tree::rebalance_after_erase(node_ref cur, side sd) {
    while (cur != head_node) {
        node& c = at(cur);
        c.balance += sd == side::left ? 1 : -1;
        if (c.balance == 1 || c.balance == -1) break;
        if (c.balance == 0) {
            node_ref parent = c.parent;
            if (parent == head_node) break;
            sd = side_of(parent, cur);
            cur = parent;
            continue;
        }
        node_ref sub = rebalance_rotate(cur);
        if (at(sub).balance != 0) break;  // subtree height unchanged
        node_ref parent = at(sub).parent;
        if (parent == head_node) break;
        sd = side_of(parent, sub);
        cur = parent;
    }
}

// -- insertion ------------------------------------------------------------------

void bits_tree::insert(const segment& s) {
    if (!(s.lo < s.hi))
        throw std::invalid_argument("insert: segment must satisfy lo < hi");
    if (registry_.contains(s.id))
        throw std::invalid_argument("insert: duplicate segment id");
    id_set carry;
    carry.insert(s.id);
    if (empty()) {
        node_ref n = make_node({s.lo, s.hi}, std::move(carry));
        root_ = n;
        ++node_count_;
    } else {
        insert_range(root_, {s.lo, s.hi}, std::move(carry));
    }
    registry_.emplace(s.id, s);
}

node_ref bits_tree::attach(node_ref parent, side sd, range r, id_set list) {
    node_ref nn = make_node(r, std::move(list));
    node& p = at(parent);
    node& n = at(nn);
    n.parent = parent;
    if (sd == side::left) {
        assert(p.left_thread);
        n.left = p.left;  // parent's old predecessor (or head)
        n.right = parent;
        p.left = nn;
        p.left_thread = false;
    } else {
        assert(p.right_thread);
        n.right = p.right;  // parent's old successor (or head)
        n.left = parent;
        p.right = nn;
        p.right_thread = false;
    }
    ++node_count_;
    rebalance_after_insert(nn);
    return nn;
}

// Descends from `start` until the carried range overlaps a node or the search
// falls off a thread slot. On overlap the node is re-ranged to the
// intersection and the remaining side parts continue at the inorder
// neighbours, carrying the list of whichever range extends past the
// intersection on that side.
void bits_tree::insert_range(node_ref start, range r, id_set carry) {
    node_ref cur = start;
    for (;;) {
        ++counters_.insert_node_exams;
        const range nr = at(cur).r;
        if (!interval_intersection(r, nr).empty()) break;
        if (compare_intervals(r, nr) == interval_order::left_of) {
            if (at(cur).left_thread) {
                attach(cur, side::left, r, std::move(carry));
                return;
            }
            cur = at(cur).left;
        } else {
            if (at(cur).right_thread) {
                attach(cur, side::right, r, std::move(carry));
                return;
            }
            cur = at(cur).right;
        }
    }

    partition_result parts = partition(r, carry, at(cur).r, at(cur).list);
    at(cur).r = parts.center;
    at(cur).list = std::move(parts.center_list);

    if (!parts.left.empty()) {
        node_ref pred = pred_of(cur);
        if (pred == head_node)
            attach(cur, side::left, parts.left, std::move(parts.left_list));
        else
            insert_range(pred, parts.left, std::move(parts.left_list));
    }
    if (!parts.right.empty()) {
        node_ref succ = succ_of(cur);
        if (succ == head_node)
            attach(cur, side::right, parts.right, std::move(parts.right_list));
        else
            insert_range(succ, parts.right, std::move(parts.right_list));
    }
}

// -- deletion --------------------------------------------------------------------

// Detaches v from the tree without moving any payload between handles, so
// every other handle stays bound to its node across the unlink.
void bits_tree::unlink(node_ref v) {
    const bool has_l = !at(v).left_thread;
    const bool has_r = !at(v).right_thread;
    const node_ref parent = at(v).parent;

    if (!has_l && !has_r) {
        if (parent == head_node) {
            root_ = head_node;
        } else {
            const side sd = side_of(parent, v);
            node& p = at(parent);
            if (sd == side::left) {
                p.left = at(v).left;  // v's predecessor target
                p.left_thread = true;
            } else {
                p.right = at(v).right;
                p.right_thread = true;
            }
            rebalance_after_erase(parent, sd);
        }
    } else if (has_l != has_r) {
        const node_ref c = has_l ? at(v).left : at(v).right;
        if (has_l) {
            // v's predecessor carried a successor thread to v.
            node_ref rm = rightmost(c);
            assert(at(rm).right_thread && at(rm).right == v);
            at(rm).right = at(v).right;
        } else {
            node_ref lm = leftmost(c);
            assert(at(lm).left_thread && at(lm).left == v);
            at(lm).left = at(v).left;
        }
        at(c).parent = parent;
        if (parent == head_node) {
            root_ = c;
        } else {
            const side sd = side_of(parent, v);
            node& p = at(parent);
            if (sd == side::left)
                p.left = c;
            else
                p.right = c;
            rebalance_after_erase(parent, sd);
        }
    } else {
        // Two children: transplant the inorder successor node into v's place.
        const node_ref s = leftmost(at(v).right);
        const node_ref q = at(s).parent;
        const bool s_direct = q == v;

        node_ref rp = rightmost(at(v).left);
        assert(at(rp).right_thread && at(rp).right == v);
        at(rp).right = s;

        if (!s_direct) {
            // s is the leftmost node of v's right subtree, so it hangs off
            // q's left slot and has no left child of its own.
            if (!at(s).right_thread) {
                node_ref b = at(s).right;
                at(q).left = b;
                at(q).left_thread = false;
                at(b).parent = q;
            } else {
                at(q).left = s;  // q's new predecessor is the lifted s
                at(q).left_thread = true;
            }
            at(s).right = at(v).right;
            at(s).right_thread = false;
            at(at(v).right).parent = s;
        }
        at(s).left = at(v).left;
        at(s).left_thread = false;
        at(at(v).left).parent = s;
        at(s).balance = at(v).balance;
        at(s).parent = parent;
        replace_child(parent, v, s);

        if (s_direct)
            rebalance_after_erase(s, side::right);
        else
            rebalance_after_erase(q, side::left);
    }

    free_node(v);
    --node_count_;
}

bool bits_tree::erase(segment_id id) {
    auto it = registry_.find(id);
    if (it == registry_.end()) return false;
    return erase(it->second);
}

bool bits_tree::erase(const segment& s) {
    auto it = registry_.find(s.id);
    if (it == registry_.end()) return false;
    if (it->second.lo != s.lo || it->second.hi != s.hi)
        throw std::invalid_argument(
            "erase: endpoints do not match the stored segment with this id");

    // Locate the node whose range starts at s.lo. Insertion leaves a node
    // boundary at every stored endpoint, so it exists.
    node_ref cur = root_;
    for (;;) {
        ++counters_.erase_node_exams;
        const range nr = at(cur).r;
        if (nr.lo == s.lo) break;
        if (nr.lo > s.lo) {
            assert(!at(cur).left_thread);
            cur = at(cur).left;
        } else {
            assert(nr.hi <= s.lo);
            assert(!at(cur).right_thread);
            cur = at(cur).right;
        }
    }

    // Walk successors until the node that reached s.hi has been processed,
    // removing the id and merging nodes whose lists become redundant.
    node_ref last_survivor = head_node;
    for (;;) {
        ++counters_.erase_node_exams;
        const coord reached = at(cur).r.hi;
        const node_ref next = succ_of(cur);
        bool removed = at(cur).list.erase(s.id);
        assert(removed);
        (void)removed;

        if (at(cur).list.empty()) {
            unlink(cur);
            last_survivor = head_node;
        } else {
            node_ref pred = pred_of(cur);
            if (pred != head_node && at(pred).list == at(cur).list) {
                assert(at(pred).r.hi == at(cur).r.lo);
                at(pred).r.hi = at(cur).r.hi;
                unlink(cur);
                last_survivor = pred;
            } else {
                last_survivor = cur;
            }
        }
        if (reached >= s.hi) break;
        assert(next != head_node);
        cur = next;
    }

    // The removal may have left the last touched node identical to its
    // successor; normalize that pair as well.
    if (last_survivor != head_node) {
        node_ref succ = succ_of(last_survivor);
        if (succ != head_node && at(succ).list == at(last_survivor).list) {
            assert(at(last_survivor).r.hi == at(succ).r.lo);
            at(last_survivor).r.hi = at(succ).r.hi;
            unlink(succ);
        }
    }

    registry_.erase(it);
    return true;
}

// -- queries ---------------------------------------------------------------------

query_trace bits_tree::stab(coord x) const {
    query_trace out;
    if (empty()) return out;

    // Find the rightmost node whose range starts at or before x, stopping as
    // soon as the candidate strictly encloses x on the right.
    node_ref cur = root_;
    node_ref cand = head_node;
    for (;;) {
        ++out.nodes_visited;
        const node& n = at(cur);
        if (n.r.lo > x) {
            if (n.left_thread) break;
            cur = n.left;
        } else {
            cand = cur;
            if (n.r.hi > x) break;
            if (n.right_thread) break;
            cur = n.right;
        }
    }
    if (cand == head_node || !at(cand).r.contains(x)) return out;  // gap or outside

    out.segments = at(cand).list;
    if (at(cand).r.lo == x) {
        // x may also be the right endpoint of the predecessor's range; one
        // extra node examination resolves it.
        node_ref pred = pred_of(cand);
        if (pred != head_node) {
            ++out.nodes_visited;
            if (at(pred).r.hi == x)
                out.segments = set_union(out.segments, at(pred).list);
        }
    }
    return out;
}

query_trace bits_tree::range_query(const range& q) const {
    if (q.empty())
        throw std::invalid_argument("range_query: empty query range");
    query_trace out;
    if (empty()) return out;

    // Leftmost node whose range ends at or after q.lo.
    node_ref cur = root_;
    node_ref cand = head_node;
    for (;;) {
        ++out.nodes_visited;
        const node& n = at(cur);
        if (n.r.hi >= q.lo) {
            cand = cur;
            if (n.left_thread) break;
            cur = n.left;
        } else {
            if (n.right_thread) break;
            cur = n.right;
        }
    }

    // Walk successor threads until past q.hi.
    bool first = true;
    for (node_ref w = cand; w != head_node; w = succ_of(w)) {
        if (!first) ++out.nodes_visited;
        first = false;
        const node& n = at(w);
        if (n.r.lo > q.hi) break;
        out.segments = set_union(out.segments, n.list);
    }
    return out;
}

std::vector<inorder_entry> bits_tree::inorder() const {
    std::vector<inorder_entry> out;
    if (empty()) return out;
    for (node_ref n = leftmost(root_); n != head_node; n = succ_of(n))
        out.push_back({at(n).r, at(n).list});
    return out;
}

void bits_tree::for_each_node(
    const std::function<void(const range&, const id_set&)>& fn) const {
    if (empty()) return;
    for (node_ref n = leftmost(root_); n != head_node; n = succ_of(n))
        fn(at(n).r, at(n).list);
}

std::vector<inorder_entry> bits_tree::subtree_entries(node_ref n) const {
    std::vector<inorder_entry> out;
    if (n == head_node) return out;
    const node& nd = at(n);
    if (!nd.left_thread) {
        auto l = subtree_entries(nd.left);
        out.insert(out.end(), l.begin(), l.end());
    }
    out.push_back({nd.r, nd.list});
    if (!nd.right_thread) {
        auto r = subtree_entries(nd.right);
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

tree_stats bits_tree::stats() const {
    tree_stats st;
    st.node_count = node_count_;
    st.segment_count = registry_.size();
    if (empty()) return st;

    // The balance factors point at the taller child, so the height is the
    // length of the heavy path.
    int h = 0;
    for (node_ref c = root_;;) {
        const node& n = at(c);
        node_ref next = head_node;
        if (n.balance >= 0 && !n.right_thread)
            next = n.right;
        else if (n.balance < 0 && !n.left_thread)
            next = n.left;
        if (next == head_node) break;
        ++h;
        c = next;
    }
    st.height = h;

    for (node_ref n = leftmost(root_); n != head_node; n = succ_of(n))
        st.cumulative_list_size += at(n).list.size();
    return st;
}

// -- invariant checker -------------------------------------------------------------

bool bits_tree::check_structure(node_ref n, node_ref parent,
                                std::vector<node_ref>& order, int& height,
                                std::string& err) const {
    const node& nd = at(n);
    if (!nd.live) {
        err = "link to a freed node";
        return false;
    }
    if (nd.parent != parent) {
        err = "parent link mismatch at node with range " + to_string(nd.r);
        return false;
    }
    int hl = -1, hr = -1;
    if (!nd.left_thread) {
        if (!check_structure(nd.left, n, order, hl, err)) return false;
    }
    order.push_back(n);
    if (!nd.right_thread) {
        if (!check_structure(nd.right, n, order, hr, err)) return false;
    }
    if (nd.balance != hr - hl || nd.balance < -1 || nd.balance > 1) {
        std::ostringstream os;
        os << "balance factor " << int(nd.balance) << " at " << to_string(nd.r)
           << " but subtree heights are " << hl << '/' << hr;
        err = os.str();
        return false;
    }
    height = 1 + std::max(hl, hr);
    return true;
}

std::optional<std::string> bits_tree::check_coverage(
    const std::vector<node_ref>& order) const {
    // Sweep nodes in range order, maintaining the set of segments that must
    // cover the current node: those starting at or before it and ending at or
    // after it. A segment's covering nodes form one contiguous run of the
    // sorted sequence, so a running length prefix checks whole-span coverage
    // in O(1) per segment, and the expected list evolves by single inserts
    // and erases so it can be compared wholesale against each node's list.
    const std::size_t m = registry_.size();
    std::vector<segment_id> ids_sorted;
    std::vector<coord> seg_lo(m), seg_hi(m), start(m, 0);
    ids_sorted.reserve(m);
    for (const auto& [id, s] : registry_) {
        seg_lo[ids_sorted.size()] = s.lo;
        seg_hi[ids_sorted.size()] = s.hi;
        ids_sorted.push_back(id);
    }

    std::vector<std::pair<coord, std::uint32_t>> by_lo;  // (lo, index)
    by_lo.reserve(m);
    for (std::uint32_t i = 0; i < m; ++i) by_lo.emplace_back(seg_lo[i], i);
    std::sort(by_lo.begin(), by_lo.end());

    using hi_entry = std::pair<coord, std::uint32_t>;
    std::priority_queue<hi_entry, std::vector<hi_entry>, std::greater<>> by_hi;
    id_set expected;
    coord covered_run = 0;  // total length of the nodes processed so far
    std::size_t next = 0;

    auto span_error = [&](std::uint32_t idx, coord got) {
        std::ostringstream os;
        os << "segment " << ids_sorted[idx] << " spans "
           << (seg_hi[idx] - seg_lo[idx]) << " but its node lists cover "
           << got;
        return os.str();
    };

    for (node_ref n : order) {
        const node& nd = at(n);
        while (next < by_lo.size() && by_lo[next].first <= nd.r.lo) {
            const std::uint32_t idx = by_lo[next].second;
            by_hi.emplace(seg_hi[idx], idx);
            expected.insert(ids_sorted[idx]);
            start[idx] = covered_run;
            ++next;
        }
        while (!by_hi.empty() && by_hi.top().first < nd.r.hi) {
            const std::uint32_t idx = by_hi.top().second;
            by_hi.pop();
            expected.erase(ids_sorted[idx]);
            const coord got = covered_run - start[idx];
            if (got != seg_hi[idx] - seg_lo[idx]) return span_error(idx, got);
        }
        if (!(expected == nd.list)) {
            // slow path: name one differing id
            for (segment_id id : nd.list)
                if (!expected.contains(id)) {
                    std::ostringstream os;
                    os << "node " << to_string(nd.r) << " lists segment " << id
                       << " which does not cover it";
                    return os.str();
                }
            for (segment_id id : expected)
                if (!nd.list.contains(id)) {
                    std::ostringstream os;
                    os << "node " << to_string(nd.r) << " misses segment "
                       << id << " which covers it";
                    return os.str();
                }
            return "node " + to_string(nd.r) + " list mismatch";
        }
        covered_run += nd.r.length();
    }

    while (!by_hi.empty()) {
        const std::uint32_t idx = by_hi.top().second;
        by_hi.pop();
        const coord got = covered_run - start[idx];
        if (got != seg_hi[idx] - seg_lo[idx]) return span_error(idx, got);
    }
    if (next < by_lo.size()) return span_error(by_lo[next].second, 0);
    return std::nullopt;
}

std::optional<std::string> bits_tree::check_invariants() const {
    const node& head = at(head_node);
    if (!head.r.empty() || !head.list.empty())
        return "dummy node must keep an empty range and list";

    std::vector<node_ref> order;
    if (!empty()) {
        if (at(root_).parent != head_node) return "root parent link is not head";
        int height = -1;
        std::string err;
        order.reserve(node_count_);
        if (!check_structure(root_, head_node, order, height, err)) return err;
    }
    if (order.size() != node_count_)
        return "node_count does not match the number of reachable nodes";

    for (std::size_t i = 0; i < order.size(); ++i) {
        const node& nd = at(order[i]);
        if (nd.r.empty()) return "node with empty range";
        if (nd.list.empty())
            return "node " + to_string(nd.r) + " has an empty list";
        if (i > 0 && at(order[i - 1]).r.hi > nd.r.lo)
            return "ranges " + to_string(at(order[i - 1]).r) + " and " +
                   to_string(nd.r) + " overlap or are out of order";
        if (nd.left_thread) {
            const node_ref want = i == 0 ? head_node : order[i - 1];
            if (nd.left != want)
                return "predecessor thread of " + to_string(nd.r) +
                       " points at the wrong node";
        }
        if (nd.right_thread) {
            const node_ref want = i + 1 == order.size() ? head_node : order[i + 1];
            if (nd.right != want)
                return "successor thread of " + to_string(nd.r) +
                       " points at the wrong node";
        }
    }

    return check_coverage(order);
}

// -- exact-shape construction --------------------------------------------------------

bits_tree bits_tree::from_layout(const std::vector<segment>& segs,
                                 const tree_layout& shape) {
    bits_tree t;
    for (const segment& s : segs) {
        if (!(s.lo < s.hi))
            throw std::invalid_argument("from_layout: segment lo < hi required");
        if (!t.registry_.emplace(s.id, s).second)
            throw std::invalid_argument("from_layout: duplicate segment id");
    }

    // Build nodes and children recursively, deriving balance from heights.
    struct builder {
        bits_tree& t;
        int build(const tree_layout& l, node_ref parent, node_ref& out) {
            if (l.r.empty())
                throw std::invalid_argument("from_layout: empty node range");
            id_set ids;
            for (segment_id id : l.ids) ids.insert(id);
            node_ref n = t.make_node(l.r, std::move(ids));
            ++t.node_count_;
            int hl = -1, hr = -1;
            if (l.left) {
                node_ref c = 0;
                hl = build(*l.left, n, c);
                t.at(n).left = c;
                t.at(n).left_thread = false;
            }
            if (l.right) {
                node_ref c = 0;
                hr = build(*l.right, n, c);
                t.at(n).right = c;
                t.at(n).right_thread = false;
            }
            const int bal = hr - hl;
            if (bal < -1 || bal > 1)
                throw std::invalid_argument("from_layout: shape is not height-balanced");
            t.at(n).balance = static_cast<std::int8_t>(bal);
            t.at(n).parent = parent;
            out = n;
            return 1 + std::max(hl, hr);
        }
    };
    node_ref root = 0;
    builder b{t};
    b.build(shape, head_node, root);
    t.root_ = root;

    // Wire the threads from the inorder sequence.
    std::vector<node_ref> order;
    struct collect {
        bits_tree& t;
        std::vector<node_ref>& order;
        void walk(node_ref n) {
            if (!t.at(n).left_thread) walk(t.at(n).left);
            order.push_back(n);
            if (!t.at(n).right_thread) walk(t.at(n).right);
        }
    };
    collect c{t, order};
    c.walk(root);
    for (std::size_t i = 0; i < order.size(); ++i) {
        node& nd = t.at(order[i]);
        if (nd.left_thread) nd.left = i == 0 ? head_node : order[i - 1];
        if (nd.right_thread)
            nd.right = i + 1 == order.size() ? head_node : order[i + 1];
    }

    if (auto err = t.check_invariants())
        throw std::invalid_argument("from_layout: " + *err);
    return t;
}

}  // namespace bitstree

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bitstree/interval.hpp"

namespace bitstree {

/// Handle addressing a node inside one tree's arena. Handle 0 is the dummy
/// head node; handles stay valid until the node is unlinked.
using node_ref = std::uint32_t;
inline constexpr node_ref head_node = 0;

/// Result of a query plus the number of nodes whose range or list the query
/// logic examined (descent decisions, boundary checks, list emission).
struct query_trace {
    std::size_t nodes_visited = 0;
    id_set segments;
};

struct tree_stats {
    std::size_t node_count = 0;
    int height = -1;  // edge count; -1 for the empty tree, 0 for one node
    std::size_t cumulative_list_size = 0;
    std::size_t segment_count = 0;
};

enum class rotation_kind { left_left, right_right, left_right, right_left };

std::string to_string(rotation_kind k);

/// Fired right before and right after every rebalancing rotation (a double
/// rotation is one event). subtree_root addresses the rotated subtree: the old
/// subtree root in the before call, the new one in the after call. The node
/// set under it is identical in both calls.
struct rotation_event {
    rotation_kind kind;
    bool after;
    node_ref subtree_root;
};

using rotation_observer = std::function<void(const rotation_event&)>;

struct inorder_entry {
    range r;
    id_set ids;
    friend bool operator==(const inorder_entry&, const inorder_entry&) = default;
};

std::ostream& operator<<(std::ostream& os, const inorder_entry& e);

/// Shape description for building a tree with an exact node arrangement
/// (fixtures and benchmarks). Lists are validated against the segment set.
struct tree_layout {
    range r;
    std::vector<segment_id> ids;
    std::shared_ptr<tree_layout> left;
    std::shared_ptr<tree_layout> right;
};

std::shared_ptr<tree_layout> make_layout(
    range r, std::initializer_list<segment_id> ids,
    std::shared_ptr<tree_layout> left = nullptr,
    std::shared_ptr<tree_layout> right = nullptr);

struct op_counters {
    std::uint64_t insert_node_exams = 0;
    std::uint64_t erase_node_exams = 0;
    std::uint64_t rotations = 0;
};

/// Height-balanced two-way inorder-threaded search tree over interior-disjoint
/// ranges. Each node owns a range and the set of ids of the stored segments
/// covering that range; inserting or deleting a segment re-partitions the
/// affected ranges. Stabbing and range queries run in O(log n + answer).
///
/// Concurrency: one writer at a time; any number of concurrent readers when no
/// write is in progress. No internal locking.
class bits_tree {
public:
    bits_tree();

    // -- mutation ------------------------------------------------------------

    /// Stores a segment. Throws std::invalid_argument for lo >= hi or a
    /// duplicate id.
    void insert(const segment& s);

    /// Removes a stored segment. Returns false when the id is unknown. Throws
    /// std::invalid_argument when the id is stored with different endpoints.
    bool erase(const segment& s);

    /// Convenience overload: looks the endpoints up in the registry.
    bool erase(segment_id id);

    // -- queries -------------------------------------------------------------

    /// All stored segments containing x (closed semantics).
    query_trace stab(coord x) const;

    /// All stored segments whose closed intersection with q is non-empty.
    /// Throws std::invalid_argument for an empty q.
    query_trace range_query(const range& q) const;

    /// All nodes in range order, walked through the successor threads.
    std::vector<inorder_entry> inorder() const;

    /// Visits every node in range order without copying the lists.
    void for_each_node(
        const std::function<void(const range&, const id_set&)>& fn) const;

    tree_stats stats() const;

    /// Verifies every structural invariant: thread consistency, sorted
    /// interior-disjoint ranges, AVL balance, non-empty lists, and exact
    /// agreement between node lists and the stored segment set. Returns the
    /// first violation found, or nullopt.
    std::optional<std::string> check_invariants() const;

    std::size_t node_count() const { return node_count_; }
    std::size_t segment_count() const { return registry_.size(); }
    bool contains_segment(segment_id id) const { return registry_.contains(id); }
    const std::map<segment_id, segment>& segments() const { return registry_; }

    // -- instrumentation -----------------------------------------------------

    void set_rotation_observer(rotation_observer obs) { observer_ = std::move(obs); }
    std::uint64_t rotation_count() const { return counters_.rotations; }
    const op_counters& counters() const { return counters_; }
    void reset_counters() { counters_ = {}; }

    /// (range, list) entries of the subtree under a handle, in range order.
    /// Intended for rotation observers; the handle must be live.
    std::vector<inorder_entry> subtree_entries(node_ref n) const;

    /// Builds a tree with the exact given shape over the given segments.
    /// Throws std::invalid_argument when the layout violates any invariant.
    static bits_tree from_layout(const std::vector<segment>& segs,
                                 const tree_layout& shape);

private:
    struct node {
        range r;
        id_set list;
        node_ref left = head_node;
        node_ref right = head_node;
        node_ref parent = head_node;
        bool left_thread = true;
        bool right_thread = true;
        std::int8_t balance = 0;
        bool live = false;
    };

    enum class side { left, right };

    node& at(node_ref n) { return arena_[n]; }
    const node& at(node_ref n) const { return arena_[n]; }
    bool empty() const { return root_ == head_node; }

    node_ref make_node(range r, id_set list);
    void free_node(node_ref n);

    node_ref leftmost(node_ref n) const;
    node_ref rightmost(node_ref n) const;
    node_ref pred_of(node_ref n) const;
    node_ref succ_of(node_ref n) const;
    side side_of(node_ref parent, node_ref child) const;

    void insert_range(node_ref start, range r, id_set carry);
    node_ref attach(node_ref parent, side sd, range r, id_set list);
    void rebalance_after_insert(node_ref child);
    void rebalance_after_erase(node_ref cur, side sd);
    node_ref rebalance_rotate(node_ref x);

    node_ref rotate_left_link(node_ref x);
    node_ref rotate_right_link(node_ref x);
    void replace_child(node_ref parent, node_ref was, node_ref now);
    void notify(rotation_kind k, bool after, node_ref subtree_root);

    void unlink(node_ref v);

    bool check_structure(node_ref n, node_ref parent, std::vector<node_ref>& order,
                         int& height, std::string& err) const;
    std::optional<std::string> check_coverage(
        const std::vector<node_ref>& order) const;

    std::vector<node> arena_;
    std::vector<node_ref> free_;
    node_ref root_ = head_node;
    std::size_t node_count_ = 0;
    std::map<segment_id, segment> registry_;
    rotation_observer observer_;
    op_counters counters_;
};

}  // namespace bitstree

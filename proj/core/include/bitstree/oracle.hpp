#pragma once

#include <map>

#include "bitstree/interval.hpp"

namespace bitstree {

/// Brute-force ground truth: a flat collection of segments answering stabbing
/// and range queries by linear scan. In differential tests the bag, not the
/// tree, is the semantic authority.
class segment_bag {
public:
    void insert(const segment& s);
    bool erase(segment_id id);

    bool contains(segment_id id) const { return segments_.contains(id); }
    const segment* find(segment_id id) const;
    std::size_t size() const { return segments_.size(); }

    /// { s : s.lo <= x <= s.hi }  (closed segments)
    id_set stab(coord x) const;

    /// { s : s.lo <= q.hi and q.lo <= s.hi }  (closed intersection non-empty)
    id_set range_query(const range& q) const;

    const std::map<segment_id, segment>& segments() const { return segments_; }

private:
    std::map<segment_id, segment> segments_;
};

}  // namespace bitstree

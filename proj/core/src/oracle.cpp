#include "bitstree/oracle.hpp"

#include <stdexcept>

namespace bitstree {

void segment_bag::insert(const segment& s) {
    if (!(s.lo < s.hi))
        throw std::invalid_argument("segment_bag: lo < hi required");
    if (!segments_.emplace(s.id, s).second)
        throw std::invalid_argument("segment_bag: duplicate segment id");
}

bool segment_bag::erase(segment_id id) { return segments_.erase(id) > 0; }

const segment* segment_bag::find(segment_id id) const {
    auto it = segments_.find(id);
    return it == segments_.end() ? nullptr : &it->second;
}

id_set segment_bag::stab(coord x) const {
    id_set out;
    for (const auto& [id, s] : segments_)
        if (s.lo <= x && x <= s.hi) out.insert(id);
    return out;
}

id_set segment_bag::range_query(const range& q) const {
    if (q.empty())
        throw std::invalid_argument("segment_bag: empty query range");
    id_set out;
    for (const auto& [id, s] : segments_)
        if (s.lo <= q.hi && q.lo <= s.hi) out.insert(id);
    return out;
}

}  // namespace bitstree

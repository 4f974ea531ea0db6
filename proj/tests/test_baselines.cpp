#include <doctest.h>

#include <set>
#include <stdexcept>
#include <vector>

#include "bitstree/oracle.hpp"
#include "bitstree/segment_tree.hpp"

using namespace bitstree;

namespace {

constexpr segment_id a = 1, b = 2, c = 3;

std::vector<segment> abc_segments() {
    return {{a, 5, 12}, {b, 10, 15}, {c, 18, 21}};
}

}  // namespace

TEST_CASE("static tree metrics for the three-segment desk example") {
    auto t = sst_tree::build(abc_segments());
    const auto st = t.stats();
    CHECK(st.node_count == 13);
    CHECK(st.height == 3);
    CHECK(st.cumulative_list_size == 4);
    CHECK(st.segment_count == 3);
}

TEST_CASE("static tree over one segment has five nodes") {
    auto t = sst_tree::build({{a, 0, 1}});
    CHECK(t.stats().node_count == 5);  // 4n+1 with distinct endpoints
}

TEST_CASE("shared endpoints shrink the static tree below 4n+1") {
    auto t = sst_tree::build({{a, 0, 4}, {b, 4, 8}});  // 3 distinct endpoints
    CHECK(t.stats().node_count < 4 * 2 + 1);
    CHECK(t.stats().node_count == 7);
}

TEST_CASE("static tree rejects an empty segment set") {
    CHECK_THROWS_AS(sst_tree::build({}), std::invalid_argument);
}

TEST_CASE("static tree stab maximum sits at the documented point") {
    auto t = sst_tree::build(abc_segments());
    std::size_t max_visits = 0;
    coord argmax = 0;
    for (coord xx = 0; xx <= 30; ++xx) {
        auto tr = t.stab(xx);
        if (tr.nodes_visited > max_visits) {
            max_visits = tr.nodes_visited;
            argmax = xx;
        }
    }
    CHECK(max_visits == 7);
    CHECK(argmax == 15);
    CHECK(t.stab(15).segments == id_set{b});
}

TEST_CASE("dynamic tree metrics over the sixteen-slab range") {
    dst_tree t(5, 21);
    for (const segment& s : abc_segments()) t.insert(s);
    const auto st = t.stats();
    CHECK(st.node_count == 31);  // 2*(21-5)-1
    CHECK(st.height == 4);
    CHECK(st.cumulative_list_size == 8);
    CHECK(st.segment_count == 3);
}

TEST_CASE("dynamic tree stab maximum sits at the documented point") {
    dst_tree t(5, 21);
    for (const segment& s : abc_segments()) t.insert(s);
    std::size_t max_visits = 0;
    coord argmax = 0;
    for (coord xx = 0; xx <= 30; ++xx) {
        auto tr = t.stab(xx);
        if (tr.nodes_visited > max_visits) {
            max_visits = tr.nodes_visited;
            argmax = xx;
        }
    }
    CHECK(max_visits == 9);
    CHECK(argmax == 13);
}

TEST_CASE("dynamic tree rejects segments outside its fixed range") {
    dst_tree t(5, 21);
    CHECK_THROWS_AS(t.insert({a, 4, 10}), std::out_of_range);
    CHECK_THROWS_AS(t.insert({a, 10, 22}), std::out_of_range);
    CHECK(t.segment_count() == 0);
    t.insert({a, 5, 21});
    CHECK(t.segment_count() == 1);
}

TEST_CASE("dynamic tree deletion removes ids but keeps the skeleton") {
    dst_tree t(0, 8);
    t.insert({a, 0, 8});
    t.insert({b, 2, 5});
    const auto full = t.stats();
    CHECK(t.erase(b));
    CHECK_FALSE(t.erase(b));
    CHECK(t.stats().node_count == full.node_count);
    CHECK(t.stab(3).segments == id_set{a});
    CHECK_THROWS_AS(t.erase(segment{a, 0, 7}), std::invalid_argument);
}

TEST_CASE("baseline stabs agree with the oracle over the covered span") {
    const auto segs = std::vector<segment>{
        {1, 2, 9}, {2, 4, 6}, {3, 6, 11}, {4, 0, 3}, {5, 9, 10}};
    segment_bag bag;
    for (const segment& s : segs) bag.insert(s);

    auto sst = sst_tree::build(segs);
    dst_tree dst(0, 11);
    for (const segment& s : segs) dst.insert(s);

    for (coord xx = -2; xx <= 13; ++xx) {
        CAPTURE(xx);
        CHECK(sst.stab(xx).segments == bag.stab(xx));
        CHECK(dst.stab(xx).segments == bag.stab(xx));
    }
}

namespace {

// Walks a skeleton collecting (node, ancestor ids) pairs to verify the
// canonical cover: no id may sit on a node and any of its ancestors.
template <typename Tree>
bool canonical_cover_holds(const Tree& t, std::int32_t idx, id_set above) {
    const auto& n = t.node_at(idx);
    for (segment_id id : n.list)
        if (above.contains(id)) return false;
    for (segment_id id : n.list) above.insert(id);
    if (n.left < 0) return true;
    return canonical_cover_holds(t, n.left, above) &&
           canonical_cover_holds(t, n.right, above);
}

}  // namespace

TEST_CASE("canonical covers never repeat an id along a root path") {
    auto sst = sst_tree::build(abc_segments());
    CHECK(canonical_cover_holds(sst, sst.root(), {}));

    dst_tree dst(5, 21);
    for (const segment& s : abc_segments()) dst.insert(s);
    CHECK(canonical_cover_holds(dst, dst.root(), {}));
}

TEST_CASE("unit segments with distinct endpoints saturate a dynamic tree") {
    // Over [0,k] exactly k unit segments exhaust the leaf slabs; any further
    // segment of length >= 1 inside the range must reuse an existing endpoint.
    const coord k = 8;
    dst_tree t(0, k);
    for (coord i = 0; i < k; ++i)
        t.insert({static_cast<segment_id>(i + 1), i, i + 1});
    CHECK(t.segment_count() == static_cast<std::size_t>(k));

    std::set<coord> endpoints;
    for (const auto& [id, s] : t.segments()) {
        endpoints.insert(s.lo);
        endpoints.insert(s.hi);
    }
    for (coord lo = 0; lo < k; ++lo)
        for (coord hi = lo + 1; hi <= k; ++hi) {
            CHECK(endpoints.contains(lo));
            CHECK(endpoints.contains(hi));
        }
}

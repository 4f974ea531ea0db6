#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "bitstree/interval.hpp"

using namespace bitstree;

namespace {
constexpr segment_id a = 1, b = 2, d = 4, s = 5, x = 6, y = 7;
}

TEST_CASE("compare_intervals orders disjoint ranges and reports overlap") {
    CHECK(compare_intervals({5, 10}, {10, 12}) == interval_order::left_of);
    CHECK(compare_intervals({12, 15}, {5, 10}) == interval_order::right_of);
    CHECK(compare_intervals({5, 10}, {7, 12}) == interval_order::overlapping);
    CHECK_THROWS_AS(compare_intervals({}, {1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(compare_intervals({3, 3}, {1, 2}), std::invalid_argument);
}

TEST_CASE("classify_overlap distinguishes the seven relative positions") {
    CHECK(classify_overlap({2, 7}, {5, 10}) == overlap_class::left_overlaps);
    CHECK(classify_overlap({5, 10}, {5, 10}) == overlap_class::equal);
    CHECK(classify_overlap({6, 9}, {5, 10}) == overlap_class::contained_in);
    CHECK(classify_overlap({5, 10}, {6, 9}) == overlap_class::covered_up);
    CHECK(classify_overlap({5, 10}, {10, 12}) == overlap_class::left_of);
    CHECK(classify_overlap({10, 12}, {5, 10}) == overlap_class::right_of);
    CHECK(classify_overlap({5, 10}, {2, 7}) == overlap_class::right_overlaps);
    // one shared endpoint still counts as containment, not equality
    CHECK(classify_overlap({5, 9}, {5, 10}) == overlap_class::contained_in);
    CHECK(classify_overlap({6, 10}, {5, 10}) == overlap_class::contained_in);
    CHECK_THROWS_AS(classify_overlap({1, 2}, {}), std::invalid_argument);
}

TEST_CASE("union and intersection of ranges") {
    CHECK(interval_union({2, 7}, {5, 10}) == range{2, 10});
    CHECK(interval_intersection({2, 7}, {5, 10}) == range{5, 7});
    CHECK(interval_intersection({5, 10}, {10, 12}).empty());
    CHECK(interval_intersection({5, 10}, {11, 12}).empty());
    CHECK_THROWS_AS(interval_union({5, 10}, {10, 12}), std::invalid_argument);
}

TEST_CASE("partition splits two overlapping ranges with their lists") {
    SUBCASE("left overlap") {
        auto p = partition({2, 7}, {d}, {5, 10}, {a});
        CHECK(p.left == range{2, 5});
        CHECK(p.left_list == id_set{d});
        CHECK(p.center == range{5, 7});
        CHECK(p.center_list == id_set{a, d});
        CHECK(p.right == range{7, 10});
        CHECK(p.right_list == id_set{a});
    }
    SUBCASE("equal ranges leave both side parts empty") {
        auto p = partition({5, 10}, {x}, {5, 10}, {y});
        CHECK(p.left.empty());
        CHECK(p.left_list.empty());
        CHECK(p.center == range{5, 10});
        CHECK(p.center_list == id_set{x, y});
        CHECK(p.right.empty());
        CHECK(p.right_list.empty());
    }
    SUBCASE("right overlap carries the original lists outward") {
        auto p = partition({13, 17}, {s}, {12, 15}, {b});
        CHECK(p.left == range{12, 13});
        CHECK(p.left_list == id_set{b});
        CHECK(p.center == range{13, 15});
        CHECK(p.center_list == id_set{b, s});
        CHECK(p.right == range{15, 17});
        CHECK(p.right_list == id_set{s});
    }
    SUBCASE("disjoint inputs are rejected") {
        CHECK_THROWS_AS(partition({1, 2}, {x}, {3, 4}, {y}),
                        std::invalid_argument);
        CHECK_THROWS_AS(partition({1, 2}, {x}, {2, 4}, {y}),
                        std::invalid_argument);
    }
}

namespace {

std::vector<range> all_ranges(coord lo, coord hi) {
    std::vector<range> out;
    for (coord i = lo; i < hi; ++i)
        for (coord j = i + 1; j <= hi; ++j) out.push_back({i, j});
    return out;
}

bool is_one_of(const id_set& got, const id_set& u, const id_set& v) {
    return got == u || got == v || got.empty();
}

}  // namespace

TEST_CASE("exhaustive pair properties over a small coordinate window") {
    const auto ranges = all_ranges(0, 8);
    const id_set ls{1};
    const id_set lt{2};

    for (const range& rs : ranges) {
        for (const range& rt : ranges) {
            const auto cls = classify_overlap(rs, rt);
            const auto mirror = classify_overlap(rt, rs);

            // mirror symmetry of the classification
            switch (cls) {
                case overlap_class::left_of:
                    CHECK(mirror == overlap_class::right_of);
                    break;
                case overlap_class::right_of:
                    CHECK(mirror == overlap_class::left_of);
                    break;
                case overlap_class::left_overlaps:
                    CHECK(mirror == overlap_class::right_overlaps);
                    break;
                case overlap_class::right_overlaps:
                    CHECK(mirror == overlap_class::left_overlaps);
                    break;
                case overlap_class::contained_in:
                    CHECK(mirror == overlap_class::covered_up);
                    break;
                case overlap_class::covered_up:
                    CHECK(mirror == overlap_class::contained_in);
                    break;
                case overlap_class::equal:
                    CHECK(mirror == overlap_class::equal);
                    break;
            }

            const bool disjoint = cls == overlap_class::left_of ||
                                  cls == overlap_class::right_of;
            CHECK(disjoint ==
                  (compare_intervals(rs, rt) != interval_order::overlapping));
            if (disjoint) continue;

            const auto p = partition(rs, ls, rt, lt);
            const auto q = partition(rt, lt, rs, ls);

            // symmetric in the two inputs
            CHECK(p.left == q.left);
            CHECK(p.center == q.center);
            CHECK(p.right == q.right);
            CHECK(p.left_list == q.left_list);
            CHECK(p.center_list == q.center_list);
            CHECK(p.right_list == q.right_list);

            // parts are ordered, touching, and cover exactly the union
            CHECK_FALSE(p.center.empty());
            const coord lo = std::min(rs.lo, rt.lo);
            const coord hi = std::max(rs.hi, rt.hi);
            coord at = lo;
            for (const range* part : {&p.left, &p.center, &p.right}) {
                if (part->empty()) continue;
                CHECK(part->lo == at);
                at = part->hi;
            }
            CHECK(at == hi);

            // empty side parts appear exactly on shared endpoints
            CHECK(p.left.empty() == (rs.lo == rt.lo));
            CHECK(p.right.empty() == (rs.hi == rt.hi));

            // list assignment
            CHECK(p.center_list == set_union(ls, lt));
            CHECK(is_one_of(p.left_list, ls, lt));
            CHECK(is_one_of(p.right_list, ls, lt));
            CHECK(p.left_list.empty() == p.left.empty());
            CHECK(p.right_list.empty() == p.right.empty());
            if (!p.left.empty())
                CHECK(p.left_list == (rs.lo < rt.lo ? ls : lt));
            if (!p.right.empty())
                CHECK(p.right_list == (rt.hi < rs.hi ? ls : lt));
        }
    }
}

TEST_CASE("id_set keeps a sorted unique view") {
    id_set ids{3, 1, 2, 3};
    CHECK(ids.size() == 3);
    CHECK(ids.contains(2));
    CHECK_FALSE(ids.insert(1));
    CHECK(ids.insert(9));
    CHECK(ids.erase(3));
    CHECK_FALSE(ids.erase(3));
    CHECK(set_union(id_set{1, 5}, id_set{2, 5}) == id_set{1, 2, 5});
}

TEST_CASE("zero-length segments are rejected") {
    CHECK_THROWS_AS(segment(1, 4, 4), std::invalid_argument);
    CHECK_THROWS_AS(segment(1, 5, 4), std::invalid_argument);
    CHECK_NOTHROW(segment(1, 4, 5));
}

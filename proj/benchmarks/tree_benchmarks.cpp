#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "bitstree/bits_tree.hpp"
#include "bitstree/oracle.hpp"
#include "bitstree/segment_tree.hpp"

using namespace bitstree;

namespace {

constexpr coord window = 1 << 16;

std::vector<segment> make_segments(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<segment> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const coord len = 1 + static_cast<coord>(rng() % (window / 64));
        const coord lo = static_cast<coord>(rng() % (window - len));
        out.push_back({i + 1, lo, lo + len});
    }
    return out;
}

std::vector<coord> make_points(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<coord> out(n);
    for (coord& x : out) x = static_cast<coord>(rng() % window);
    return out;
}

void bm_bits_insert(benchmark::State& state) {
    const auto segs = make_segments(state.range(0), 1);
    for (auto _ : state) {
        bits_tree t;
        for (const segment& s : segs) t.insert(s);
        benchmark::DoNotOptimize(t.node_count());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_bits_insert)->Range(64, 4096);

void bm_bits_stab(benchmark::State& state) {
    const auto segs = make_segments(state.range(0), 1);
    bits_tree t;
    for (const segment& s : segs) t.insert(s);
    const auto points = make_points(512, 2);
    std::size_t i = 0;
    for (auto _ : state) {
        auto tr = t.stab(points[i++ % points.size()]);
        benchmark::DoNotOptimize(tr.segments);
    }
}
BENCHMARK(bm_bits_stab)->Range(64, 4096);

void bm_bits_range_query(benchmark::State& state) {
    const auto segs = make_segments(state.range(0), 1);
    bits_tree t;
    for (const segment& s : segs) t.insert(s);
    const auto points = make_points(512, 3);
    std::size_t i = 0;
    for (auto _ : state) {
        const coord lo = points[i++ % points.size()];
        auto tr = t.range_query({lo, lo + window / 128});
        benchmark::DoNotOptimize(tr.segments);
    }
}
BENCHMARK(bm_bits_range_query)->Range(64, 4096);

void bm_bits_erase_insert_cycle(benchmark::State& state) {
    const auto segs = make_segments(state.range(0), 1);
    bits_tree t;
    for (const segment& s : segs) t.insert(s);
    std::size_t i = 0;
    for (auto _ : state) {
        const segment& s = segs[i++ % segs.size()];
        t.erase(s.id);
        t.insert(s);
    }
}
BENCHMARK(bm_bits_erase_insert_cycle)->Range(64, 4096);

void bm_sst_stab(benchmark::State& state) {
    const auto segs = make_segments(state.range(0), 1);
    auto t = sst_tree::build(segs);
    const auto points = make_points(512, 2);
    std::size_t i = 0;
    for (auto _ : state) {
        auto tr = t.stab(points[i++ % points.size()]);
        benchmark::DoNotOptimize(tr.segments);
    }
}
BENCHMARK(bm_sst_stab)->Range(64, 4096);

void bm_dst_stab(benchmark::State& state) {
    const auto segs = make_segments(state.range(0), 1);
    dst_tree t(0, window);
    for (const segment& s : segs) t.insert(s);
    const auto points = make_points(512, 2);
    std::size_t i = 0;
    for (auto _ : state) {
        auto tr = t.stab(points[i++ % points.size()]);
        benchmark::DoNotOptimize(tr.segments);
    }
}
BENCHMARK(bm_dst_stab)->Range(64, 4096);

void bm_oracle_stab(benchmark::State& state) {
    const auto segs = make_segments(state.range(0), 1);
    segment_bag bag;
    for (const segment& s : segs) bag.insert(s);
    const auto points = make_points(512, 2);
    std::size_t i = 0;
    for (auto _ : state) {
        auto ids = bag.stab(points[i++ % points.size()]);
        benchmark::DoNotOptimize(ids);
    }
}
BENCHMARK(bm_oracle_stab)->Range(64, 4096);

}  // namespace

BENCHMARK_MAIN();

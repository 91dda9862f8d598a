#include "stabcert/sample.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <unordered_map>

#include "stabcert/errors.hpp"
#include "stabcert/parallel.hpp"
#include "stabcert/rng.hpp"

namespace stabcert {

namespace {

constexpr std::size_t kBruteForceLimit = 10'000;

struct BucketIndex {
    // Spatial hash over fixed-size cube buckets of side `side`.
    explicit BucketIndex(const std::vector<Vec>& points, double side) : side_(side) {
        for (std::size_t i = 0; i < points.size(); ++i)
            buckets_[key(points[i])].push_back(i);
    }

    std::uint64_t key(const Vec& x) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (double c : x) {
            const auto idx = static_cast<std::int64_t>(std::floor(c / side_));
            h ^= static_cast<std::uint64_t>(idx) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }

    double side_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

double brute_nearest(const std::vector<Vec>& points, const Vec& x) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& p : points) best = std::min(best, dist2(x, p));
    return best;
}

// Enumerates bucket index offsets on the Chebyshev ring of radius r.
void for_each_ring_offset(int dim, int r, std::vector<int>& offset,
                          const std::function<void(const std::vector<int>&)>& fn, int axis = 0,
                          bool on_ring = false) {
    if (axis == dim) {
        if (on_ring || r == 0) fn(offset);
        return;
    }
    for (int v = -r; v <= r; ++v) {
        offset[axis] = v;
        for_each_ring_offset(dim, r, offset, fn, axis + 1, on_ring || std::abs(v) == r);
    }
}

double hashed_nearest(const std::vector<Vec>& points, const BucketIndex& index, const Vec& x) {
    const int dim = static_cast<int>(x.size());
    std::vector<std::int64_t> base(dim);
    for (int i = 0; i < dim; ++i)
        base[i] = static_cast<std::int64_t>(std::floor(x[i] / index.side_));

    double best = std::numeric_limits<double>::infinity();
    std::vector<int> offset(dim, 0);
    Vec probe(dim);
    for (int r = 0; r < 64; ++r) {
        for_each_ring_offset(dim, r, offset, [&](const std::vector<int>& off) {
            std::uint64_t h = 0xcbf29ce484222325ULL;
            for (int i = 0; i < dim; ++i) {
                const std::int64_t idx = base[i] + off[i];
                h ^= static_cast<std::uint64_t>(idx) + 0x9e3779b97f4a7c15ULL + (h << 6) +
                     (h >> 2);
            }
            const auto it = index.buckets_.find(h);
            if (it == index.buckets_.end()) return;
            for (std::size_t pi : it->second) best = std::min(best, dist2(x, points[pi]));
        });
        // Points in buckets beyond ring r are at least r*side away.
        if (best <= static_cast<double>(r) * index.side_) return best;
    }
    return std::isinf(best) ? brute_nearest(points, x) : best;
}

}  // namespace

SampleGrid delta_grid(const EnergyForm& form, double delta, std::size_t cap, bool strict_pitch) {
    if (delta <= 0.0) throw std::invalid_argument("delta_grid: delta must be positive");
    const std::size_t dim = form.dim();
    const double ell = form.level_ell();
    const double cover = strict_pitch ? delta / 4.0 : delta;
    const double pitch = 2.0 * cover / std::sqrt(static_cast<double>(dim));

    // S lies in the ball of radius sqrt(2 ell / k_min); pad by the cover
    // radius so every cell that can meet S is visited.
    const double reach = std::sqrt(2.0 * ell / form.k_min());
    const auto half_span = static_cast<std::int64_t>(std::floor((reach + cover) / pitch));
    const double axis_count = 2.0 * static_cast<double>(half_span) + 1.0;
    const double candidates = std::pow(axis_count, static_cast<double>(dim));
    if (candidates > static_cast<double>(cap))
        throw GridTooLargeError(
            "delta_grid: candidate grid of ~" + std::to_string(candidates) +
                " cells exceeds cap " + std::to_string(cap) +
                "; reduce dim or ell, or raise delta",
            static_cast<std::size_t>(std::min(candidates, 1e18)), cap);

    SampleGrid grid;
    grid.delta = delta;
    grid.spacing = pitch;

    std::vector<std::int64_t> idx(dim, -half_span);
    Vec center(dim);
    while (true) {
        for (std::size_t i = 0; i < dim; ++i) center[i] = static_cast<double>(idx[i]) * pitch;
        if (energy(form, center) <= ell) {
            grid.points.push_back(center);
        } else {
            const Vec p = project_onto_sublevel(form, center);
            if (dist2(center, p) < cover) grid.points.push_back(p);
        }
        std::size_t axis = 0;
        while (axis < dim && ++idx[axis] > half_span) {
            idx[axis] = -half_span;
            ++axis;
        }
        if (axis == dim) break;
    }
    return grid;
}

double nearest_distance(const SampleGrid& grid, const Vec& x) {
    if (grid.points.empty()) return std::numeric_limits<double>::infinity();
    if (grid.points.size() <= kBruteForceLimit) return brute_nearest(grid.points, x);
    static thread_local const SampleGrid* cached_grid = nullptr;
    static thread_local std::unique_ptr<BucketIndex> cached_index;
    if (cached_grid != &grid) {
        cached_index = std::make_unique<BucketIndex>(grid.points, grid.delta);
        cached_grid = &grid;
    }
    return hashed_nearest(grid.points, *cached_index, x);
}

CoveringReport covering_check(const SampleGrid& grid, const EnergyForm& form,
                              std::size_t n_probe, std::uint64_t seed, int threads) {
    if (n_probe == 0) throw std::invalid_argument("covering_check: n_probe must be >= 1");
    const std::size_t dim = form.dim();
    const double ell = form.level_ell();
    const double reach = std::sqrt(2.0 * ell / form.k_min());

    std::vector<double> gaps(n_probe, 0.0);
    std::vector<Vec> probes(n_probe);
    parallel_for(n_probe, threads, [&](std::size_t i) {
        SplitMix64 rng = SplitMix64::substream(seed, i);
        Vec x(dim);
        do {
            for (std::size_t d = 0; d < dim; ++d) x[d] = rng.uniform(-reach, reach);
        } while (energy(form, x) > ell);
        gaps[i] = nearest_distance(grid, x);
        probes[i] = x;
    });

    CoveringReport report;
    report.n_probe = n_probe;
    std::size_t worst = 0;
    for (std::size_t i = 1; i < n_probe; ++i)
        if (gaps[i] > gaps[worst]) worst = i;
    report.max_gap = gaps[worst];
    report.worst_probe = probes[worst];
    report.pass = report.max_gap <= grid.delta;
    return report;
}

}  // namespace stabcert

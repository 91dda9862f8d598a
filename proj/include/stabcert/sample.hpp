#ifndef STABCERT_SAMPLE_HPP
#define STABCERT_SAMPLE_HPP

#include <cstdint>
#include <vector>

#include "stabcert/energy.hpp"
#include "stabcert/linalg.hpp"

namespace stabcert {

/// Finite sample of the sublevel set S = {x : E(x) <= ell} with covering
/// radius `delta`: every point of S is within delta of some sample.
struct SampleGrid {
    double delta = 0.0;
    double spacing = 0.0;  // per-axis pitch of the underlying grid
    std::vector<Vec> points;

    std::size_t count() const { return points.size(); }
};

/// Axis-aligned grid over S with per-axis pitch 2*delta/sqrt(dim) (cell
/// half-diagonal = delta). Cell centers inside S are kept as-is; a center
/// outside S whose cell still meets S contributes its projection onto S.
/// Projection onto a convex set is nonexpansive, so the covering radius
/// delta holds by construction. With `strict_pitch` the grid is built at
/// covering radius delta/4 instead (inter-sample spacing delta/2 in 1-D),
/// matching the tighter sampling convention; `delta` itself is unchanged.
///
/// Throws GridTooLargeError when the candidate cell count would exceed
/// `cap` -- reduce the dimension or ell, or raise delta.
SampleGrid delta_grid(const EnergyForm& form, double delta, std::size_t cap = 10'000'000,
                      bool strict_pitch = false);

/// Stochastic validation of the covering invariant: n_probe points drawn
/// uniformly in S (rejection sampling in the bounding box), max distance
/// to the nearest grid point. Passes iff the max gap is <= grid.delta.
struct CoveringReport {
    double max_gap = 0.0;
    Vec worst_probe;
    std::size_t n_probe = 0;
    bool pass = false;
};

CoveringReport covering_check(const SampleGrid& grid, const EnergyForm& form,
                              std::size_t n_probe, std::uint64_t seed, int threads = 0);

/// Distance from x to the nearest grid point (brute force below 1e4
/// points, uniform-bucket spatial hash above).
double nearest_distance(const SampleGrid& grid, const Vec& x);

}  // namespace stabcert

#endif

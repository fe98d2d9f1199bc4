#pragma once

#include <string>
#include <vector>

#include "apsam/trajectory.hpp"

namespace apsam {

struct IdtaPoint {
    std::size_t seq = 0;
    CrossingKind kind = CrossingKind::PosReal;
    long coordinate = 0;
    double omega_cross = 0.0;
};

/// Crossings unrolled onto integer coordinates: adjacent points differ by at
/// most one and each coordinate is congruent to its kind label mod 4.
struct IdtaCurve {
    std::vector<IdtaPoint> points;
    CrossingKind first_kind = CrossingKind::PosReal;

    [[nodiscard]] bool empty() const noexcept { return points.empty(); }
};

IdtaCurve build_idta(const std::vector<Crossing>& crossings);

struct StableRegion {
    long lo = 0;
    long hi = 0;

    [[nodiscard]] bool contains(long c) const { return c >= lo && c <= hi; }
};

/// The first coordinate and its two neighbours.
StableRegion stable_region(CrossingKind first);

struct StabilityVerdict {
    bool stable = true;
    /// Net clockwise loops around the origin, i.e. the RHP-zero count.
    long winding = 0;
    long first_coordinate = 0;
    long last_coordinate = 0;
    bool marginal = false;
    std::vector<std::string> diagnostics;
};

StabilityVerdict assess(const IdtaCurve& curve);

struct AssessmentOptions {
    CrossingOptions crossings{1e-9, true};
    /// Densification factor for the single retry after NonAdjacentSequence.
    int refinement_factor = 10;
};

struct Assessment {
    StabilityVerdict verdict;
    IdtaCurve curve;
    CrossingScan scan;
    BoundaryCheck boundary;
    bool refined = false;
};

/// Crossing scan, IDTA construction and verdict, with one refinement retry.
Assessment assess_trajectory(const DeterminantTrajectory& t, const AssessmentOptions& opts = {});

}  // namespace apsam

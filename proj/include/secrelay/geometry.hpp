#pragma once

// Coordinate frame and Poisson-field sampling shared by the analytic,
// quadrature and simulation modules.
//
// Frame: Cartesian, origin at the source/destination midpoint, source on the
// positive x-axis. All lengths in meters, densities in nodes per square meter.

#include <optional>
#include <span>
#include <vector>

#include "secrelay/rng.hpp"

namespace secrelay {

struct PlanarPoint {
    double x = 0.0;
    double y = 0.0;

    [[nodiscard]] double norm() const;
    [[nodiscard]] double norm_squared() const { return x * x + y * y; }
    friend bool operator==(const PlanarPoint&, const PlanarPoint&) = default;
};

[[nodiscard]] double distance(const PlanarPoint& a, const PlanarPoint& b);
[[nodiscard]] double distance_squared(const PlanarPoint& a, const PlanarPoint& b);

/// Polar position about the midpoint. Construction normalizes theta to [0, 2pi).
class PolarPoint {
public:
    PolarPoint() = default;
    PolarPoint(double r, double theta);

    [[nodiscard]] double r() const { return r_; }
    [[nodiscard]] double theta() const { return theta_; }
    [[nodiscard]] PlanarPoint to_planar() const;
    [[nodiscard]] static PolarPoint from_planar(const PlanarPoint& p);

private:
    double r_ = 0.0;
    double theta_ = 0.0;
};

struct Endpoints {
    PlanarPoint source;
    PlanarPoint destination;
    double d_sd = 0.0;

    /// Source at (d_sd/2, 0), destination at (-d_sd/2, 0).
    [[nodiscard]] static Endpoints for_distance(double d_sd);
};

struct HopDistances {
    double d_sr = 0.0;
    double d_rd = 0.0;
};

/// Distances relay->source and relay->destination.
/// Throws std::invalid_argument on non-finite or negative input, or d_sd <= 0.
[[nodiscard]] HopDistances hop_distances(const PolarPoint& relay, double d_sd);

/// Disc that truncates the infinite Poisson field.
struct SimulationWindow {
    PlanarPoint center;
    double radius = 1.0;

    [[nodiscard]] double area() const;
    [[nodiscard]] bool contains(const PlanarPoint& p) const;
};

/// Default truncation disc: centered at the midpoint with
/// radius max(5 d_sd, 4/sqrt(lambda_e)); lambda_e == 0 drops the second term.
[[nodiscard]] SimulationWindow default_window(double d_sd, double lambda_e);

/// Expected value of sum_j h_j |x_j - tx|^-alpha (unit-mean h_j) over the
/// points of a density-lambda PPP lying OUTSIDE the window. tx must be inside.
[[nodiscard]] double exterior_mean_aggregate(const PlanarPoint& tx, const SimulationWindow& window,
                                             double density, double alpha);

[[nodiscard]] PlanarPoint uniform_in_disc(TrialRng& rng, const SimulationWindow& window);

/// Homogeneous PPP restricted to the window: Poisson(density * area) points,
/// i.i.d. uniform on the disc.
[[nodiscard]] std::vector<PlanarPoint> sample_ppp(double density, const SimulationWindow& window,
                                                  TrialRng& rng);

/// Point minimizing the distance to the origin; ties broken by smaller polar
/// angle, then by input order.
[[nodiscard]] std::optional<PlanarPoint> nearest_to_origin(std::span<const PlanarPoint> points);

/// Draws the point that nearest_to_origin(sample_ppp(density, window, rng))
/// would return, without materializing the field. Exact in distribution for
/// windows centered at the origin; other windows fall back to full sampling.
[[nodiscard]] std::optional<PlanarPoint> sample_nearest_to_origin(double density,
                                                                  const SimulationWindow& window,
                                                                  TrialRng& rng);

}  // namespace secrelay

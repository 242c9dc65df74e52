#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace ctsim {

using Real = double;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using IntVector = Eigen::VectorXi;
using IndexMatrix = Eigen::MatrixXi;

/// Identifier of a base arm (an outcome-producing unit: an edge or vertex weight).
using ArmId = int;

/// Closed interval, used for outcome domains and mean domains.
struct Interval {
    Real lo = 0.0;
    Real hi = 1.0;

    Real width() const { return hi - lo; }
    Real clamp(Real x) const { return x < lo ? lo : (x > hi ? hi : x); }
    bool contains(Real x, Real tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
};

/// Tolerance applied to every real-valued inequality check (triangle
/// inequality, unit norms, smoothness, Eq. 4 slack).
inline constexpr Real kCheckTol = 1e-9;

}  // namespace ctsim

#pragma once

#include <cmath>

#include "ctsim/types.hpp"

namespace ctsim {

inline Real normal_cdf(Real x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Inverse standard normal CDF (Acklam's rational approximation, relative
/// error below 1.2e-9). Antisymmetric around p = 1/2.
Real normal_quantile(Real p);

}  // namespace ctsim

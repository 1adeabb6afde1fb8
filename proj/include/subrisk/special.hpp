#pragma once

namespace subrisk::special {

// Upper incomplete gamma Gamma(s, z) for real s, including s <= 0, and z > 0.
// Needed for Laplace transforms of Pareto laws, where s = -shape.
double upper_incomplete_gamma(double s, double z);

}  // namespace subrisk::special

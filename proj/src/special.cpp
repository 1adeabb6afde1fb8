#include "subrisk/special.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace subrisk::special {

namespace {

// Legendre continued fraction for Gamma(s, z), modified Lentz. Converges for
// z >= ~1 and any real s.
double upper_gamma_cf(double s, double z) {
    constexpr double tiny = 1e-300;
    double b = z + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-z + s * std::log(z)) * h;
}

}  // namespace

double upper_incomplete_gamma(double s, double z) {
    if (!(z > 0.0) || std::isnan(s)) {
        throw std::invalid_argument("upper_incomplete_gamma: requires z > 0");
    }
    if (s > 0.0) return boost::math::tgamma(s, z);
    if (z >= 1.5) return upper_gamma_cf(s, z);

    // Downward recurrence Gamma(t-1, z) = (Gamma(t, z) - z^(t-1) e^-z)/(t-1)
    // from a nonnegative starting order. Stable for small z.
    const double n = std::ceil(-s);
    const double s0 = s + n;
    double g = (s0 == 0.0) ? boost::math::expint(1, z)  // Gamma(0, z) = E1(z)
                           : boost::math::tgamma(s0, z);
    double t = s0;
    for (int k = 0; k < static_cast<int>(n); ++k) {
        g = (g - std::pow(z, t - 1.0) * std::exp(-z)) / (t - 1.0);
        t -= 1.0;
    }
    return g;
}

}  // namespace subrisk::special

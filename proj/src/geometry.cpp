#include "irs/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace irs
{
    AnglePair::AnglePair(double theta, double phi) : theta_(theta), phi_(phi)
    {
        if (!(theta >= 0.0 && theta <= std::numbers::pi / 2.0))
            throw std::invalid_argument("AnglePair: elevation " + std::to_string(theta) + " rad outside [0, pi/2]");
        if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi))
            throw std::invalid_argument("AnglePair: azimuth " + std::to_string(phi) + " rad outside [0, 2 pi)");
    }

    AnglePair AnglePair::wrapped(double theta, double phi)
    {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        double p = std::fmod(phi, two_pi);
        if (p < 0.0)
            p += two_pi;
        if (p >= two_pi) // fmod of a tiny negative value can round up to 2 pi
            p = 0.0;
        return AnglePair(theta, p);
    }

    AnglePair AnglePair::from_degrees(double theta_deg, double phi_deg)
    {
        // 90 deg must map to exactly pi/2
        const double theta = theta_deg == 90.0 ? std::numbers::pi / 2.0 : deg_to_rad(theta_deg);
        return wrapped(theta, deg_to_rad(phi_deg));
    }

    DirectionalCosines directional_cosines(const AnglePair &angle)
    {
        const double s = std::sin(angle.theta());
        return {s * std::cos(angle.phi()), s * std::sin(angle.phi())};
    }

    DirectionalCosines combined_cosines(const AnglePair &aoa, const AnglePair &aod)
    {
        const auto i = directional_cosines(aoa);
        const auto r = directional_cosines(aod);
        return {i.a_x + r.a_x, i.a_y + r.a_y};
    }

    IrsGeometry::IrsGeometry(int q_x, int q_y, double d_x, double d_y) : x_{q_x, d_x}, y_{q_y, d_y}
    {
        if (q_x < 1 || q_y < 1)
            throw std::invalid_argument("IrsGeometry: unit-cell counts must be positive");
        if (!(d_x > 0.0) || !(d_y > 0.0) || !std::isfinite(d_x) || !std::isfinite(d_y))
            throw std::invalid_argument("IrsGeometry: unit-cell spacings must be positive and finite");
    }

} // namespace irs

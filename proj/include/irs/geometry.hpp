#pragma once

#include <numbers>

namespace irs
{
    // Direction of an incident or reflected plane wave, in radians.
    // Elevation is restricted to the half-space in front of the surface.
    class AnglePair
    {
    public:
        AnglePair() = default;

        // Throws std::invalid_argument unless 0 <= theta <= pi/2 and 0 <= phi < 2 pi.
        AnglePair(double theta, double phi);

        // Same as the constructor but reduces phi into [0, 2 pi) first.
        static AnglePair wrapped(double theta, double phi);
        static AnglePair from_degrees(double theta_deg, double phi_deg);

        double theta() const { return theta_; }
        double phi() const { return phi_; }

        friend bool operator==(const AnglePair &, const AnglePair &) = default;

    private:
        double theta_ = 0.0;
        double phi_ = 0.0;
    };

    // Directional cosines (A_x, A_y). For a single direction both lie in [-1, 1] with
    // a_x^2 + a_y^2 <= 1; for a combined AoA+AoD pair each lies in [-2, 2].
    struct DirectionalCosines
    {
        double a_x = 0.0;
        double a_y = 0.0;

        friend bool operator==(const DirectionalCosines &, const DirectionalCosines &) = default;
    };

    DirectionalCosines directional_cosines(const AnglePair &angle);

    // A_t(aoa, aod) = A_t(aoa) + A_t(aod). The response of every phase profile depends on
    // the two directions only through this sum.
    DirectionalCosines combined_cosines(const AnglePair &aoa, const AnglePair &aod);

    enum class Axis
    {
        X,
        Y
    };

    // One axis of the unit-cell grid: cell count and spacing (in wavelengths).
    struct AxisGeometry
    {
        int count = 1;
        double spacing = 0.5;

        double aperture() const { return count * spacing; }

        friend bool operator==(const AxisGeometry &, const AxisGeometry &) = default;
    };

    // Planar uniform grid of Q_x x Q_y unit cells. All lengths are in wavelengths (lambda = 1).
    class IrsGeometry
    {
    public:
        // Throws std::invalid_argument on non-positive counts or spacings.
        IrsGeometry(int q_x, int q_y, double d_x, double d_y);

        int q_x() const { return x_.count; }
        int q_y() const { return y_.count; }
        double d_x() const { return x_.spacing; }
        double d_y() const { return y_.spacing; }
        int cell_count() const { return x_.count * y_.count; }

        const AxisGeometry &axis(Axis a) const { return a == Axis::X ? x_ : y_; }

        double aperture_x() const { return x_.aperture(); }
        double aperture_y() const { return y_.aperture(); }

        // Per-cell factor g = 4 pi A_uc / lambda^2.
        double unit_cell_factor() const { return 4.0 * std::numbers::pi * x_.spacing * y_.spacing; }

        // Continuous-aperture factor 4 pi / lambda^2 used by the integral approximation.
        static constexpr double continuous_cell_factor() { return 4.0 * std::numbers::pi; }

        // Coherent maximum |g| = g Q_x Q_y.
        double max_gain() const { return unit_cell_factor() * cell_count(); }

        friend bool operator==(const IrsGeometry &, const IrsGeometry &) = default;

    private:
        AxisGeometry x_;
        AxisGeometry y_;
    };

    constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
    constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

} // namespace irs

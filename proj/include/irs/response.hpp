#pragma once

#include "irs/codebook.hpp"
#include "irs/geometry.hpp"
#include "irs/specfun.hpp"

#include <optional>

namespace irs
{
    // Complex response g_m(aoa, aod), in absolute units (the unit-cell factor included).
    struct ResponseValue
    {
        Complex value;

        // 10 log10 |g|^2; -inf for an exact null.
        double magnitude_db() const;
        double power() const { return std::norm(value); }
    };

    enum class Method
    {
        Sum,        // direct unit-cell summation
        ClosedForm, // Dirichlet kernel for linear phases, erfi/Fresnel form for quadratic ones
        Oracle      // adaptive quadrature of the continuous-aperture integral (quadratic only)
    };

    // Per-axis detuning of the Dirichlet kernel, varpi_t = pi d_t (A_t - beta_t).
    struct LinearClosedFormParams
    {
        double varpi_x = 0.0;
        double varpi_y = 0.0;
    };

    // Per-axis chirp parameters of the continuous-aperture integral:
    // vartheta_t = -pi delta_beta_t / L_t, nu_t = 2 pi (A_t - beta_t), upsilon_t = nu_t - 2 pi delta_beta_t.
    struct QuadClosedFormParams
    {
        double vartheta_x = 0.0;
        double vartheta_y = 0.0;
        double nu_x = 0.0;
        double nu_y = 0.0;
        double upsilon_x = 0.0;
        double upsilon_y = 0.0;
    };

    LinearClosedFormParams linear_closed_form_params(const IrsGeometry &geometry, const TransmissionMode &mode,
                                                     const DirectionalCosines &combined);

    // The continuous integral has no grating periodicity, so A_t is first moved by a multiple
    // of lambda / d_t to the alias closest to the centre of the mode's gradient interval.
    // The discrete response is exactly periodic under that shift.
    QuadClosedFormParams quadratic_closed_form_params(const IrsGeometry &geometry, const TransmissionMode &mode,
                                                      const DirectionalCosines &combined);

    // Alias of a in (center - period/2, center + period/2], period = 1 / spacing.
    double nearest_alias(double a, double spacing, double center);

    // sin(Q w) / sin(w), with the removable singularities at w = k pi handled analytically.
    double dirichlet_ratio(int count, double varpi);

    // Optional phase error injected at one cell in the direct summation (negative controls).
    struct PhaseCorruption
    {
        int n_x = 0;
        int n_y = 0;
        double radians = 0.0;
    };

    ResponseValue response_sum(const IrsGeometry &geometry, const TransmissionMode &mode,
                               const DirectionalCosines &combined,
                               const std::optional<PhaseCorruption> &corruption = std::nullopt);
    ResponseValue response_sum(const IrsGeometry &geometry, const TransmissionMode &mode, const AnglePair &aoa,
                               const AnglePair &aod);

    // Exact closed form for linear phases. Throws std::invalid_argument for quadratic modes.
    ResponseValue response_linear_closed(const IrsGeometry &geometry, const TransmissionMode &mode,
                                         const DirectionalCosines &combined);
    ResponseValue response_linear_closed(const IrsGeometry &geometry, const TransmissionMode &mode,
                                         const AnglePair &aoa, const AnglePair &aod);

    // Continuous-aperture closed form for quadratic phases; each axis factor is evaluated
    // through specfun::quadratic_phase_integral. Throws std::domain_error for delta_beta = 0.
    ResponseValue response_quadratic_closed(const IrsGeometry &geometry, const TransmissionMode &mode,
                                            const DirectionalCosines &combined);
    ResponseValue response_quadratic_closed(const IrsGeometry &geometry, const TransmissionMode &mode,
                                            const AnglePair &aoa, const AnglePair &aod);

    // Same quantity written literally as the product of erfi differences, with the
    // prefactor -j pi g / (4 sqrt(vartheta_x) sqrt(vartheta_y)) on principal branches.
    ResponseValue response_quadratic_closed_erfi(const IrsGeometry &geometry, const TransmissionMode &mode,
                                                 const DirectionalCosines &combined);

    // Adaptive Gauss-Kronrod quadrature of the continuous-aperture integral; the integrand
    // factorizes, so it is the product of two 1-D quadratures. Throws NonConvergenceError if
    // an axis factor misses its absolute tolerance of 1e-9.
    struct OracleOptions
    {
        int max_depth = 30;
        double absolute_tolerance = 1e-9;
    };

    ResponseValue response_integral_oracle(const IrsGeometry &geometry, const TransmissionMode &mode,
                                           const DirectionalCosines &combined, const OracleOptions &options = {});
    ResponseValue response_integral_oracle(const IrsGeometry &geometry, const TransmissionMode &mode,
                                           const AnglePair &aoa, const AnglePair &aod);

    // Throws std::invalid_argument for (DFT|Linear, Oracle).
    ResponseValue response(const IrsGeometry &geometry, const TransmissionMode &mode,
                           const DirectionalCosines &combined, Method method);
    ResponseValue response(const IrsGeometry &geometry, const TransmissionMode &mode, const AnglePair &aoa,
                           const AnglePair &aod, Method method);

    // One axis factor X_t with g = g_cell * X_x * X_y (for the continuous forms the 1/d_t
    // Riemann scaling is folded into X_t). Used by codebook-wide searches.
    Complex axis_response(Family family, const AxisGeometry &axis, const GradientInterval &gradient, int mode_index,
                          double a, Method method);

    std::string_view to_string(Method method);
    // Accepts "sum", "closed", "oracle".
    Method parse_method(std::string_view name);

} // namespace irs

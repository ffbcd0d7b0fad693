#include "irs/response.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace irs
{
    namespace
    {
        constexpr double kPi = std::numbers::pi;
        constexpr double kTwoPi = 2.0 * std::numbers::pi;
        constexpr Complex kJ{0.0, 1.0};

        double frac(double turns) { return turns - std::floor(turns); }

        Complex pairwise_sum(std::span<const Complex> values)
        {
            if (values.size() <= 8)
            {
                Complex s{0.0, 0.0};
                for (const auto &v : values)
                    s += v;
                return s;
            }
            const std::size_t half = values.size() / 2;
            return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
        }

        double linear_varpi(Family family, const AxisGeometry &axis, const GradientInterval &gradient, int mode_index,
                            double a)
        {
            if (family == Family::Dft)
                return kPi * (axis.spacing * a - static_cast<double>(mode_index) / axis.count);
            return kPi * axis.spacing * (a - gradient.beta);
        }

        Complex linear_axis_closed(Family family, const AxisGeometry &axis, const GradientInterval &gradient,
                                   int mode_index, double a)
        {
            // sum_{n=0}^{Q-1} exp(j 2 w n) = exp(j (Q-1) w) sin(Q w) / sin(w)
            const double w = linear_varpi(family, axis, gradient, mode_index, a);
            return std::polar(dirichlet_ratio(axis.count, w), (axis.count - 1) * w);
        }

        struct AxisChirp
        {
            double vartheta;
            double nu;
            double upsilon;
        };

        AxisChirp axis_chirp(const AxisGeometry &axis, const GradientInterval &gradient, double a)
        {
            const double aliased = nearest_alias(a, axis.spacing, gradient.beta + 0.5 * gradient.delta_beta);
            const double nu = kTwoPi * (aliased - gradient.beta);
            return {-kPi * gradient.delta_beta / axis.aperture(), nu, nu - kTwoPi * gradient.delta_beta};
        }

        // integral_0^L exp(j (vartheta x^2 + nu x)) dx
        Complex quadratic_axis_integral(const AxisGeometry &axis, const GradientInterval &gradient, double a)
        {
            const AxisChirp c = axis_chirp(axis, gradient, a);
            return specfun::quadratic_phase_integral(c.vartheta, c.nu, 0.0, axis.aperture());
        }

        // Bisection driven by the 31-point Gauss-Kronrod panel rule with an absolute error
        // budget shared in proportion to panel width. Panels still above budget at max_depth
        // are kept; the caller checks the accumulated estimate.
        template <class F>
        Complex adaptive_gauss_kronrod(const F &f, double a, double b, double budget_density, int depth, double &error)
        {
            double local = 0.0;
            const Complex value =
                boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &local);
            if (local <= budget_density * (b - a) || depth <= 0)
            {
                error += local;
                return value;
            }
            const double mid = 0.5 * (a + b);
            return adaptive_gauss_kronrod(f, a, mid, budget_density, depth - 1, error) +
                   adaptive_gauss_kronrod(f, mid, b, budget_density, depth - 1, error);
        }

        Complex oracle_axis_integral(const AxisGeometry &axis, const GradientInterval &gradient, double a,
                                     const OracleOptions &options)
        {
            const AxisChirp c = axis_chirp(axis, gradient, a);
            auto integrand = [&](double x) { return std::polar(1.0, c.vartheta * x * x + c.nu * x); };
            const double length = axis.aperture();
            double error = 0.0;
            // aim three orders below the reported tolerance; the GK estimate is pessimistic
            const Complex value = adaptive_gauss_kronrod(integrand, 0.0, length,
                                                         1e-3 * options.absolute_tolerance / length, options.max_depth,
                                                         error);
            if (!(error <= options.absolute_tolerance))
            {
                char msg[128];
                std::snprintf(msg, sizeof msg, "response_integral_oracle: axis error estimate %.3e above %.3e", error,
                              options.absolute_tolerance);
                throw NonConvergenceError(msg);
            }
            return value;
        }

        Complex sum_axis(Family family, const AxisGeometry &axis, const GradientInterval &gradient, int mode_index,
                         double a)
        {
            std::vector<Complex> terms(static_cast<std::size_t>(axis.count));
            for (int n = 0; n < axis.count; ++n)
            {
                const double turns = frac(axis.spacing * a * n) + frac(axis_phase_turns(family, axis, gradient, mode_index, n));
                terms[static_cast<std::size_t>(n)] = std::polar(1.0, kTwoPi * frac(turns));
            }
            return pairwise_sum(terms);
        }

        void require_quadratic(const TransmissionMode &mode, const char *who)
        {
            if (mode.family != Family::Quadratic)
                throw std::invalid_argument(std::string(who) + ": requires a quadratic mode");
            if (mode.x.delta_beta == 0.0 || mode.y.delta_beta == 0.0)
                throw std::domain_error(std::string(who) + ": delta_beta = 0 is singular, use the linear closed form");
        }

    } // namespace

    double ResponseValue::magnitude_db() const { return 10.0 * std::log10(power()); }

    double nearest_alias(double a, double spacing, double center)
    {
        const double period = 1.0 / spacing;
        return a + period * std::round((center - a) / period);
    }

    double dirichlet_ratio(int count, double varpi)
    {
        const double s = std::sin(varpi);
        if (std::abs(s) < 1e-9)
        {
            // limit at varpi = k pi is Q (-1)^(k (Q-1))
            const long long k = std::llround(varpi / kPi);
            const bool negative = ((k * (count - 1)) % 2) != 0;
            return negative ? -static_cast<double>(count) : static_cast<double>(count);
        }
        return std::sin(count * varpi) / s;
    }

    LinearClosedFormParams linear_closed_form_params(const IrsGeometry &geometry, const TransmissionMode &mode,
                                                     const DirectionalCosines &combined)
    {
        return {linear_varpi(mode.family, geometry.axis(Axis::X), mode.x, mode.index.m_x, combined.a_x),
                linear_varpi(mode.family, geometry.axis(Axis::Y), mode.y, mode.index.m_y, combined.a_y)};
    }

    QuadClosedFormParams quadratic_closed_form_params(const IrsGeometry &geometry, const TransmissionMode &mode,
                                                      const DirectionalCosines &combined)
    {
        const AxisChirp x = axis_chirp(geometry.axis(Axis::X), mode.x, combined.a_x);
        const AxisChirp y = axis_chirp(geometry.axis(Axis::Y), mode.y, combined.a_y);
        return {x.vartheta, y.vartheta, x.nu, y.nu, x.upsilon, y.upsilon};
    }

    ResponseValue response_sum(const IrsGeometry &geometry, const TransmissionMode &mode,
                               const DirectionalCosines &combined, const std::optional<PhaseCorruption> &corruption)
    {
        const int qx = geometry.q_x();
        const int qy = geometry.q_y();
        const double sx = geometry.d_x() * combined.a_x;
        const double sy = geometry.d_y() * combined.a_y;

        std::vector<Complex> rows(static_cast<std::size_t>(qx));
        std::vector<Complex> row(static_cast<std::size_t>(qy));
        for (int nx = 0; nx < qx; ++nx)
        {
            const double steer_x = frac(sx * nx);
            for (int ny = 0; ny < qy; ++ny)
            {
                double omega = phase_at(mode, geometry, nx, ny);
                if (corruption && corruption->n_x == nx && corruption->n_y == ny)
                    omega += corruption->radians;
                const double steer = kTwoPi * frac(steer_x + frac(sy * ny));
                row[static_cast<std::size_t>(ny)] = std::polar(1.0, steer + omega);
            }
            rows[static_cast<std::size_t>(nx)] = pairwise_sum(row);
        }
        return {geometry.unit_cell_factor() * pairwise_sum(rows)};
    }

    ResponseValue response_sum(const IrsGeometry &geometry, const TransmissionMode &mode, const AnglePair &aoa,
                               const AnglePair &aod)
    {
        return response_sum(geometry, mode, combined_cosines(aoa, aod));
    }

    ResponseValue response_linear_closed(const IrsGeometry &geometry, const TransmissionMode &mode,
                                         const DirectionalCosines &combined)
    {
        if (mode.family == Family::Quadratic)
            throw std::invalid_argument("response_linear_closed: quadratic modes have no Dirichlet closed form");
        const Complex x = linear_axis_closed(mode.family, geometry.axis(Axis::X), mode.x, mode.index.m_x, combined.a_x);
        const Complex y = linear_axis_closed(mode.family, geometry.axis(Axis::Y), mode.y, mode.index.m_y, combined.a_y);
        return {geometry.unit_cell_factor() * x * y};
    }

    ResponseValue response_linear_closed(const IrsGeometry &geometry, const TransmissionMode &mode,
                                         const AnglePair &aoa, const AnglePair &aod)
    {
        return response_linear_closed(geometry, mode, combined_cosines(aoa, aod));
    }

    ResponseValue response_quadratic_closed(const IrsGeometry &geometry, const TransmissionMode &mode,
                                            const DirectionalCosines &combined)
    {
        require_quadratic(mode, "response_quadratic_closed");
        const Complex ix = quadratic_axis_integral(geometry.axis(Axis::X), mode.x, combined.a_x);
        const Complex iy = quadratic_axis_integral(geometry.axis(Axis::Y), mode.y, combined.a_y);
        return {IrsGeometry::continuous_cell_factor() * ix * iy};
    }

    ResponseValue response_quadratic_closed(const IrsGeometry &geometry, const TransmissionMode &mode,
                                            const AnglePair &aoa, const AnglePair &aod)
    {
        return response_quadratic_closed(geometry, mode, combined_cosines(aoa, aod));
    }

    ResponseValue response_quadratic_closed_erfi(const IrsGeometry &geometry, const TransmissionMode &mode,
                                                 const DirectionalCosines &combined)
    {
        require_quadratic(mode, "response_quadratic_closed_erfi");
        const QuadClosedFormParams p = quadratic_closed_form_params(geometry, mode, combined);

        auto axis_term = [](double vartheta, double nu, double upsilon) {
            const Complex k = std::sqrt(kJ / (4.0 * vartheta));
            const Complex diff = specfun::erfi(k * upsilon) - specfun::erfi(k * nu);
            return std::polar(1.0, -nu * nu / (4.0 * vartheta)) * diff;
        };
        const Complex prefactor = -kJ * kPi * IrsGeometry::continuous_cell_factor() /
                                  (4.0 * std::sqrt(Complex(p.vartheta_x)) * std::sqrt(Complex(p.vartheta_y)));
        return {prefactor * axis_term(p.vartheta_x, p.nu_x, p.upsilon_x) * axis_term(p.vartheta_y, p.nu_y, p.upsilon_y)};
    }

    ResponseValue response_integral_oracle(const IrsGeometry &geometry, const TransmissionMode &mode,
                                           const DirectionalCosines &combined, const OracleOptions &options)
    {
        if (mode.family != Family::Quadratic)
            throw std::invalid_argument("response_integral_oracle: requires a quadratic mode");
        const Complex ix = oracle_axis_integral(geometry.axis(Axis::X), mode.x, combined.a_x, options);
        const Complex iy = oracle_axis_integral(geometry.axis(Axis::Y), mode.y, combined.a_y, options);
        return {IrsGeometry::continuous_cell_factor() * ix * iy};
    }

    ResponseValue response_integral_oracle(const IrsGeometry &geometry, const TransmissionMode &mode,
                                           const AnglePair &aoa, const AnglePair &aod)
    {
        return response_integral_oracle(geometry, mode, combined_cosines(aoa, aod));
    }

    ResponseValue response(const IrsGeometry &geometry, const TransmissionMode &mode,
                           const DirectionalCosines &combined, Method method)
    {
        switch (method)
        {
        case Method::Sum:
            return response_sum(geometry, mode, combined);
        case Method::ClosedForm:
            return mode.family == Family::Quadratic ? response_quadratic_closed(geometry, mode, combined)
                                                    : response_linear_closed(geometry, mode, combined);
        case Method::Oracle:
            return response_integral_oracle(geometry, mode, combined);
        }
        throw std::invalid_argument("response: unknown method");
    }

    ResponseValue response(const IrsGeometry &geometry, const TransmissionMode &mode, const AnglePair &aoa,
                           const AnglePair &aod, Method method)
    {
        return response(geometry, mode, combined_cosines(aoa, aod), method);
    }

    Complex axis_response(Family family, const AxisGeometry &axis, const GradientInterval &gradient, int mode_index,
                          double a, Method method)
    {
        switch (method)
        {
        case Method::Sum:
            return sum_axis(family, axis, gradient, mode_index, a);
        case Method::ClosedForm:
            if (family == Family::Quadratic)
                return quadratic_axis_integral(axis, gradient, a) / axis.spacing;
            return linear_axis_closed(family, axis, gradient, mode_index, a);
        case Method::Oracle:
            if (family != Family::Quadratic)
                throw std::invalid_argument("axis_response: oracle requires a quadratic mode");
            return oracle_axis_integral(axis, gradient, a, OracleOptions{}) / axis.spacing;
        }
        throw std::invalid_argument("axis_response: unknown method");
    }

    std::string_view to_string(Method method)
    {
        switch (method)
        {
        case Method::Sum:
            return "sum";
        case Method::ClosedForm:
            return "closed";
        case Method::Oracle:
            return "oracle";
        }
        return "unknown";
    }

    Method parse_method(std::string_view name)
    {
        if (name == "sum")
            return Method::Sum;
        if (name == "closed" || name == "closed-form")
            return Method::ClosedForm;
        if (name == "oracle")
            return Method::Oracle;
        throw std::invalid_argument("unknown response method '" + std::string(name) + "'");
    }

} // namespace irs

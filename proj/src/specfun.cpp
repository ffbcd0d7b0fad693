#include "irs/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace irs::specfun
{
    namespace
    {
        constexpr Complex kJ{0.0, 1.0};
        constexpr double kInvSqrtPi = std::numbers::inv_sqrtpi;
        constexpr double kLogMax = 709.782712893384; // log(DBL_MAX)
        constexpr int kMaxTerms = 200000;

        // Below this |argument| the power series is used; above it the continued fraction.
        constexpr double kFresnelSeriesLimit = 2.0;

        // K(w) with erfc(w) = exp(-w^2) / sqrt(pi) * K(w), Re(w) > 0.
        // Laplace continued fraction K = 1/(w + (1/2)/(w + 1/(w + (3/2)/(w + ...)))),
        // evaluated with the modified Lentz recurrence.
        Complex erfc_cf_kernel(Complex w)
        {
            constexpr double tiny = 1e-300;
            constexpr double eps = 2.0 * std::numeric_limits<double>::epsilon();

            Complex f = w;
            Complex c = f;
            Complex d = 0.0;
            for (int n = 1; n < kMaxTerms; ++n)
            {
                const double a = 0.5 * n;
                d = w + a * d;
                if (std::abs(d) < tiny)
                    d = tiny;
                c = w + a / c;
                if (std::abs(c) < tiny)
                    c = tiny;
                d = 1.0 / d;
                const Complex delta = c * d;
                f *= delta;
                if (std::abs(delta - 1.0) < eps)
                    return 1.0 / f;
            }
            throw NonConvergenceError("erfc continued fraction did not converge");
        }

        // Power series with running rescale so that partial sums never overflow.
        // Returns the sum as (mantissa, log_scale): value = mantissa * exp(log_scale).
        struct ScaledSum
        {
            Complex mantissa;
            double log_scale;
        };

        // erfi(z) = 2/sqrt(pi) * sum_k z^(2k+1) / (k! (2k+1))
        ScaledSum erfi_taylor(Complex z)
        {
            constexpr double rescale_at = 1e250;
            const double log_rescale = std::log(rescale_at);
            const Complex z2 = z * z;
            const double r2 = std::norm(z);

            Complex term = z;
            Complex sum = term;
            double log_scale = 0.0;
            for (int k = 1; k < kMaxTerms; ++k)
            {
                term *= z2 * ((2.0 * k - 1.0) / (k * (2.0 * k + 1.0)));
                sum += term;
                if (std::abs(sum) > rescale_at || std::abs(term) > rescale_at)
                {
                    sum /= rescale_at;
                    term /= rescale_at;
                    log_scale += log_rescale;
                }
                if (k > r2 && std::abs(term) <= 1e-17 * std::abs(sum))
                    return {2.0 * kInvSqrtPi * sum, log_scale};
            }
            throw NonConvergenceError("erfi power series did not converge");
        }

        Complex erfi_first_quadrant(Complex z)
        {
            const double x = z.real();
            const double y = z.imag();
            const double r = std::abs(z);
            if (r == 0.0)
                return 0.0;

            // |erfi(z)| ~ exp(x^2 - y^2) / (sqrt(pi) |z|) away from the origin
            const double log_mag = x * x - y * y - std::log(std::sqrt(std::numbers::pi) * r);
            if (r > 1.0 && log_mag > kLogMax)
                throw std::overflow_error("erfi: result exceeds double range");

            if (y <= 1.5 || r <= 2.5)
            {
                // Cancellation in the series is bounded by exp(2 y^2) (or exp(r^2) near the origin).
                const ScaledSum s = erfi_taylor(z);
                const Complex v = s.mantissa * std::exp(s.log_scale);
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                    throw std::overflow_error("erfi: result exceeds double range");
                return v;
            }

            // erfi(z) = j (1 - erfc(w)), w = y - j x with Re(w) = y > 1.5
            const Complex w{y, -x};
            const Complex k = erfc_cf_kernel(w);
            const Complex e = std::exp(-w * w);
            const Complex erfc_w = e * k * kInvSqrtPi;
            const Complex v = kJ * (1.0 - erfc_w);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw std::overflow_error("erfi: result exceeds double range");
            return v;
        }

        // integral_0^a exp(j s^2) ds = sum_k j^k a^(2k+1) / (k! (2k+1)), used for |a| <= 2.
        Complex fresnel_series(double a)
        {
            const double a2 = a * a;
            Complex term = a;
            Complex sum = term;
            for (int k = 1; k < 200; ++k)
            {
                term *= kJ * a2 * ((2.0 * k - 1.0) / (k * (2.0 * k + 1.0)));
                sum += term;
                if (std::abs(term) <= 1e-18 * std::abs(sum))
                    break;
            }
            return sum;
        }

        // h(a) with integral_a^inf exp(j s^2) ds = exp(j a^2) h(a), a > 0.
        Complex fresnel_tail_envelope(double a)
        {
            const Complex rot = std::polar(1.0, std::numbers::pi / 4.0);
            return 0.5 * rot * erfc_cf_kernel(a / rot);
        }

        // integral_0^inf exp(j s^2) ds
        const Complex kFresnelInfinity = 0.5 * std::sqrt(std::numbers::pi) * std::polar(1.0, std::numbers::pi / 4.0);

        double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

        // vartheta > 0 branch. Completing the square, s = sqrt(vartheta) (x + nu / (2 vartheta)):
        //   integral = exp(-j nu^2/(4 vartheta)) / sqrt(vartheta) * [F(s1) - F(s0)].
        // For large |s|, F(s) = sgn(s) [F(inf) - exp(j s^2) h(|s|)] and
        // exp(-j nu^2/(4 vartheta)) exp(j s^2) = exp(j (vartheta x^2 + nu x)) is formed from x directly.
        Complex quadratic_phase_integral_positive(double vartheta, double nu, double x0, double x1)
        {
            const double root = std::sqrt(vartheta);
            const double shift = nu / (2.0 * vartheta);

            Complex completed{0.0, 0.0}; // terms that carry exp(-j nu^2 / (4 vartheta))
            Complex direct{0.0, 0.0};    // terms whose phase is formed from x
            double infinity_count = 0.0;

            auto endpoint = [&](double x, double weight) {
                const double s = root * (x + shift);
                if (std::abs(s) <= kFresnelSeriesLimit)
                {
                    completed += weight * fresnel_series(s);
                    return;
                }
                const double sg = sign_of(s);
                infinity_count += weight * sg;
                const double phase = vartheta * x * x + nu * x;
                direct -= weight * sg * std::polar(1.0, phase) * fresnel_tail_envelope(std::abs(s));
            };
            endpoint(x1, 1.0);
            endpoint(x0, -1.0);

            completed += infinity_count * kFresnelInfinity;
            Complex total = direct;
            if (completed != Complex{0.0, 0.0})
            {
                // vartheta shift^2 = nu^2 / (4 vartheta); bounded whenever a completed term is present
                total += std::polar(1.0, -vartheta * shift * shift) * completed;
            }
            return total / root;
        }

    } // namespace

    Complex erfi(Complex z)
    {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::domain_error("erfi: non-finite argument");
        // erfi(-z) = -erfi(z), erfi(conj z) = conj erfi(z)
        if (z.real() < 0.0)
            return -erfi(-z);
        if (z.imag() < 0.0)
            return std::conj(erfi(std::conj(z)));
        return erfi_first_quadrant(z);
    }

    Complex fresnel_exp(double a)
    {
        if (!std::isfinite(a))
            throw std::domain_error("fresnel_exp: non-finite argument");
        if (std::abs(a) <= kFresnelSeriesLimit)
            return fresnel_series(a);
        const double sg = sign_of(a);
        return sg * (kFresnelInfinity - std::polar(1.0, a * a) * fresnel_tail_envelope(std::abs(a)));
    }

    Complex quadratic_phase_integral(double vartheta, double nu, double x0, double x1)
    {
        if (vartheta == 0.0)
            throw std::domain_error("quadratic_phase_integral: vartheta must be non-zero");
        if (x0 > x1)
            throw std::invalid_argument("quadratic_phase_integral: requires x0 <= x1");
        if (x0 == x1)
            return 0.0;
        // The integrand for -vartheta, -nu is the complex conjugate.
        if (vartheta < 0.0)
            return std::conj(quadratic_phase_integral_positive(-vartheta, -nu, x0, x1));
        return quadratic_phase_integral_positive(vartheta, nu, x0, x1);
    }

    Complex linear_phase_integral(double nu, double x0, double x1)
    {
        if (x0 > x1)
            throw std::invalid_argument("linear_phase_integral: requires x0 <= x1");
        const double length = x1 - x0;
        if (nu == 0.0)
            return length;
        // (exp(j nu x1) - exp(j nu x0)) / (j nu) written without cancellation for small nu
        const double half = 0.5 * nu * length;
        return std::polar(1.0, 0.5 * nu * (x0 + x1)) * (2.0 * std::sin(half) / nu);
    }

    Complex phase_integral(double vartheta, double nu, double x0, double x1)
    {
        return vartheta == 0.0 ? linear_phase_integral(nu, x0, x1) : quadratic_phase_integral(vartheta, nu, x0, x1);
    }

} // namespace irs::specfun

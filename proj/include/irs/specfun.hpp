#pragma once

#include <complex>
#include <stdexcept>

namespace irs
{
    using Complex = std::complex<double>;

    // Raised when an iterative kernel (continued fraction, adaptive quadrature) does not
    // reach its tolerance within the iteration budget.
    class NonConvergenceError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    namespace specfun
    {
        // Imaginary error function erfi(z) = -j erf(j z) for complex z.
        // Throws std::overflow_error when |erfi(z)| exceeds the double range.
        Complex erfi(Complex z);

        // F(a) = integral_0^a exp(j s^2) ds for real a. Equivalent to
        // erfi(exp(j pi/4) a) * sqrt(pi)/2 * exp(j pi/4), evaluated along that ray only.
        Complex fresnel_exp(double a);

        // integral_{x0}^{x1} exp(j (vartheta x^2 + nu x)) dx.
        // Throws std::domain_error for vartheta == 0 and std::invalid_argument for x0 > x1.
        Complex quadratic_phase_integral(double vartheta, double nu, double x0, double x1);

        // integral_{x0}^{x1} exp(j nu x) dx, continuous at nu = 0.
        Complex linear_phase_integral(double nu, double x0, double x1);

        // Dispatches to the linear routine when vartheta == 0.
        Complex phase_integral(double vartheta, double nu, double x0, double x1);

    } // namespace specfun
} // namespace irs

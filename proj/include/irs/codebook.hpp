#pragma once

#include "irs/geometry.hpp"

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

namespace irs
{
    enum class Family
    {
        Dft,
        Linear,
        Quadratic
    };

    std::string_view to_string(Family family);
    // Accepts "dft", "linear", "quadratic". Throws std::invalid_argument otherwise.
    Family parse_family(std::string_view name);

    struct ModeIndex
    {
        int m_x = 0;
        int m_y = 0;

        friend bool operator==(const ModeIndex &, const ModeIndex &) = default;
    };

    // Range of normalized phase-shift gradients [beta, beta + delta_beta] swept by one
    // codebook entry along one axis. delta_beta = 0 is a plain linear phase.
    struct GradientInterval
    {
        double beta = 0.0;
        double delta_beta = 0.0;

        friend bool operator==(const GradientInterval &, const GradientInterval &) = default;
    };

    struct TransmissionMode
    {
        Family family = Family::Linear;
        GradientInterval x;
        GradientInterval y;
        ModeIndex index;

        const GradientInterval &axis(Axis a) const { return a == Axis::X ? x : y; }
        int axis_index(Axis a) const { return a == Axis::X ? index.m_x : index.m_y; }

        friend bool operator==(const TransmissionMode &, const TransmissionMode &) = default;
    };

    // Gradient range needed to steer any AoA to any AoD: min(4, lambda / d).
    double beta_bar(double spacing);

    // Phase codebook with a product structure: entry (m_x, m_y) combines the m_x-th x-axis
    // gradient interval with the m_y-th y-axis one. Modes are indexed row-major,
    // flat index = m_x * M_y + m_y.
    class Codebook
    {
    public:
        // Validates every interval against 0 <= beta, beta + delta_beta <= beta_bar, and that
        // delta_beta vanishes exactly for the DFT and linear families.
        Codebook(IrsGeometry geometry, Family family, std::vector<GradientInterval> x_intervals,
                 std::vector<GradientInterval> y_intervals);

        const IrsGeometry &geometry() const { return geometry_; }
        Family family() const { return family_; }
        int m_x_count() const { return static_cast<int>(x_.size()); }
        int m_y_count() const { return static_cast<int>(y_.size()); }
        std::size_t size() const { return x_.size() * y_.size(); }

        const std::vector<GradientInterval> &intervals(Axis a) const { return a == Axis::X ? x_ : y_; }

        TransmissionMode mode(ModeIndex index) const;
        TransmissionMode mode(std::size_t flat_index) const;
        std::size_t flat_index(ModeIndex index) const;
        std::vector<TransmissionMode> modes() const;

        friend bool operator==(const Codebook &, const Codebook &) = default;

    private:
        IrsGeometry geometry_;
        Family family_;
        std::vector<GradientInterval> x_;
        std::vector<GradientInterval> y_;
    };

    // Columns of the 2-D DFT matrix; only defined for half-wavelength spacing.
    Codebook build_dft(const IrsGeometry &geometry);

    // Linear phase with gradients beta_bar m / M per axis.
    Codebook build_linear(const IrsGeometry &geometry, int m_x_count, int m_y_count);

    // Quadratic phase with uniform quantization: beta = m beta_bar / M, delta_beta = beta_bar / M.
    Codebook build_quadratic(const IrsGeometry &geometry, int m_x_count, int m_y_count);

    // Explicit gradient intervals per axis. All-zero widths give a linear codebook, all-positive
    // widths a quadratic one; mixing the two is rejected.
    Codebook build_quadratic_custom(const IrsGeometry &geometry, std::vector<GradientInterval> x_intervals,
                                    std::vector<GradientInterval> y_intervals);

    // Phase of one axis term in turns (units of 2 pi), not reduced.
    double axis_phase_turns(Family family, const AxisGeometry &axis, const GradientInterval &gradient, int mode_index,
                            int cell);

    // Unit-cell phase omega_{n_x, n_y} reduced into [0, 2 pi).
    // Throws std::out_of_range for cell indices outside the grid.
    double phase_at(const TransmissionMode &mode, const IrsGeometry &geometry, int n_x, int n_y);

    // Factor a total codebook size M into (M_x, M_y): the square root for perfect squares,
    // otherwise the factor pair closest to square with M_x >= M_y.
    std::pair<int, int> split_codebook_size(int total);

    // Uniform codebook of the given family with M total modes. For DFT, M must equal Q_x Q_y.
    Codebook build_codebook(const IrsGeometry &geometry, Family family, int total);

} // namespace irs

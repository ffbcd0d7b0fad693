#include "irs/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace irs
{
    namespace
    {
        // Relative slack on beta + delta_beta <= beta_bar for uniformly quantized grids
        constexpr double kBoundSlack = 1e-12;

        void check_intervals(const std::vector<GradientInterval> &intervals, double bound, Family family,
                             const char *axis_name)
        {
            if (intervals.empty())
                throw std::invalid_argument(std::string("Codebook: no gradient intervals on axis ") + axis_name);
            for (const auto &g : intervals)
            {
                if (!std::isfinite(g.beta) || !std::isfinite(g.delta_beta))
                    throw std::invalid_argument("Codebook: non-finite gradient parameter");
                if (g.beta < 0.0)
                    throw std::invalid_argument(std::string("Codebook: negative beta on axis ") + axis_name);
                if (g.delta_beta < 0.0)
                    throw std::invalid_argument(std::string("Codebook: negative delta_beta on axis ") + axis_name);
                if (g.beta + g.delta_beta > bound * (1.0 + kBoundSlack))
                    throw std::invalid_argument(std::string("Codebook: beta + delta_beta = ") +
                                                std::to_string(g.beta + g.delta_beta) + " exceeds beta_bar = " +
                                                std::to_string(bound) + " on axis " + axis_name);
                const bool flat = g.delta_beta == 0.0;
                if (family == Family::Quadratic && flat)
                    throw std::invalid_argument("Codebook: quadratic modes need delta_beta > 0");
                if (family != Family::Quadratic && !flat)
                    throw std::invalid_argument("Codebook: DFT and linear modes need delta_beta == 0");
            }
        }

        void check_dft_spacing(const IrsGeometry &geometry)
        {
            if (std::abs(geometry.d_x() - 0.5) > 1e-12 || std::abs(geometry.d_y() - 0.5) > 1e-12)
                throw std::invalid_argument("build_dft: DFT codebook requires half-wavelength spacing");
        }

        std::vector<GradientInterval> uniform_grid(double bound, int count, bool with_width)
        {
            if (count < 1)
                throw std::invalid_argument("codebook size per axis must be >= 1");
            std::vector<GradientInterval> out(static_cast<std::size_t>(count));
            const double width = bound / count;
            for (int m = 0; m < count; ++m)
                out[static_cast<std::size_t>(m)] = {m * bound / count, with_width ? width : 0.0};
            return out;
        }

        double frac(double turns) { return turns - std::floor(turns); }

    } // namespace

    std::string_view to_string(Family family)
    {
        switch (family)
        {
        case Family::Dft:
            return "dft";
        case Family::Linear:
            return "linear";
        case Family::Quadratic:
            return "quadratic";
        }
        return "unknown";
    }

    Family parse_family(std::string_view name)
    {
        if (name == "dft")
            return Family::Dft;
        if (name == "linear")
            return Family::Linear;
        if (name == "quadratic")
            return Family::Quadratic;
        throw std::invalid_argument("unknown codebook family '" + std::string(name) + "'");
    }

    double beta_bar(double spacing)
    {
        if (!(spacing > 0.0))
            throw std::invalid_argument("beta_bar: spacing must be positive");
        return std::min(4.0, 1.0 / spacing);
    }

    Codebook::Codebook(IrsGeometry geometry, Family family, std::vector<GradientInterval> x_intervals,
                       std::vector<GradientInterval> y_intervals)
        : geometry_(geometry), family_(family), x_(std::move(x_intervals)), y_(std::move(y_intervals))
    {
        check_intervals(x_, beta_bar(geometry_.d_x()), family_, "x");
        check_intervals(y_, beta_bar(geometry_.d_y()), family_, "y");
        if (family_ == Family::Dft)
        {
            check_dft_spacing(geometry_);
            if (m_x_count() != geometry_.q_x() || m_y_count() != geometry_.q_y())
                throw std::invalid_argument("Codebook: DFT codebook must have M_t = Q_t");
            auto check_axis = [](const std::vector<GradientInterval> &ax, const AxisGeometry &g) {
                for (std::size_t m = 0; m < ax.size(); ++m)
                {
                    const double expected = static_cast<double>(m) / (g.count * g.spacing);
                    if (std::abs(ax[m].beta - expected) > 1e-12 * std::max(1.0, expected))
                        throw std::invalid_argument("Codebook: DFT gradients must equal m / (Q d)");
                }
            };
            check_axis(x_, geometry_.axis(Axis::X));
            check_axis(y_, geometry_.axis(Axis::Y));
        }
    }

    TransmissionMode Codebook::mode(ModeIndex index) const
    {
        if (index.m_x < 0 || index.m_x >= m_x_count() || index.m_y < 0 || index.m_y >= m_y_count())
            throw std::out_of_range("Codebook::mode: index out of range");
        return {family_, x_[static_cast<std::size_t>(index.m_x)], y_[static_cast<std::size_t>(index.m_y)], index};
    }

    TransmissionMode Codebook::mode(std::size_t flat) const
    {
        if (flat >= size())
            throw std::out_of_range("Codebook::mode: flat index out of range");
        const auto my = static_cast<std::size_t>(m_y_count());
        return mode(ModeIndex{static_cast<int>(flat / my), static_cast<int>(flat % my)});
    }

    std::size_t Codebook::flat_index(ModeIndex index) const
    {
        return static_cast<std::size_t>(index.m_x) * static_cast<std::size_t>(m_y_count()) +
               static_cast<std::size_t>(index.m_y);
    }

    std::vector<TransmissionMode> Codebook::modes() const
    {
        std::vector<TransmissionMode> out;
        out.reserve(size());
        for (std::size_t i = 0; i < size(); ++i)
            out.push_back(mode(i));
        return out;
    }

    Codebook build_dft(const IrsGeometry &geometry)
    {
        check_dft_spacing(geometry);
        auto axis = [](const AxisGeometry &g) {
            std::vector<GradientInterval> out(static_cast<std::size_t>(g.count));
            for (int m = 0; m < g.count; ++m)
                out[static_cast<std::size_t>(m)] = {m / (g.count * g.spacing), 0.0};
            return out;
        };
        return Codebook(geometry, Family::Dft, axis(geometry.axis(Axis::X)), axis(geometry.axis(Axis::Y)));
    }

    Codebook build_linear(const IrsGeometry &geometry, int m_x_count, int m_y_count)
    {
        return Codebook(geometry, Family::Linear, uniform_grid(beta_bar(geometry.d_x()), m_x_count, false),
                        uniform_grid(beta_bar(geometry.d_y()), m_y_count, false));
    }

    Codebook build_quadratic(const IrsGeometry &geometry, int m_x_count, int m_y_count)
    {
        return Codebook(geometry, Family::Quadratic, uniform_grid(beta_bar(geometry.d_x()), m_x_count, true),
                        uniform_grid(beta_bar(geometry.d_y()), m_y_count, true));
    }

    Codebook build_quadratic_custom(const IrsGeometry &geometry, std::vector<GradientInterval> x_intervals,
                                    std::vector<GradientInterval> y_intervals)
    {
        auto flat = [](const GradientInterval &g) { return g.delta_beta == 0.0; };
        const bool all_flat =
            std::all_of(x_intervals.begin(), x_intervals.end(), flat) && std::all_of(y_intervals.begin(), y_intervals.end(), flat);
        const bool none_flat =
            std::none_of(x_intervals.begin(), x_intervals.end(), flat) && std::none_of(y_intervals.begin(), y_intervals.end(), flat);
        if (!all_flat && !none_flat)
            throw std::invalid_argument("build_quadratic_custom: delta_beta must be zero on all intervals or on none");
        return Codebook(geometry, all_flat ? Family::Linear : Family::Quadratic, std::move(x_intervals),
                        std::move(y_intervals));
    }

    double axis_phase_turns(Family family, const AxisGeometry &axis, const GradientInterval &gradient, int mode_index,
                            int cell)
    {
        if (family == Family::Dft)
        {
            // exact integer reduction of m n / Q
            const long long r = (static_cast<long long>(mode_index) * cell) % axis.count;
            return -static_cast<double>(r) / axis.count;
        }
        const double n = cell;
        return -axis.spacing * (gradient.delta_beta * n * n / (2.0 * axis.count) + gradient.beta * n);
    }

    double phase_at(const TransmissionMode &mode, const IrsGeometry &geometry, int n_x, int n_y)
    {
        if (n_x < 0 || n_x >= geometry.q_x() || n_y < 0 || n_y >= geometry.q_y())
            throw std::out_of_range("phase_at: cell (" + std::to_string(n_x) + ", " + std::to_string(n_y) +
                                    ") outside the grid");
        const double tx = axis_phase_turns(mode.family, geometry.axis(Axis::X), mode.x, mode.index.m_x, n_x);
        const double ty = axis_phase_turns(mode.family, geometry.axis(Axis::Y), mode.y, mode.index.m_y, n_y);
        const double omega = 2.0 * std::numbers::pi * frac(frac(tx) + frac(ty));
        return omega >= 2.0 * std::numbers::pi ? 0.0 : omega;
    }

    std::pair<int, int> split_codebook_size(int total)
    {
        if (total < 1)
            throw std::invalid_argument("split_codebook_size: codebook size must be >= 1");
        int my = static_cast<int>(std::sqrt(static_cast<double>(total)));
        while (my * my > total)
            --my;
        while ((my + 1) * (my + 1) <= total)
            ++my;
        for (; my >= 1; --my)
            if (total % my == 0)
                return {total / my, my};
        return {total, 1};
    }

    Codebook build_codebook(const IrsGeometry &geometry, Family family, int total)
    {
        if (family == Family::Dft)
        {
            if (total != geometry.cell_count())
                throw std::invalid_argument("build_codebook: DFT codebook size must equal Q_x Q_y = " +
                                            std::to_string(geometry.cell_count()));
            return build_dft(geometry);
        }
        const auto [mx, my] = split_codebook_size(total);
        return family == Family::Linear ? build_linear(geometry, mx, my) : build_quadratic(geometry, mx, my);
    }

} // namespace irs

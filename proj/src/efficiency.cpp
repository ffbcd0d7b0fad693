#include "irs/efficiency.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace irs
{
    namespace
    {
        constexpr double kPi = std::numbers::pi;

        struct AxisBest
        {
            double power = 0.0;
            int index = 0;
        };

        AxisBest best_on_axis(const Codebook &codebook, Axis axis, double a, Method method)
        {
            const auto &intervals = codebook.intervals(axis);
            const AxisGeometry &g = codebook.geometry().axis(axis);
            std::vector<double> powers(intervals.size());
            for (std::size_t m = 0; m < intervals.size(); ++m)
                powers[m] = std::norm(
                    axis_response(codebook.family(), g, intervals[m], static_cast<int>(m), a, method));
            const std::size_t best = best_mode_index(powers);
            return {powers[best], static_cast<int>(best)};
        }

        double uniform01(std::mt19937_64 &engine)
        {
            return static_cast<double>(engine() >> 11) * 0x1.0p-53;
        }

    } // namespace

    std::size_t best_mode_index(std::span<const double> powers)
    {
        if (powers.empty())
            throw std::invalid_argument("best_mode_index: empty codebook");
        std::size_t best = 0;
        for (std::size_t i = 1; i < powers.size(); ++i)
            if (powers[i] > powers[best])
                best = i;
        return best;
    }

    GammaResult gamma_at(const Codebook &codebook, const DirectionalCosines &combined, Method method)
    {
        const AxisBest bx = best_on_axis(codebook, Axis::X, combined.a_x, method);
        const AxisBest by = best_on_axis(codebook, Axis::Y, combined.a_y, method);
        const double qx = codebook.geometry().q_x();
        const double qy = codebook.geometry().q_y();
        const double gamma = std::min(1.0, (bx.power / (qx * qx)) * (by.power / (qy * qy)));
        // a zero factor on either axis makes every mode tie at zero
        if (bx.power == 0.0 || by.power == 0.0)
            return {0.0, ModeIndex{0, 0}};
        return {gamma, ModeIndex{bx.index, by.index}};
    }

    GammaResult gamma_exhaustive(const Codebook &codebook, const DirectionalCosines &combined, Method method)
    {
        const auto &geometry = codebook.geometry();
        std::vector<double> powers(codebook.size());
        for (std::size_t i = 0; i < codebook.size(); ++i)
            powers[i] = response(geometry, codebook.mode(i), combined, method).power();
        const std::size_t best = best_mode_index(powers);
        const double g_max = geometry.max_gain();
        return {std::min(1.0, powers[best] / (g_max * g_max)), codebook.mode(best).index};
    }

    EfficiencySample power_efficiency(const Codebook &codebook, const AnglePair &aoa, const AnglePair &aod,
                                      Method method)
    {
        const GammaResult r = gamma_at(codebook, combined_cosines(aoa, aod), method);
        return {aoa, aod, r.gamma, r.best_mode};
    }

    DftBounds dft_gamma_lower_bounds(int q_x, int q_y)
    {
        if (q_x < 1 || q_y < 1)
            throw std::invalid_argument("dft_gamma_lower_bounds: counts must be positive");
        const double root = 1.0 / (q_x * q_y * std::sin(kPi / (2.0 * q_x)) * std::sin(kPi / (2.0 * q_y)));
        return {root * root, 16.0 / (kPi * kPi * kPi * kPi)};
    }

    AxisCoverage coverage_condition(const IrsGeometry &geometry, int m_x_count, int m_y_count)
    {
        auto covered = [](const AxisGeometry &g, int m) {
            const double threshold = g.spacing * beta_bar(g.spacing) * g.count / 2.0;
            return m >= threshold * (1.0 - 1e-12);
        };
        return {covered(geometry.axis(Axis::X), m_x_count), covered(geometry.axis(Axis::Y), m_y_count)};
    }

    std::optional<double> linear_gamma_lower_bound(const IrsGeometry &geometry, int m_x_count, int m_y_count)
    {
        if (m_x_count < 1 || m_y_count < 1)
            throw std::invalid_argument("linear_gamma_lower_bound: codebook sizes must be positive");
        if (!coverage_condition(geometry, m_x_count, m_y_count).both())
            return std::nullopt;
        auto axis = [](const AxisGeometry &g, int m) {
            // half the detuning between adjacent beams
            const double w = kPi * g.spacing * beta_bar(g.spacing) / (2.0 * m);
            return std::sin(g.count * w) / (g.count * std::sin(w));
        };
        const double v = axis(geometry.axis(Axis::X), m_x_count) * axis(geometry.axis(Axis::Y), m_y_count);
        return v * v;
    }

    double ideal_efficiency_bound(int m_x_count, int m_y_count, int q_x, int q_y)
    {
        return std::min(1.0, static_cast<double>(m_x_count) * m_y_count / (static_cast<double>(q_x) * q_y));
    }

    std::string_view to_string(SamplingLaw law)
    {
        return law == SamplingLaw::AngleUniform ? "angle" : "solid-angle";
    }

    SamplingLaw parse_sampling_law(std::string_view name)
    {
        if (name == "angle")
            return SamplingLaw::AngleUniform;
        if (name == "solid-angle" || name == "solid")
            return SamplingLaw::SolidAngleUniform;
        throw std::invalid_argument("unknown sampling law '" + std::string(name) + "'");
    }

    std::vector<AngleSample> sample_angles(std::mt19937_64 &engine, std::size_t count, SamplingLaw law)
    {
        if (count < 1)
            throw std::invalid_argument("sample_angles: count must be >= 1");
        auto draw = [&] {
            const double u = uniform01(engine);
            const double theta = law == SamplingLaw::AngleUniform ? u * (kPi / 2.0) : std::acos(1.0 - u);
            const double phi = uniform01(engine) * (2.0 * kPi);
            return AnglePair(theta, phi);
        };
        std::vector<AngleSample> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i)
        {
            const AnglePair aoa = draw();
            const AnglePair aod = draw();
            out.push_back({aoa, aod});
        }
        return out;
    }

    std::vector<AngleSample> sample_angles(std::uint64_t seed, std::size_t count, SamplingLaw law)
    {
        std::mt19937_64 engine(seed);
        return sample_angles(engine, count, law);
    }

    TradeoffPoint tradeoff_point(const Codebook &codebook, std::span<const AngleSample> samples, std::uint64_t seed,
                                 Method method, const TradeoffOptions &options)
    {
        if (samples.empty())
            throw std::invalid_argument("tradeoff_point: no samples");
        if (!(options.gamma_floor > 0.0))
            throw std::invalid_argument("tradeoff_point: gamma floor must be positive");

        std::vector<double> inverse(samples.size());
        std::vector<unsigned char> clamped(samples.size(), 0);
        detail::parallel_for(samples.size(), options.workers, [&](std::size_t i) {
            const auto c = combined_cosines(samples[i].aoa, samples[i].aod);
            double g = gamma_at(codebook, c, method).gamma;
            if (g < options.gamma_floor)
            {
                g = options.gamma_floor;
                clamped[i] = 1;
            }
            inverse[i] = 1.0 / g;
        });

        TradeoffPoint p;
        p.codebook_size = static_cast<int>(codebook.size());
        p.m_x = codebook.m_x_count();
        p.m_y = codebook.m_y_count();
        p.sample_count = samples.size();
        p.rng_seed = seed;
        p.mean_inverse_gamma = detail::pairwise_sum(inverse) / static_cast<double>(samples.size());
        p.efficiency_metric = 1.0 / p.mean_inverse_gamma;
        p.clamp_count = static_cast<std::size_t>(std::count(clamped.begin(), clamped.end(), 1));
        p.ideal_bound = ideal_efficiency_bound(p.m_x, p.m_y, codebook.geometry().q_x(), codebook.geometry().q_y());

        if (options.validation_subsample > 0)
        {
            const std::size_t k = std::min(options.validation_subsample, samples.size());
            std::vector<double> deviation(k);
            detail::parallel_for(k, options.workers, [&](std::size_t i) {
                const auto c = combined_cosines(samples[i].aoa, samples[i].aod);
                deviation[i] = std::abs(gamma_at(codebook, c, method).gamma -
                                        gamma_exhaustive(codebook, c, Method::Sum).gamma);
            });
            p.validation_max_deviation = *std::max_element(deviation.begin(), deviation.end());
        }
        return p;
    }

    std::vector<TradeoffPoint> tradeoff_curve(Family family, const IrsGeometry &geometry, std::span<const int> m_list,
                                              std::size_t sample_count, std::uint64_t seed, Method method,
                                              const TradeoffOptions &options)
    {
        if (m_list.empty())
            throw std::invalid_argument("tradeoff_curve: empty codebook-size list");
        if (sample_count < 1)
            throw std::invalid_argument("tradeoff_curve: sample_count must be >= 1");
        const auto samples = sample_angles(seed, sample_count, options.law);
        std::vector<TradeoffPoint> out;
        out.reserve(m_list.size());
        for (int total : m_list)
            out.push_back(tradeoff_point(build_codebook(geometry, family, total), samples, seed, method, options));
        return out;
    }

    GridSearchResult gamma_grid_search(const Codebook &codebook, int points_per_axis, Method method, unsigned workers)
    {
        if (points_per_axis < 2)
            throw std::invalid_argument("gamma_grid_search: need at least two points per axis");
        const auto n = static_cast<std::size_t>(points_per_axis);
        auto coord = [&](std::size_t k) { return -2.0 + 4.0 * static_cast<double>(k) / static_cast<double>(n - 1); };

        std::vector<GridSearchResult> rows(n);
        detail::parallel_for(n, workers, [&](std::size_t ix) {
            GridSearchResult r{2.0, {}, -1.0, {}};
            for (std::size_t iy = 0; iy < n; ++iy)
            {
                const DirectionalCosines c{coord(ix), coord(iy)};
                const double g = gamma_at(codebook, c, method).gamma;
                if (g < r.min_gamma)
                    r.min_gamma = g, r.argmin = c;
                if (g > r.max_gamma)
                    r.max_gamma = g, r.argmax = c;
            }
            rows[ix] = r;
        });
        GridSearchResult total = rows.front();
        for (const auto &r : rows)
        {
            if (r.min_gamma < total.min_gamma)
                total.min_gamma = r.min_gamma, total.argmin = r.argmin;
            if (r.max_gamma > total.max_gamma)
                total.max_gamma = r.max_gamma, total.argmax = r.argmax;
        }
        return total;
    }

} // namespace irs

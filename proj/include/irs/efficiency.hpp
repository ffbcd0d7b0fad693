#pragma once

#include "irs/codebook.hpp"
#include "irs/geometry.hpp"
#include "irs/response.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace irs
{
    struct EfficiencySample
    {
        AnglePair aoa;
        AnglePair aod;
        double gamma = 0.0;
        ModeIndex best_mode;
    };

    struct GammaResult
    {
        double gamma = 0.0;
        ModeIndex best_mode;
    };

    // Index of the largest entry; ties go to the lowest index.
    std::size_t best_mode_index(std::span<const double> powers);

    // gamma = max_m |g_m|^2 / (g Q_x Q_y)^2 at the given combined cosines, using the product
    // structure of the codebook (max over a product = product of the per-axis maxima).
    GammaResult gamma_at(const Codebook &codebook, const DirectionalCosines &combined, Method method);

    // Same quantity by evaluating every mode's full response; the reference for gamma_at.
    GammaResult gamma_exhaustive(const Codebook &codebook, const DirectionalCosines &combined, Method method);

    EfficiencySample power_efficiency(const Codebook &codebook, const AnglePair &aoa, const AnglePair &aod,
                                      Method method);

    struct DftBounds
    {
        double tight = 0.0;      // [1 / (Q_x Q_y sin(pi/2Q_x) sin(pi/2Q_y))]^2
        double asymptotic = 0.0; // 16 / pi^4
    };

    DftBounds dft_gamma_lower_bounds(int q_x, int q_y);

    struct AxisCoverage
    {
        bool x = false;
        bool y = false;

        bool both() const { return x && y; }
    };

    // True per axis iff M_t >= d_t beta_bar_t Q_t / (2 lambda): adjacent main lobes then overlap.
    AxisCoverage coverage_condition(const IrsGeometry &geometry, int m_x_count, int m_y_count);

    // Worst-case gamma of the linear codebook; std::nullopt below the coverage threshold.
    std::optional<double> linear_gamma_lower_bound(const IrsGeometry &geometry, int m_x_count, int m_y_count);

    // min(1, M_x M_y / (Q_x Q_y)).
    double ideal_efficiency_bound(int m_x_count, int m_y_count, int q_x, int q_y);

    enum class SamplingLaw
    {
        AngleUniform,     // theta ~ U[0, pi/2], phi ~ U[0, 2 pi)
        SolidAngleUniform // cos(theta) ~ U[0, 1], phi ~ U[0, 2 pi)
    };

    std::string_view to_string(SamplingLaw law);
    SamplingLaw parse_sampling_law(std::string_view name);

    struct AngleSample
    {
        AnglePair aoa;
        AnglePair aod;
    };

    // Draws are taken from the 64-bit Mersenne Twister (whose output sequence is fixed by the
    // standard) and mapped to [0, 1) with 53-bit resolution, so streams are reproducible
    // across standard libraries.
    std::vector<AngleSample> sample_angles(std::mt19937_64 &engine, std::size_t count,
                                           SamplingLaw law = SamplingLaw::AngleUniform);
    std::vector<AngleSample> sample_angles(std::uint64_t seed, std::size_t count,
                                           SamplingLaw law = SamplingLaw::AngleUniform);

    struct TradeoffPoint
    {
        int codebook_size = 0;
        int m_x = 0;
        int m_y = 0;
        double mean_inverse_gamma = 0.0;
        double efficiency_metric = 0.0; // 1 / mean_inverse_gamma
        std::size_t sample_count = 0;
        std::uint64_t rng_seed = 0;
        std::size_t clamp_count = 0; // samples whose gamma was raised to the floor
        double ideal_bound = 0.0;
        // max |gamma_closed - gamma_sum| over the validation subsample; nullopt if not requested
        std::optional<double> validation_max_deviation;
    };

    struct TradeoffOptions
    {
        SamplingLaw law = SamplingLaw::AngleUniform;
        double gamma_floor = 1e-12;
        unsigned workers = 0; // 0: hardware concurrency
        std::size_t validation_subsample = 0;
    };

    // One point per entry of m_list (total codebook sizes, split with split_codebook_size).
    // For the DFT family every entry must equal Q_x Q_y. The same angle samples are reused for
    // all entries; results are bit-identical for any worker count.
    std::vector<TradeoffPoint> tradeoff_curve(Family family, const IrsGeometry &geometry, std::span<const int> m_list,
                                              std::size_t sample_count, std::uint64_t seed, Method method,
                                              const TradeoffOptions &options = {});

    // Statistic for a fixed sample set, exposed so sweeps over several families share samples.
    TradeoffPoint tradeoff_point(const Codebook &codebook, std::span<const AngleSample> samples, std::uint64_t seed,
                                 Method method, const TradeoffOptions &options = {});

    struct GridSearchResult
    {
        double min_gamma = 0.0;
        DirectionalCosines argmin;
        double max_gamma = 0.0;
        DirectionalCosines argmax;
    };

    // gamma over a points_per_axis^2 grid of combined cosines covering [-2, 2]^2.
    GridSearchResult gamma_grid_search(const Codebook &codebook, int points_per_axis, Method method,
                                       unsigned workers = 0);

} // namespace irs

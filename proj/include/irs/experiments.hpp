#pragma once

#include "irs/codebook.hpp"
#include "irs/efficiency.hpp"
#include "irs/geometry.hpp"
#include "irs/response.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace irs
{
    // Raised for malformed or inconsistent configuration and codebook documents.
    class FormatError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Beam cuts use a signed reflection elevation s in degrees:
    // s >= 0 is (theta_r = s, phi_r = 0), s < 0 is (theta_r = -s, phi_r = pi).
    struct BeamCut
    {
        AnglePair aoa;

        static AnglePair aod_from_signed(double signed_deg);
        // Throws std::invalid_argument unless phi is 0 or pi.
        static double signed_from_aod(const AnglePair &aod);
    };

    struct TradeoffSeries
    {
        Family family = Family::Quadratic;
        std::vector<int> m_list;

        friend bool operator==(const TradeoffSeries &, const TradeoffSeries &) = default;
    };

    struct ExperimentConfig
    {
        int q_x = 20;
        int q_y = 20;
        double d_x = 0.5;
        double d_y = 0.5;

        Family family = Family::Dft;
        // Codebook size per axis; zero means Q_t for DFT, otherwise derived from m_total.
        int m_x = 0;
        int m_y = 0;
        int m_total = 0;
        // Explicit gradient intervals; when non-empty they replace the uniform grid.
        std::vector<GradientInterval> custom_x;
        std::vector<GradientInterval> custom_y;

        // beam sweep
        double aoa_theta_deg = 0.0;
        double aoa_phi_deg = 0.0;
        int grid_points = 1201;

        // tradeoff sweep
        std::vector<TradeoffSeries> tradeoff;
        std::size_t sample_count = 100000;
        std::uint64_t seed = 1;
        SamplingLaw sampling = SamplingLaw::AngleUniform;
        double gamma_floor = 1e-12;
        std::size_t validation_subsample = 0;

        Method method = Method::ClosedForm;
        unsigned workers = 0;
        std::string output;

        IrsGeometry geometry() const;
        Codebook codebook() const;
        BeamCut beam_cut() const;

        // Throws FormatError (or the module error) naming the first offending field.
        void check() const;

        friend bool operator==(const ExperimentConfig &, const ExperimentConfig &) = default;
    };

    std::string to_json(const ExperimentConfig &config);
    ExperimentConfig config_from_json(const std::string &text);
    ExperimentConfig load_config(const std::filesystem::path &path);
    void save_config(const ExperimentConfig &config, const std::filesystem::path &path);

    // Directory named by IRS_OUTPUT_DIR, or the working directory.
    std::filesystem::path default_output_dir();
    // Absolute or explicitly relative paths are kept; bare names go under default_output_dir().
    std::filesystem::path resolve_output(const std::string &requested, const std::string &fallback_name);

    constexpr double kDbFloor = -300.0;

    struct BeamTable
    {
        std::vector<double> theta_signed_deg;
        std::vector<ModeIndex> modes;
        std::vector<double> db; // row-major: rows x modes, floored at kDbFloor

        double at(std::size_t row, std::size_t mode) const { return db[row * modes.size() + mode]; }
    };

    BeamTable run_beam_sweep(const ExperimentConfig &config);
    // Header then one row per elevation; columns theta_signed_deg, m_<mx>_<my>_db...
    void write_csv(const BeamTable &table, std::ostream &out);

    struct TradeoffRow
    {
        Family family = Family::Quadratic;
        TradeoffPoint point;

        double efficiency_db() const;
        double ideal_bound_db() const;
    };

    // All series share one angle sample set drawn from the configured seed.
    std::vector<TradeoffRow> run_tradeoff_sweep(const ExperimentConfig &config);
    void write_csv(std::span<const TradeoffRow> rows, std::ostream &out);

    constexpr int kCodebookSchemaVersion = 1;

    std::string codebook_to_json(const Codebook &codebook);
    Codebook codebook_from_json(const std::string &text);
    void export_codebook(const Codebook &codebook, const std::filesystem::path &path);
    Codebook import_codebook(const std::filesystem::path &path);

    struct ValidationCheck
    {
        std::string name;
        double max_deviation = 0.0;
        double tolerance = 0.0;
        std::size_t evaluations = 0;

        // Vacuous checks (no evaluations) pass.
        bool passed() const { return max_deviation <= tolerance; }
    };

    struct ValidationReport
    {
        std::vector<ValidationCheck> checks;
        std::vector<std::string> notes;

        bool passed() const;
        void print(std::ostream &out) const;
    };

    struct ValidationOptions
    {
        std::optional<PhaseCorruption> corruption; // applied to the direct sums only
        std::size_t angle_draws = 4;               // random angle pairs per mode
        std::uint64_t seed = 7;
    };

    // Check names, one per identity.
    inline constexpr const char *kCheckLinearClosed = "linear closed form vs direct sum";
    inline constexpr const char *kCheckQuadraticOracle = "quadratic closed form vs quadrature";
    inline constexpr const char *kCheckQuadraticErfi = "quadratic closed form vs erfi form";
    inline constexpr const char *kCheckQuadraticReduction = "zero-width quadratic vs linear phases";

    ValidationReport validate_modes(const IrsGeometry &geometry, std::span<const TransmissionMode> modes,
                                    const ValidationOptions &options = {});

    // Runs the identities on the configured geometry for every family it supports, at the
    // configured codebook size.
    ValidationReport validate(const ExperimentConfig &config, const ValidationOptions &options = {});

} // namespace irs

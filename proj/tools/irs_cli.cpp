#include "irs/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace
{
    using namespace irs;

    struct CommonFlags
    {
        std::string config_path;
        std::string save_config;
        std::string out;
        int q_x = 0, q_y = 0;
        double d_x = 0.0, d_y = 0.0;
        std::string family;
        int m_total = 0, m_x = 0, m_y = 0;
        double beta = 0.0, delta_beta = 0.0;
        std::string method;
        unsigned workers = 0;

        CLI::Option *o_qx, *o_qy, *o_dx, *o_dy, *o_family, *o_m, *o_mx, *o_my, *o_beta, *o_dbeta, *o_method,
            *o_workers;
    };

    void add_common(CLI::App &app, CommonFlags &f)
    {
        app.add_option("--config", f.config_path, "JSON config file; explicit flags override its fields");
        app.add_option("--save-config", f.save_config, "write the effective config to this file");
        app.add_option("-o,--out", f.out, "output file, '-' for stdout (bare names go under $IRS_OUTPUT_DIR)");
        f.o_qx = app.add_option("--qx", f.q_x, "unit cells along x")->check(CLI::PositiveNumber);
        f.o_qy = app.add_option("--qy", f.q_y, "unit cells along y")->check(CLI::PositiveNumber);
        f.o_dx = app.add_option("--dx", f.d_x, "cell spacing along x in wavelengths")->check(CLI::PositiveNumber);
        f.o_dy = app.add_option("--dy", f.d_y, "cell spacing along y in wavelengths")->check(CLI::PositiveNumber);
        f.o_family = app.add_option("--family", f.family, "dft, linear or quadratic");
        f.o_m = app.add_option("-M,--size", f.m_total, "total codebook size (split into M_x x M_y)");
        f.o_mx = app.add_option("--mx", f.m_x, "modes along x");
        f.o_my = app.add_option("--my", f.m_y, "modes along y");
        f.o_beta = app.add_option("--beta", f.beta, "single-mode gradient start on both axes");
        f.o_dbeta = app.add_option("--delta-beta", f.delta_beta, "single-mode gradient width on both axes");
        f.o_method = app.add_option("--method", f.method, "sum, closed or oracle");
        f.o_workers = app.add_option("--workers", f.workers, "worker threads (0: all cores)");
    }

    ExperimentConfig effective_config(const CommonFlags &f)
    {
        ExperimentConfig c = f.config_path.empty() ? ExperimentConfig{} : load_config(f.config_path);
        if (*f.o_qx)
            c.q_x = f.q_x;
        if (*f.o_qy)
            c.q_y = f.q_y;
        if (*f.o_dx)
            c.d_x = f.d_x;
        if (*f.o_dy)
            c.d_y = f.d_y;
        if (*f.o_family)
            c.family = parse_family(f.family);
        if (*f.o_m)
            c.m_total = f.m_total, c.m_x = 0, c.m_y = 0;
        if (*f.o_mx)
            c.m_x = f.m_x;
        if (*f.o_my)
            c.m_y = f.m_y;
        if (*f.o_beta || *f.o_dbeta)
        {
            const GradientInterval g{f.beta, f.delta_beta};
            c.custom_x = {g};
            c.custom_y = {g};
        }
        if (*f.o_method)
            c.method = parse_method(f.method);
        if (*f.o_workers)
            c.workers = f.workers;
        if (!f.out.empty())
            c.output = f.out;
        return c;
    }

    void finish(const CommonFlags &f, const ExperimentConfig &c)
    {
        if (!f.save_config.empty())
            save_config(c, f.save_config);
    }

    template <class Writer>
    void emit(const std::string &requested, const char *fallback, Writer write)
    {
        if (requested == "-")
        {
            write(std::cout);
            return;
        }
        const auto path = resolve_output(requested, fallback);
        if (path.has_parent_path())
            std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open '" + path.string() + "' for writing");
        write(out);
        if (!out)
            throw std::runtime_error("write to '" + path.string() + "' failed");
        std::cerr << "wrote " << path.string() << '\n';
    }

    std::vector<TradeoffSeries> parse_series(const std::vector<std::string> &items)
    {
        std::vector<TradeoffSeries> out;
        for (const auto &item_text : items)
        {
            const auto colon = item_text.find(':');
            if (colon == std::string::npos)
                throw std::invalid_argument("series '" + item_text + "' must look like family:M1,M2,...");
            TradeoffSeries s{parse_family(item_text.substr(0, colon)), {}};
            std::stringstream list(item_text.substr(colon + 1));
            std::string item;
            while (std::getline(list, item, ','))
                s.m_list.push_back(std::stoi(item));
            out.push_back(std::move(s));
        }
        return out;
    }

    std::vector<TradeoffSeries> default_series(const ExperimentConfig &c)
    {
        std::vector<TradeoffSeries> out;
        if (c.d_x == 0.5 && c.d_y == 0.5)
            out.push_back({Family::Dft, {c.q_x * c.q_y}});
        out.push_back({Family::Linear, {25, 64, 100, 400}});
        out.push_back({Family::Quadratic, {25, 64, 100, 400}});
        return out;
    }

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"IRS phase-shift codebooks: construction, response patterns and efficiency tradeoffs"};
    app.require_subcommand(1);

    CommonFlags fc, fb, ft, fv;

    auto *codebook_cmd = app.add_subcommand("codebook", "build a codebook and write it as JSON");
    add_common(*codebook_cmd, fc);

    auto *beam_cmd = app.add_subcommand("beam", "beam-pattern cut |g_m|^2 in dB vs signed reflection elevation");
    add_common(*beam_cmd, fb);
    double aoa_theta = 0.0, aoa_phi = 0.0;
    int grid = 0;
    auto *o_theta = beam_cmd->add_option("--aoa-theta", aoa_theta, "incident elevation in degrees");
    auto *o_phi = beam_cmd->add_option("--aoa-phi", aoa_phi, "incident azimuth in degrees");
    auto *o_grid = beam_cmd->add_option("--grid", grid, "elevation grid points over [-90, 90]");

    auto *tradeoff_cmd = app.add_subcommand("tradeoff", "Monte-Carlo efficiency vs codebook size");
    add_common(*tradeoff_cmd, ft);
    std::vector<std::string> series;
    std::size_t samples = 0, subsample = 0;
    std::uint64_t seed = 0;
    std::string sampling;
    double floor = 0.0;
    tradeoff_cmd->add_option("--series", series, "family:M1,M2,... (repeatable)");
    auto *o_samples = tradeoff_cmd->add_option("-N,--samples", samples, "angle samples");
    auto *o_seed = tradeoff_cmd->add_option("--seed", seed, "RNG seed");
    auto *o_sampling = tradeoff_cmd->add_option("--sampling", sampling, "angle or solid-angle");
    auto *o_floor = tradeoff_cmd->add_option("--gamma-floor", floor, "lower clamp on gamma before inversion");
    auto *o_sub = tradeoff_cmd->add_option("--validate-subsample", subsample,
                                           "recheck this many samples with direct summation");

    auto *validate_cmd = app.add_subcommand("validate", "run the cross-method identity checks");
    add_common(*validate_cmd, fv);
    ValidationOptions vopt;
    std::vector<double> corrupt;
    validate_cmd->add_option("--draws", vopt.angle_draws, "random angle pairs per mode");
    validate_cmd->add_option("--corrupt", corrupt, "inject a phase error: n_x n_y radians")->expected(3);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*codebook_cmd)
        {
            const ExperimentConfig c = effective_config(fc);
            c.check();
            const Codebook cb = c.codebook();
            emit(c.output, "codebook.json", [&](std::ostream &o) { o << codebook_to_json(cb); });
            finish(fc, c);
        }
        else if (*beam_cmd)
        {
            ExperimentConfig c = effective_config(fb);
            if (*o_theta)
                c.aoa_theta_deg = aoa_theta;
            if (*o_phi)
                c.aoa_phi_deg = aoa_phi;
            if (*o_grid)
                c.grid_points = grid;
            const BeamTable table = run_beam_sweep(c);
            emit(c.output, "beam.csv", [&](std::ostream &o) { write_csv(table, o); });
            finish(fb, c);
        }
        else if (*tradeoff_cmd)
        {
            ExperimentConfig c = effective_config(ft);
            if (!series.empty())
                c.tradeoff = parse_series(series);
            else if (c.tradeoff.empty())
                c.tradeoff = default_series(c);
            if (*o_samples)
                c.sample_count = samples;
            if (*o_seed)
                c.seed = seed;
            if (*o_sampling)
                c.sampling = parse_sampling_law(sampling);
            if (*o_floor)
                c.gamma_floor = floor;
            if (*o_sub)
                c.validation_subsample = subsample;
            const auto rows = run_tradeoff_sweep(c);
            emit(c.output, "tradeoff.csv", [&](std::ostream &o) { write_csv(rows, o); });
            finish(ft, c);
        }
        else if (*validate_cmd)
        {
            const ExperimentConfig c = effective_config(fv);
            if (!corrupt.empty())
                vopt.corruption =
                    PhaseCorruption{static_cast<int>(corrupt[0]), static_cast<int>(corrupt[1]), corrupt[2]};
            const ValidationReport report = validate(c, vopt);
            report.print(std::cout);
            finish(fv, c);
            return report.passed() ? 0 : 1;
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

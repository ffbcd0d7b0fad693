#include "irs/experiments.hpp"

#include "parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

namespace irs
{
    namespace
    {
        using json = nlohmann::json;

        constexpr double kPi = std::numbers::pi;

        std::string format_fixed6(double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.6f", v);
            return buf;
        }

        std::string format_exact(double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        double floored_db(double db) { return std::isnan(db) || db < kDbFloor ? kDbFloor : db; }

        std::string read_file(const std::filesystem::path &path)
        {
            std::ifstream in(path, std::ios::binary);
            if (!in)
                throw std::runtime_error("cannot open '" + path.string() + "' for reading");
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
        }

        void write_file(const std::filesystem::path &path, const std::string &text)
        {
            if (path.has_parent_path())
                std::filesystem::create_directories(path.parent_path());
            std::ofstream out(path, std::ios::binary);
            if (!out)
                throw std::runtime_error("cannot open '" + path.string() + "' for writing");
            out << text;
            if (!out)
                throw std::runtime_error("write to '" + path.string() + "' failed");
        }

        void reject_unknown_keys(const json &j, const std::set<std::string> &allowed, const char *where)
        {
            if (!j.is_object())
                throw FormatError(std::string(where) + ": expected an object");
            for (const auto &item : j.items())
                if (!allowed.contains(item.key()))
                    throw FormatError(std::string(where) + ": unknown field '" + item.key() + "'");
        }

        template <class T>
        void read_field(const json &j, const char *key, T &target)
        {
            if (auto it = j.find(key); it != j.end())
            {
                try
                {
                    target = it->get<T>();
                }
                catch (const json::exception &e)
                {
                    throw FormatError(std::string("field '") + key + "': " + e.what());
                }
            }
        }

        template <class T>
        T required_field(const json &j, const char *key)
        {
            auto it = j.find(key);
            if (it == j.end())
                throw FormatError(std::string("missing field '") + key + "'");
            try
            {
                return it->get<T>();
            }
            catch (const json::exception &e)
            {
                throw FormatError(std::string("field '") + key + "': " + e.what());
            }
        }

        json intervals_to_json(const std::vector<GradientInterval> &intervals)
        {
            json a = json::array();
            for (const auto &g : intervals)
                a.push_back({{"beta", g.beta}, {"delta_beta", g.delta_beta}});
            return a;
        }

        std::vector<GradientInterval> intervals_from_json(const json &j, const char *key)
        {
            std::vector<GradientInterval> out;
            auto it = j.find(key);
            if (it == j.end())
                return out;
            if (!it->is_array())
                throw FormatError(std::string("field '") + key + "': expected an array");
            for (const auto &e : *it)
            {
                reject_unknown_keys(e, {"beta", "delta_beta"}, key);
                out.push_back({required_field<double>(e, "beta"), required_field<double>(e, "delta_beta")});
            }
            return out;
        }

        template <class Fn>
        auto parse_enum(const json &j, const char *key, Fn parse) -> decltype(parse(std::string_view{}))
        {
            const auto name = required_field<std::string>(j, key);
            try
            {
                return parse(name);
            }
            catch (const std::invalid_argument &e)
            {
                throw FormatError(std::string("field '") + key + "': " + e.what());
            }
        }

        std::pair<int, int> resolved_sizes(const ExperimentConfig &c)
        {
            if (c.m_x > 0 && c.m_y > 0)
                return {c.m_x, c.m_y};
            if (c.m_total > 0)
                return split_codebook_size(c.m_total);
            if (c.family == Family::Dft)
                return {c.q_x, c.q_y};
            throw FormatError("codebook size missing: set m_x and m_y, or m_total");
        }

        double wrapped_phase_difference(double a, double b)
        {
            const double d = std::remainder(a - b, 2.0 * kPi);
            return std::abs(d);
        }

    } // namespace

    AnglePair BeamCut::aod_from_signed(double signed_deg)
    {
        if (!(signed_deg >= -90.0 && signed_deg <= 90.0))
            throw std::invalid_argument("signed elevation must lie in [-90, 90] degrees");
        return AnglePair::from_degrees(std::abs(signed_deg), signed_deg >= 0.0 ? 0.0 : 180.0);
    }

    double BeamCut::signed_from_aod(const AnglePair &aod)
    {
        const double deg = rad_to_deg(aod.theta());
        if (aod.phi() == 0.0)
            return deg;
        if (std::abs(aod.phi() - kPi) <= 1e-12)
            return deg == 0.0 ? 0.0 : -deg;
        throw std::invalid_argument("AoD is not on the phi in {0, pi} cut");
    }

    IrsGeometry ExperimentConfig::geometry() const { return IrsGeometry(q_x, q_y, d_x, d_y); }

    Codebook ExperimentConfig::codebook() const
    {
        const IrsGeometry g = geometry();
        if (!custom_x.empty() || !custom_y.empty())
        {
            if (custom_x.empty() || custom_y.empty())
                throw FormatError("custom gradient intervals must be given for both axes");
            return build_quadratic_custom(g, custom_x, custom_y);
        }
        const auto [mx, my] = resolved_sizes(*this);
        switch (family)
        {
        case Family::Dft:
            if (mx != q_x || my != q_y)
                throw FormatError("DFT codebook size is fixed at Q_x x Q_y");
            return build_dft(g);
        case Family::Linear:
            return build_linear(g, mx, my);
        case Family::Quadratic:
            return build_quadratic(g, mx, my);
        }
        throw std::logic_error("unreachable");
    }

    BeamCut ExperimentConfig::beam_cut() const
    {
        if (!(aoa_theta_deg >= 0.0 && aoa_theta_deg <= 90.0))
            throw FormatError("aoa_theta_deg must lie in [0, 90]");
        if (!(aoa_phi_deg >= 0.0 && aoa_phi_deg < 360.0))
            throw FormatError("aoa_phi_deg must lie in [0, 360)");
        return {AnglePair::from_degrees(aoa_theta_deg, aoa_phi_deg)};
    }

    void ExperimentConfig::check() const
    {
        const IrsGeometry g = geometry();
        beam_cut();
        if (grid_points < 2)
            throw FormatError("grid_points must be >= 2");
        if (sample_count < 1)
            throw FormatError("sample_count must be >= 1");
        if (!(gamma_floor > 0.0 && gamma_floor < 1.0))
            throw FormatError("gamma_floor must lie in (0, 1)");
        if (m_x < 0 || m_y < 0 || m_total < 0)
            throw FormatError("codebook sizes must be non-negative");
        for (const auto &series : tradeoff)
        {
            if (series.m_list.empty())
                throw FormatError("tradeoff series '" + std::string(to_string(series.family)) + "' has no sizes");
            for (int m : series.m_list)
                build_codebook(g, series.family, m);
        }
    }

    std::string to_json(const ExperimentConfig &c)
    {
        json series = json::array();
        for (const auto &s : c.tradeoff)
            series.push_back({{"family", to_string(s.family)}, {"m_list", s.m_list}});
        const json j = {
            {"q_x", c.q_x},
            {"q_y", c.q_y},
            {"d_x", c.d_x},
            {"d_y", c.d_y},
            {"family", to_string(c.family)},
            {"m_x", c.m_x},
            {"m_y", c.m_y},
            {"m_total", c.m_total},
            {"custom_x", intervals_to_json(c.custom_x)},
            {"custom_y", intervals_to_json(c.custom_y)},
            {"aoa_theta_deg", c.aoa_theta_deg},
            {"aoa_phi_deg", c.aoa_phi_deg},
            {"grid_points", c.grid_points},
            {"tradeoff", series},
            {"sample_count", c.sample_count},
            {"seed", c.seed},
            {"sampling", to_string(c.sampling)},
            {"gamma_floor", c.gamma_floor},
            {"validation_subsample", c.validation_subsample},
            {"method", to_string(c.method)},
            {"workers", c.workers},
            {"output", c.output},
        };
        return j.dump(2) + "\n";
    }

    ExperimentConfig config_from_json(const std::string &text)
    {
        json j;
        try
        {
            j = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            throw FormatError(std::string("config is not valid JSON: ") + e.what());
        }
        reject_unknown_keys(j,
                            {"q_x", "q_y", "d_x", "d_y", "family", "m_x", "m_y", "m_total", "custom_x", "custom_y",
                             "aoa_theta_deg", "aoa_phi_deg", "grid_points", "tradeoff", "sample_count", "seed",
                             "sampling", "gamma_floor", "validation_subsample", "method", "workers", "output"},
                            "config");
        ExperimentConfig c;
        read_field(j, "q_x", c.q_x);
        read_field(j, "q_y", c.q_y);
        read_field(j, "d_x", c.d_x);
        read_field(j, "d_y", c.d_y);
        if (j.contains("family"))
            c.family = parse_enum(j, "family", parse_family);
        read_field(j, "m_x", c.m_x);
        read_field(j, "m_y", c.m_y);
        read_field(j, "m_total", c.m_total);
        c.custom_x = intervals_from_json(j, "custom_x");
        c.custom_y = intervals_from_json(j, "custom_y");
        read_field(j, "aoa_theta_deg", c.aoa_theta_deg);
        read_field(j, "aoa_phi_deg", c.aoa_phi_deg);
        read_field(j, "grid_points", c.grid_points);
        if (auto it = j.find("tradeoff"); it != j.end())
        {
            if (!it->is_array())
                throw FormatError("field 'tradeoff': expected an array");
            for (const auto &s : *it)
            {
                reject_unknown_keys(s, {"family", "m_list"}, "tradeoff");
                c.tradeoff.push_back(
                    {parse_enum(s, "family", parse_family), required_field<std::vector<int>>(s, "m_list")});
            }
        }
        read_field(j, "sample_count", c.sample_count);
        read_field(j, "seed", c.seed);
        if (j.contains("sampling"))
            c.sampling = parse_enum(j, "sampling", parse_sampling_law);
        read_field(j, "gamma_floor", c.gamma_floor);
        read_field(j, "validation_subsample", c.validation_subsample);
        if (j.contains("method"))
            c.method = parse_enum(j, "method", parse_method);
        read_field(j, "workers", c.workers);
        read_field(j, "output", c.output);
        return c;
    }

    ExperimentConfig load_config(const std::filesystem::path &path) { return config_from_json(read_file(path)); }

    void save_config(const ExperimentConfig &config, const std::filesystem::path &path)
    {
        write_file(path, to_json(config));
    }

    std::filesystem::path default_output_dir()
    {
        if (const char *dir = std::getenv("IRS_OUTPUT_DIR"); dir != nullptr && *dir != '\0')
            return dir;
        return std::filesystem::current_path();
    }

    std::filesystem::path resolve_output(const std::string &requested, const std::string &fallback_name)
    {
        if (requested.empty())
            return default_output_dir() / fallback_name;
        const std::filesystem::path p(requested);
        if (p.is_absolute() || p.has_parent_path())
            return p;
        return default_output_dir() / p;
    }

    BeamTable run_beam_sweep(const ExperimentConfig &config)
    {
        config.check();
        const Codebook codebook = config.codebook();
        const IrsGeometry &g = codebook.geometry();
        const AnglePair aoa = config.beam_cut().aoa;
        const auto modes = codebook.modes();
        if (config.method == Method::Oracle && codebook.family() != Family::Quadratic)
            throw FormatError("the quadrature method applies to quadratic codebooks only");

        BeamTable table;
        const auto rows = static_cast<std::size_t>(config.grid_points);
        table.theta_signed_deg.resize(rows);
        for (std::size_t k = 0; k < rows; ++k)
            table.theta_signed_deg[k] =
                k + 1 == rows ? 90.0 : -90.0 + 180.0 * static_cast<double>(k) / static_cast<double>(rows - 1);
        table.modes.reserve(modes.size());
        for (const auto &m : modes)
            table.modes.push_back(m.index);
        table.db.resize(rows * modes.size());

        detail::parallel_for(rows, config.workers, [&](std::size_t k) {
            const AnglePair aod = BeamCut::aod_from_signed(table.theta_signed_deg[k]);
            const DirectionalCosines c = combined_cosines(aoa, aod);
            for (std::size_t m = 0; m < modes.size(); ++m)
                table.db[k * modes.size() + m] = floored_db(response(g, modes[m], c, config.method).magnitude_db());
        });
        return table;
    }

    void write_csv(const BeamTable &table, std::ostream &out)
    {
        std::string line = "theta_signed_deg";
        for (const auto &m : table.modes)
            line += ",m_" + std::to_string(m.m_x) + "_" + std::to_string(m.m_y) + "_db";
        out << line << '\n';
        for (std::size_t k = 0; k < table.theta_signed_deg.size(); ++k)
        {
            line = format_fixed6(table.theta_signed_deg[k]);
            for (std::size_t m = 0; m < table.modes.size(); ++m)
                line += "," + format_fixed6(table.at(k, m));
            out << line << '\n';
        }
    }

    double TradeoffRow::efficiency_db() const { return 10.0 * std::log10(point.efficiency_metric); }
    double TradeoffRow::ideal_bound_db() const { return 10.0 * std::log10(point.ideal_bound); }

    std::vector<TradeoffRow> run_tradeoff_sweep(const ExperimentConfig &config)
    {
        config.check();
        if (config.tradeoff.empty())
            throw FormatError("no tradeoff series configured");
        const IrsGeometry g = config.geometry();
        const auto samples = sample_angles(config.seed, config.sample_count, config.sampling);
        TradeoffOptions options;
        options.law = config.sampling;
        options.gamma_floor = config.gamma_floor;
        options.workers = config.workers;
        options.validation_subsample = config.validation_subsample;

        std::vector<TradeoffRow> rows;
        for (const auto &series : config.tradeoff)
        {
            const Method method =
                config.method == Method::Oracle && series.family != Family::Quadratic ? Method::ClosedForm
                                                                                       : config.method;
            for (int m : series.m_list)
                rows.push_back({series.family,
                                tradeoff_point(build_codebook(g, series.family, m), samples, config.seed, method,
                                               options)});
        }
        return rows;
    }

    void write_csv(std::span<const TradeoffRow> rows, std::ostream &out)
    {
        out << "family,M,m_x,m_y,efficiency_metric_db,mean_inverse_gamma,clamp_count,ideal_bound_db,samples,seed,"
               "validation_max_deviation\n";
        for (const auto &r : rows)
        {
            const auto &p = r.point;
            out << to_string(r.family) << ',' << p.codebook_size << ',' << p.m_x << ',' << p.m_y << ','
                << format_fixed6(r.efficiency_db()) << ',' << format_exact(p.mean_inverse_gamma) << ','
                << p.clamp_count << ',' << format_fixed6(r.ideal_bound_db()) << ',' << p.sample_count << ','
                << p.rng_seed << ',';
            if (p.validation_max_deviation)
                out << format_exact(*p.validation_max_deviation);
            out << '\n';
        }
    }

    std::string codebook_to_json(const Codebook &codebook)
    {
        const IrsGeometry &g = codebook.geometry();
        json modes = json::array();
        for (const auto &m : codebook.modes())
            modes.push_back({{"m_x", m.index.m_x},
                             {"m_y", m.index.m_y},
                             {"beta_x", m.x.beta},
                             {"beta_y", m.y.beta},
                             {"delta_beta_x", m.x.delta_beta},
                             {"delta_beta_y", m.y.delta_beta}});
        const json j = {{"schema_version", kCodebookSchemaVersion},
                        {"family", to_string(codebook.family())},
                        {"q_x", g.q_x()},
                        {"q_y", g.q_y()},
                        {"d_x", g.d_x()},
                        {"d_y", g.d_y()},
                        {"m_x", codebook.m_x_count()},
                        {"m_y", codebook.m_y_count()},
                        {"modes", modes}};
        return j.dump(2) + "\n";
    }

    Codebook codebook_from_json(const std::string &text)
    {
        json j;
        try
        {
            j = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            throw FormatError(std::string("codebook file is not valid JSON: ") + e.what());
        }
        reject_unknown_keys(j, {"schema_version", "family", "q_x", "q_y", "d_x", "d_y", "m_x", "m_y", "modes"},
                            "codebook");
        const int version = required_field<int>(j, "schema_version");
        if (version != kCodebookSchemaVersion)
            throw FormatError("unsupported codebook schema_version " + std::to_string(version) + " (expected " +
                              std::to_string(kCodebookSchemaVersion) + ")");
        const Family family = parse_enum(j, "family", parse_family);
        const int mx = required_field<int>(j, "m_x");
        const int my = required_field<int>(j, "m_y");
        if (mx < 1 || my < 1)
            throw FormatError("m_x and m_y must be positive");
        const auto modes_it = j.find("modes");
        if (modes_it == j.end())
            throw FormatError("missing field 'modes'");
        const json &modes = *modes_it;
        if (!modes.is_array() || modes.size() != static_cast<std::size_t>(mx) * static_cast<std::size_t>(my))
            throw FormatError("'modes' must list exactly m_x * m_y entries");

        std::vector<GradientInterval> xs(static_cast<std::size_t>(mx));
        std::vector<GradientInterval> ys(static_cast<std::size_t>(my));
        for (std::size_t i = 0; i < modes.size(); ++i)
        {
            const json &e = modes[i];
            reject_unknown_keys(e, {"m_x", "m_y", "beta_x", "beta_y", "delta_beta_x", "delta_beta_y"}, "mode");
            const int ix = required_field<int>(e, "m_x");
            const int iy = required_field<int>(e, "m_y");
            if (static_cast<std::size_t>(ix) * static_cast<std::size_t>(my) + static_cast<std::size_t>(iy) != i ||
                ix < 0 || iy < 0 || ix >= mx || iy >= my)
                throw FormatError("mode " + std::to_string(i) + " is out of row-major order");
            const GradientInterval gx{required_field<double>(e, "beta_x"), required_field<double>(e, "delta_beta_x")};
            const GradientInterval gy{required_field<double>(e, "beta_y"), required_field<double>(e, "delta_beta_y")};
            if (iy == 0)
                xs[static_cast<std::size_t>(ix)] = gx;
            else if (!(xs[static_cast<std::size_t>(ix)] == gx))
                throw FormatError("mode " + std::to_string(i) + ": x gradient differs within row m_x = " +
                                  std::to_string(ix));
            if (ix == 0)
                ys[static_cast<std::size_t>(iy)] = gy;
            else if (!(ys[static_cast<std::size_t>(iy)] == gy))
                throw FormatError("mode " + std::to_string(i) + ": y gradient differs within column m_y = " +
                                  std::to_string(iy));
        }
        try
        {
            const IrsGeometry g(required_field<int>(j, "q_x"), required_field<int>(j, "q_y"),
                                required_field<double>(j, "d_x"), required_field<double>(j, "d_y"));
            return Codebook(g, family, std::move(xs), std::move(ys));
        }
        catch (const std::invalid_argument &e)
        {
            throw FormatError(std::string("invariant violation: ") + e.what());
        }
    }

    void export_codebook(const Codebook &codebook, const std::filesystem::path &path)
    {
        write_file(path, codebook_to_json(codebook));
    }

    Codebook import_codebook(const std::filesystem::path &path) { return codebook_from_json(read_file(path)); }

    bool ValidationReport::passed() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck &c) { return c.passed(); });
    }

    void ValidationReport::print(std::ostream &out) const
    {
        char buf[256];
        for (const auto &c : checks)
        {
            std::snprintf(buf, sizeof buf, "%s  %-40s max_dev=%.3e  tol=%.1e  n=%zu\n", c.passed() ? "PASS" : "FAIL",
                          c.name.c_str(), c.max_deviation, c.tolerance, c.evaluations);
            out << buf;
        }
        for (const auto &n : notes)
            out << "note: " << n << '\n';
        out << (passed() ? "all checks passed" : "validation FAILED") << '\n';
    }

    ValidationReport validate_modes(const IrsGeometry &geometry, std::span<const TransmissionMode> modes,
                                    const ValidationOptions &options)
    {
        ValidationCheck linear_check{kCheckLinearClosed, 0.0, 1e-10, 0};
        ValidationCheck oracle{kCheckQuadraticOracle, 0.0, 1e-8, 0};
        ValidationCheck erfi_form{kCheckQuadraticErfi, 0.0, 1e-9, 0};
        ValidationReport report;
        if (modes.empty())
            report.notes.emplace_back("no modes to check; identities hold vacuously");

        std::mt19937_64 engine(options.seed);
        const double g_max = geometry.max_gain();
        const double g_cont = IrsGeometry::continuous_cell_factor() * geometry.aperture_x() * geometry.aperture_y();
        for (const auto &mode : modes)
        {
            const auto draws = sample_angles(engine, std::max<std::size_t>(options.angle_draws, 1));
            for (const auto &s : draws)
            {
                const DirectionalCosines c = combined_cosines(s.aoa, s.aod);
                if (mode.family == Family::Quadratic)
                {
                    const Complex closed = response_quadratic_closed(geometry, mode, c).value;
                    const Complex quad = response_integral_oracle(geometry, mode, c).value;
                    const Complex literal = response_quadratic_closed_erfi(geometry, mode, c).value;
                    oracle.max_deviation =
                        std::max(oracle.max_deviation, std::abs(closed - quad) / std::max(std::abs(quad), 1e-6 * g_cont));
                    erfi_form.max_deviation = std::max(erfi_form.max_deviation, std::abs(closed - literal) / g_cont);
                    ++oracle.evaluations;
                    ++erfi_form.evaluations;
                }
                else
                {
                    const Complex closed = response_linear_closed(geometry, mode, c).value;
                    const Complex direct = response_sum(geometry, mode, c, options.corruption).value;
                    linear_check.max_deviation = std::max(linear_check.max_deviation,
                                                   std::abs(closed - direct) / std::max(std::abs(direct), 1e-6 * g_max));
                    ++linear_check.evaluations;
                }
            }
        }
        report.checks = {linear_check, oracle, erfi_form};
        return report;
    }

    ValidationReport validate(const ExperimentConfig &config, const ValidationOptions &options)
    {
        const IrsGeometry g = config.geometry();
        const auto [mx, my] = resolved_sizes(config);

        std::vector<TransmissionMode> modes;
        auto append = [&](const Codebook &cb) {
            const auto m = cb.modes();
            modes.insert(modes.end(), m.begin(), m.end());
        };
        ValidationReport notes_only;
        if (std::abs(g.d_x() - 0.5) <= 1e-12 && std::abs(g.d_y() - 0.5) <= 1e-12)
            append(build_dft(g));
        else
            notes_only.notes.emplace_back("DFT codebook skipped: spacing is not half a wavelength");
        const Codebook linear = build_linear(g, mx, my);
        append(linear);
        append(build_quadratic(g, mx, my));
        if (!config.custom_x.empty() && !config.custom_y.empty())
            append(config.codebook());

        ValidationReport report = validate_modes(g, modes, options);
        report.notes.insert(report.notes.begin(), notes_only.notes.begin(), notes_only.notes.end());

        // zero-width quadratic intervals on the linear gradient grid reproduce the linear phases
        ValidationCheck reduction{kCheckQuadraticReduction, 0.0, 1e-12, 0};
        std::vector<GradientInterval> xs = linear.intervals(Axis::X);
        std::vector<GradientInterval> ys = linear.intervals(Axis::Y);
        const Codebook reduced = build_quadratic_custom(g, xs, ys);
        for (std::size_t i = 0; i < linear.size(); ++i)
        {
            const TransmissionMode a = reduced.mode(i);
            const TransmissionMode b = linear.mode(i);
            for (int nx = 0; nx < g.q_x(); ++nx)
                for (int ny = 0; ny < g.q_y(); ++ny)
                {
                    reduction.max_deviation = std::max(
                        reduction.max_deviation, wrapped_phase_difference(phase_at(a, g, nx, ny), phase_at(b, g, nx, ny)));
                    ++reduction.evaluations;
                }
        }
        report.checks.push_back(reduction);
        return report;
    }

} // namespace irs

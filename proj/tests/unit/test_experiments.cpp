#include "irs/experiments.hpp"

#include "oracles.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace irs;

namespace
{
    constexpr double kPi = std::numbers::pi;

    std::vector<std::vector<double>> parse_csv_numbers(const std::string &text, std::string &header)
    {
        std::istringstream in(text);
        std::getline(in, header);
        std::vector<std::vector<double>> rows;
        std::string line;
        while (std::getline(in, line))
        {
            std::vector<double> row;
            std::istringstream cells(line);
            std::string cell;
            while (std::getline(cells, cell, ','))
                row.push_back(std::stod(cell));
            rows.push_back(std::move(row));
        }
        return rows;
    }

    std::filesystem::path scratch_dir(const char *name)
    {
        auto p = std::filesystem::temp_directory_path() / ("irs_test_" + std::string(name));
        std::filesystem::remove_all(p);
        std::filesystem::create_directories(p);
        return p;
    }

    ExperimentConfig small_dft()
    {
        ExperimentConfig c;
        c.q_x = 8;
        c.q_y = 6;
        c.grid_points = 241;
        return c;
    }
}

TEST_CASE("signed elevation cut")
{
    for (double s : {-90.0, -37.5, -1e-3, 0.0, 12.25, 90.0})
    {
        const AnglePair aod = BeamCut::aod_from_signed(s);
        CHECK(BeamCut::signed_from_aod(aod) == doctest::Approx(s).epsilon(1e-12));
        CHECK(aod.theta() >= 0.0);
    }
    CHECK(BeamCut::aod_from_signed(-30.0).phi() == doctest::Approx(kPi));
    CHECK(BeamCut::aod_from_signed(30.0).phi() == 0.0);
    CHECK_THROWS_AS(BeamCut::aod_from_signed(90.5), std::invalid_argument);
    CHECK_THROWS_AS(BeamCut::signed_from_aod(AnglePair(0.3, 1.0)), std::invalid_argument);
}

TEST_CASE("config documents round-trip")
{
    ExperimentConfig c;
    c.q_x = 12;
    c.q_y = 7;
    c.d_x = 0.3;
    c.d_y = 0.45;
    c.family = Family::Quadratic;
    c.m_x = 3;
    c.m_y = 4;
    c.custom_x = {{0.1, 0.2}, {0.5, 0.7}};
    c.custom_y = {{0.0, 1.0 / 3.0}};
    c.aoa_theta_deg = 17.3;
    c.aoa_phi_deg = 200.0;
    c.grid_points = 99;
    c.tradeoff = {{Family::Linear, {4, 9}}, {Family::Quadratic, {25}}};
    c.sample_count = 1234;
    c.seed = 18446744073709551557ull;
    c.sampling = SamplingLaw::SolidAngleUniform;
    c.gamma_floor = 1e-9;
    c.validation_subsample = 11;
    c.method = Method::Sum;
    c.workers = 3;
    c.output = "out/x.csv";
    CHECK(config_from_json(to_json(c)) == c);
    CHECK(config_from_json(to_json(ExperimentConfig{})) == ExperimentConfig{});
    CHECK(config_from_json("{}") == ExperimentConfig{});

    const auto dir = scratch_dir("config");
    save_config(c, dir / "c.json");
    CHECK(load_config(dir / "c.json") == c);
}

TEST_CASE("config documents reject malformed input")
{
    CHECK_THROWS_AS(config_from_json("{\"q_x\": 20, \"qx\": 3}"), FormatError);
    CHECK_THROWS_AS(config_from_json("{\"q_x\": \"twenty\"}"), FormatError);
    CHECK_THROWS_AS(config_from_json("{\"family\": \"chebyshev\"}"), FormatError);
    CHECK_THROWS_AS(config_from_json("{\"method\": \"guess\"}"), FormatError);
    CHECK_THROWS_AS(config_from_json("{\"custom_x\": [{\"beta\": 0.1}]}"), FormatError);
    CHECK_THROWS_AS(config_from_json("{\"tradeoff\": {}}"), FormatError);
    CHECK_THROWS_AS(config_from_json("[1, 2]"), FormatError);
    CHECK_THROWS_AS(config_from_json("{"), FormatError);
    CHECK_THROWS(load_config("/nonexistent/dir/config.json"));

    ExperimentConfig c;
    c.aoa_theta_deg = 95.0;
    CHECK_THROWS_AS(c.check(), FormatError);
    c = {};
    c.family = Family::Dft;
    c.m_total = 100;
    CHECK_THROWS_AS(c.codebook(), FormatError);
    c = {};
    c.family = Family::Linear;
    CHECK_THROWS_AS(c.codebook(), FormatError);
    c = {};
    c.custom_x = {{0.0, 0.5}};
    CHECK_THROWS_AS(c.codebook(), FormatError);
    c = {};
    c.tradeoff = {{Family::Linear, {}}};
    CHECK_THROWS_AS(c.check(), FormatError);
}

TEST_CASE("DFT beam cut peaks at the array gain")
{
    ExperimentConfig c;
    c.grid_points = 1201;
    const BeamTable t = run_beam_sweep(c);
    REQUIRE(t.theta_signed_deg.size() == 1201);
    CHECK(t.theta_signed_deg.front() == -90.0);
    CHECK(t.theta_signed_deg.back() == 90.0);
    CHECK(t.theta_signed_deg[600] == 0.0);
    REQUIRE(t.modes.size() == 400);
    CHECK(t.modes[0] == ModeIndex{0, 0});
    CHECK(t.at(600, 0) == doctest::Approx(20 * std::log10(400 * kPi)).epsilon(1e-12));
    CHECK(t.at(600, 0) == doctest::Approx(61.98).epsilon(2e-4));
    for (std::size_t k = 0; k < 1201; ++k)
        REQUIRE(t.at(k, 0) <= t.at(600, 0) + 1e-9);
}

TEST_CASE("beam rows match an independent recomputation")
{
    ExperimentConfig c = small_dft();
    c.aoa_theta_deg = 20.0;
    c.aoa_phi_deg = 0.0;
    const BeamTable t = run_beam_sweep(c);
    const IrsGeometry g = c.geometry();
    const AnglePair aoa = AnglePair::from_degrees(20.0, 0.0);
    const double peak = 20 * std::log10(g.max_gain());
    std::size_t compared = 0;
    for (std::size_t k = 0; k < t.theta_signed_deg.size(); ++k)
    {
        const double s = deg_to_rad(t.theta_signed_deg[k]);
        // on this cut A_y = 0 and A_x = sin(theta_i) + sin(s)
        const double ax = std::sin(aoa.theta()) + std::sin(s);
        REQUIRE(combined_cosines(aoa, BeamCut::aod_from_signed(t.theta_signed_deg[k])).a_x ==
                doctest::Approx(ax).epsilon(1e-12));
        for (std::size_t m = 0; m < t.modes.size(); ++m)
        {
            const ModeIndex mi = t.modes[m];
            const auto value = oracle::array_sum(g.q_x(), g.q_y(), 0.5, 0.5, ax, 0.0, g.unit_cell_factor(),
                                                 [&](int nx, int ny) {
                                                     return -2 * std::numbers::pi_v<long double> *
                                                            (static_cast<long double>(mi.m_x) * nx / g.q_x() +
                                                             static_cast<long double>(mi.m_y) * ny / g.q_y());
                                                 });
            const double db = 20 * std::log10(std::abs(value));
            if (db < peak - 60)
                continue;
            REQUIRE(std::abs(t.at(k, m) - db) <= 1e-9);
            ++compared;
        }
    }
    CHECK(compared > 1000);
}

TEST_CASE("beam CSV is deterministic and carries the table")
{
    ExperimentConfig c = small_dft();
    c.workers = 1;
    std::ostringstream one;
    write_csv(run_beam_sweep(c), one);
    c.workers = 5;
    const BeamTable t = run_beam_sweep(c);
    std::ostringstream many;
    write_csv(t, many);
    CHECK(one.str() == many.str());

    std::string header;
    const auto rows = parse_csv_numbers(one.str(), header);
    CHECK(header.rfind("theta_signed_deg,m_0_0_db,m_0_1_db,", 0) == 0);
    REQUIRE(rows.size() == t.theta_signed_deg.size());
    for (std::size_t k = 0; k < rows.size(); ++k)
    {
        REQUIRE(rows[k].size() == 1 + t.modes.size());
        REQUIRE(std::abs(rows[k][0] - t.theta_signed_deg[k]) <= 5e-7);
        for (std::size_t m = 0; m < t.modes.size(); ++m)
            REQUIRE(std::abs(rows[k][m + 1] - t.at(k, m)) <= 5e-7);
    }
}

TEST_CASE("beam sweep for quadratic codebooks and method choice")
{
    ExperimentConfig c;
    c.custom_x = {{0.0, 0.25}};
    c.custom_y = {{0.0, 0.25}};
    c.grid_points = 361;
    const BeamTable closed = run_beam_sweep(c);
    c.method = Method::Sum;
    const BeamTable sum = run_beam_sweep(c);
    REQUIRE(closed.modes.size() == 1);
    const double peak_closed = *std::max_element(closed.db.begin(), closed.db.end());
    const double peak_sum = *std::max_element(sum.db.begin(), sum.db.end());
    CHECK(std::abs(peak_closed - peak_sum) < 0.5);

    c.method = Method::Oracle;
    const BeamTable quad = run_beam_sweep(c);
    for (std::size_t k = 0; k < 361; ++k)
        if (closed.at(k, 0) > -100.0)
            REQUIRE(std::abs(closed.at(k, 0) - quad.at(k, 0)) < 1e-6);

    ExperimentConfig linear = small_dft();
    linear.family = Family::Linear;
    linear.m_total = 4;
    linear.method = Method::Oracle;
    CHECK_THROWS_AS(run_beam_sweep(linear), FormatError);
}

TEST_CASE("tradeoff sweep rows")
{
    ExperimentConfig c;
    c.tradeoff = {{Family::Dft, {400}}, {Family::Linear, {25}}, {Family::Quadratic, {25, 100}}};
    c.sample_count = 3000;
    c.seed = 21;
    const auto rows = run_tradeoff_sweep(c);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].family == Family::Dft);
    CHECK(rows[0].point.efficiency_metric >= 16 / std::pow(kPi, 4));
    for (const auto &r : rows)
    {
        CHECK(r.efficiency_db() <= r.ideal_bound_db() + 1e-12);
        CHECK(r.point.sample_count == 3000);
    }
    CHECK(rows[2].efficiency_db() > rows[1].efficiency_db());

    std::ostringstream csv;
    write_csv(rows, csv);
    std::istringstream in(csv.str());
    std::string header, line;
    std::getline(in, header);
    CHECK(header == "family,M,m_x,m_y,efficiency_metric_db,mean_inverse_gamma,clamp_count,ideal_bound_db,samples,"
                    "seed,validation_max_deviation");
    std::getline(in, line);
    std::getline(in, line);
    CHECK(line.rfind("linear,25,5,5,", 0) == 0);
    std::vector<std::string> cells;
    std::istringstream split(line);
    for (std::string cell; std::getline(split, cell, ',');)
        cells.push_back(cell);
    REQUIRE(cells.size() == 10); // empty trailing validation column
    CHECK(std::stod(cells[5]) == rows[1].point.mean_inverse_gamma);
    CHECK(std::stoul(cells[6]) == rows[1].point.clamp_count);

    c.tradeoff.clear();
    CHECK_THROWS_AS(run_tradeoff_sweep(c), FormatError);
}

TEST_CASE("codebook documents round-trip")
{
    const IrsGeometry g(20, 20, 0.5, 0.5);
    const IrsGeometry fine(16, 12, 0.25, 0.2);
    const Codebook books[] = {build_dft(g), build_linear(g, 5, 7), build_quadratic(g, 6, 3),
                              build_quadratic(fine, 4, 5),
                              build_quadratic_custom(fine, {{0.1, 0.3}, {1.0, 2.5}}, {{0.0, 0.125}})};
    const auto dir = scratch_dir("codebook");
    for (const auto &cb : books)
    {
        CHECK(codebook_from_json(codebook_to_json(cb)) == cb);
        export_codebook(cb, dir / "cb.json");
        CHECK(import_codebook(dir / "cb.json") == cb);
    }
    const std::string dft = codebook_to_json(books[0]);
    CHECK(dft.find("\"family\": \"dft\"") != std::string::npos);
    CHECK(dft.find("\"schema_version\": 1") != std::string::npos);
}

TEST_CASE("codebook documents reject violations")
{
    const IrsGeometry g(4, 4, 0.5, 0.5);
    const auto good = nlohmann::json::parse(codebook_to_json(build_quadratic(g, 2, 2)));
    auto rejects = [](const nlohmann::json &doc) {
        CHECK_THROWS_AS(codebook_from_json(doc.dump()), FormatError);
    };
    CHECK(codebook_from_json(good.dump()) == build_quadratic(g, 2, 2));

    auto doc = good;
    doc["schema_version"] = 2;
    rejects(doc);
    doc = good;
    doc.erase("schema_version");
    rejects(doc);
    doc = good;
    doc["extra"] = true;
    rejects(doc);
    doc = good;
    doc["family"] = "linear"; // nonzero widths
    rejects(doc);
    doc = good;
    doc["d_x"] = -0.5;
    rejects(doc);
    doc = good;
    doc["m_x"] = 3;
    rejects(doc);
    doc = good;
    doc["m_y"] = 0;
    rejects(doc);
    // beta + delta_beta past beta_bar = 2
    doc = good;
    doc["modes"][2]["beta_x"] = 1.5;
    doc["modes"][3]["beta_x"] = 1.5;
    rejects(doc);
    doc = good;
    std::swap(doc["modes"][1], doc["modes"][2]);
    rejects(doc);
    // a y gradient that varies between rows breaks the product structure
    doc = good;
    doc["modes"][3]["beta_y"] = 0.5;
    rejects(doc);
    doc = good;
    doc["modes"][0]["delta_beta_x"] = "wide";
    rejects(doc);
    CHECK_THROWS_AS(codebook_from_json("not json"), FormatError);
}

TEST_CASE("cross-method validation")
{
    ExperimentConfig c;
    c.m_total = 16;
    const ValidationReport ok = validate(c);
    CHECK(ok.passed());
    REQUIRE(ok.checks.size() == 4);
    for (const auto &check : ok.checks)
        CHECK(check.evaluations > 0);

    ValidationOptions corrupt;
    corrupt.corruption = PhaseCorruption{3, 4, 0.05};
    const ValidationReport bad = validate(c, corrupt);
    CHECK_FALSE(bad.passed());
    for (const auto &check : bad.checks)
        CHECK(check.passed() == (std::string(check.name) != kCheckLinearClosed));

    const ValidationReport empty = validate_modes(c.geometry(), std::span<const TransmissionMode>{});
    CHECK(empty.passed());
    REQUIRE(empty.notes.size() == 1);
    for (const auto &check : empty.checks)
        CHECK(check.evaluations == 0);

    ExperimentConfig off;
    off.d_x = 0.4;
    off.d_y = 0.3;
    off.m_total = 9;
    const ValidationReport skipped = validate(off);
    CHECK(skipped.passed());
    CHECK_FALSE(skipped.notes.empty());

    std::ostringstream text;
    bad.print(text);
    CHECK(text.str().find("FAIL") != std::string::npos);
    CHECK(text.str().find("validation FAILED") != std::string::npos);
}

TEST_CASE("output paths")
{
    const auto dir = scratch_dir("outdir");
    setenv("IRS_OUTPUT_DIR", dir.c_str(), 1);
    CHECK(default_output_dir() == dir);
    CHECK(resolve_output("", "beam.csv") == dir / "beam.csv");
    CHECK(resolve_output("x.csv", "beam.csv") == dir / "x.csv");
    CHECK(resolve_output("./x.csv", "beam.csv") == std::filesystem::path("./x.csv"));
    CHECK(resolve_output("/tmp/abs.csv", "beam.csv") == std::filesystem::path("/tmp/abs.csv"));
    unsetenv("IRS_OUTPUT_DIR");
    CHECK(default_output_dir() == std::filesystem::current_path());
}

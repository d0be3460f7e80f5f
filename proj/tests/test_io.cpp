#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "netisac/io.hpp"
#include "netisac/model.hpp"

using namespace netisac;
namespace fs = std::filesystem;

namespace
{

const fs::path kReferenceScenario = fs::path(NETISAC_SOURCE_DIR) / "scenarios" / "reference.scenario";

std::string read(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string replace_once(std::string text, const std::string& from, const std::string& to)
{
    const auto at = text.find(from);
    REQUIRE(at != std::string::npos);
    return text.replace(at, from.size(), to);
}

std::string expect_format_error(const std::string& text)
{
    try
    {
        io::parse_scenario(text);
    }
    catch (const io::FormatError& e)
    {
        return e.what();
    }
    FAIL("expected a format error");
    return {};
}

fs::path scratch_dir()
{
    const fs::path dir = fs::temp_directory_path() / "netisac_test_io";
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(ISAC_BINARY) + " " + args + " > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

} // namespace

TEST_CASE("bundled scenario file loads with the study parameters")
{
    const Scenario s = io::load_scenario(kReferenceScenario);
    CHECK(s.num_gbs() == 3);
    CHECK(s.num_uavs() == 2);
    CHECK(s.num_sensing() == 20);
    CHECK(s.num_antennas == 4);
    CHECK(s.num_slots == 40);
    CHECK(s.v_max == 10.0);
    CHECK(s.uav_altitudes == std::vector<double>{80.0, 100.0});
    CHECK(s.p_max == 3.0);
    CHECK(s.kappa == doctest::Approx(std::pow(10.0, -4.5)).epsilon(1e-14));
    CHECK(s.noise_power == doctest::Approx(1e-10).epsilon(1e-14));
    CHECK(s.uav_initial[0] == Vec2(50, 250));
    CHECK(s.uav_initial[1] == Vec2(50, 150));
    CHECK(s.uav_final[0] == Vec2(350, 250));
    CHECK(s.uav_final[1] == Vec2(350, 150));

    const Scenario built_in = reference_scenario();
    CHECK(s.gbs_positions == built_in.gbs_positions);
    CHECK(s.sensing_points == built_in.sensing_points);
    CHECK(s.sensing_altitude == built_in.sensing_altitude);
    CHECK(s.gamma == doctest::Approx(built_in.gamma).epsilon(1e-14));
}

TEST_CASE("scenario documents are checked field by field")
{
    const std::string good = read(kReferenceScenario);

    const std::string grounded = replace_once(good, "\"v_max\": 10.0", "\"v_max\": 0.0");
    CHECK_THROWS_WITH_AS(io::parse_scenario(grounded), doctest::Contains("reachability"), ScenarioError);

    const std::string twice = replace_once(good, "\"p_max\": 3.0,", "\"p_max\": 3.0, \"p_max\": 4.0,");
    CHECK(expect_format_error(twice).find("duplicate key 'p_max'") != std::string::npos);

    const std::string unknown = replace_once(good, "\"p_max\": 3.0,", "\"p_max\": 3.0, \"pmax\": 4.0,");
    CHECK(expect_format_error(unknown).find("pmax") != std::string::npos);

    const std::string missing = replace_once(good, "\"d_min\": 30.0,", "");
    CHECK(expect_format_error(missing).find("d_min") != std::string::npos);

    const std::string typed = replace_once(good, "\"num_antennas\": 4", "\"num_antennas\": \"four\"");
    CHECK(expect_format_error(typed).find("num_antennas") != std::string::npos);

    const std::string both = replace_once(good, "\"p_max\": 3.0,", "\"p_max\": 3.0, \"gamma\": 0.01,");
    CHECK(expect_format_error(both).find("mutually exclusive") != std::string::npos);

    CHECK(expect_format_error("{ not json").find("scenario") != std::string::npos);

    const Scenario linear = io::parse_scenario(replace_once(good, "\"kappa_db\": -45.0", "\"kappa\": 2e-5"));
    CHECK(linear.kappa == 2e-5);
}

TEST_CASE("scenario dump parses back exactly")
{
    std::mt19937_64 rng(41);
    const Scenario s = fixtures::random_scenario(rng, 3, 2, 4, 5, 7);
    const Scenario back = io::parse_scenario(io::dump_scenario(s));
    CHECK(back.gbs_positions == s.gbs_positions);
    CHECK(back.uav_initial == s.uav_initial);
    CHECK(back.uav_final == s.uav_final);
    CHECK(back.uav_altitudes == s.uav_altitudes);
    CHECK(back.sensing_points == s.sensing_points);
    CHECK(back.kappa == s.kappa);
    CHECK(back.noise_power == s.noise_power);
    CHECK(back.gamma == s.gamma);
    CHECK(back.v_max == s.v_max);
}

TEST_CASE("run artifacts round-trip without loss")
{
    std::mt19937_64 rng(42);
    const Scenario s = fixtures::random_scenario(rng, 2, 2, 3, 4, 3);
    SolveResult r;
    r.method = Method::Isotropic;
    r.design = fixtures::random_design(rng, s);
    r.trace.stages = {{0, Stage::Initial, 1.25, 0.0, conic::Status::Optimal, 0, 0.0},
                      {1, Stage::Trajectory, 2.5, 0.125, conic::Status::NumericalFailure, 7, 0.0625}};
    r.trace.outer_iterations = 1;
    r.message = "note";
    const io::RunArtifact a = io::make_artifact(s, r, 987654321987654321ull);

    const io::RunArtifact back = io::artifact_from_json(io::artifact_to_json(a));
    CHECK(back.seed == a.seed);
    CHECK(back.method == Method::Isotropic);
    CHECK(back.message == "note");
    REQUIRE(back.design.same_shape(a.design));
    for (int n = 0; n < s.num_slots; ++n)
    {
        for (int k = 0; k < s.num_uavs(); ++k)
        {
            CHECK(back.design.q(k, n) == a.design.q(k, n));
            CHECK(back.design.serving(k, n) == a.design.serving(k, n));
        }
        for (int m = 0; m < s.num_gbs(); ++m)
        {
            CHECK((back.design.r(m, n) - a.design.r(m, n)).norm() <= 1e-12 * a.design.r(m, n).norm());
            for (int k = 0; k < s.num_uavs(); ++k)
                CHECK(back.design.w(m, k, n) == a.design.w(m, k, n));
        }
    }
    REQUIRE(back.trace.stages.size() == 2);
    CHECK(back.trace.stages[1].stage == Stage::Trajectory);
    CHECK(back.trace.stages[1].status == conic::Status::NumericalFailure);
    CHECK(back.trace.stages[1].trust_radius == 0.0625);

    const fs::path file = scratch_dir() / "artifact.json";
    io::write_artifact(file, a);
    CHECK(io::artifact_to_json(io::read_artifact(file)) == io::artifact_to_json(a));

    std::string wrong = io::artifact_to_json(a);
    wrong.replace(wrong.find(io::kArtifactSchema), std::string(io::kArtifactSchema).size(), "other/9");
    CHECK_THROWS_AS(io::artifact_from_json(wrong), io::FormatError);
}

TEST_CASE("beampattern grid")
{
    Scenario s = fixtures::single_link(4, Vec2(30.0, 40.0), 2);
    Design d = Design::straight_flight(s);
    io::GridSpec spec{1, 25.0, -50.0, 50.0, -40.0, 40.0, 11, 9};

    const io::BeampatternGrid dark = io::beampattern(d, s, spec);
    for (double p : dark.power)
        CHECK(watts_to_dbw(p) == -300.0);

    d.r(0, 1) = (s.p_max / 4.0) * CMatrix::Identity(4, 4);
    const io::BeampatternGrid flat = io::beampattern(d, s, spec);
    for (int iy = 0; iy < spec.ny; ++iy)
        for (int ix = 0; ix < spec.nx; ++ix)
        {
            const double d2 = flat.xs[ix] * flat.xs[ix] + flat.ys[iy] * flat.ys[iy] + 25.0 * 25.0;
            CHECK(flat.power[iy * spec.nx + ix] == doctest::Approx(s.p_max / d2).epsilon(1e-12));
        }
    REQUIRE(flat.uav_positions.size() == 1);
    CHECK(flat.uav_rates[0] == 0.0);

    std::ostringstream os;
    io::write_beampattern(os, flat);
    const std::string text = os.str();
    CHECK(text.rfind("kind,x,y,power_dbw,rate_bps_hz\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + spec.nx * spec.ny + 1);

    spec.slot = 2;
    CHECK_THROWS_AS(io::beampattern(d, s, spec), InvalidArgument);
}

TEST_CASE("solved design illuminates every sensing point above the threshold on the grid")
{
    Scenario s = fixtures::single_link(3, Vec2(30.0, 40.0), 2);
    s.sensing_points = {Vec2(10.0, 0.0), Vec2(20.0, 0.0)};
    s.sensing_altitude = 20.0;
    s.gamma = 0.5 * isotropic_illumination_limit(s);
    SolveOptions options;
    options.max_outer = 3;
    const SolveResult r = solve(s, options);
    REQUIRE(r.status == RunStatus::Solved);
    const io::GridSpec spec{0, s.sensing_altitude, 10.0, 20.0, 0.0, 0.0, 2, 1};
    const io::BeampatternGrid grid = io::beampattern(r.design, s, spec);
    for (double p : grid.power)
        CHECK(p >= s.gamma * (1 - 1e-6));
}

TEST_CASE("tables have one header and one row per record")
{
    std::mt19937_64 rng(43);
    const Scenario s = fixtures::random_scenario(rng, 2, 3, 2, 5, 2);
    const Design d = fixtures::random_design(rng, s);
    std::ostringstream slots;
    io::write_slot_table(slots, d, s);
    const std::string text = slots.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + s.num_slots);
    CHECK(text.find("uav3_rate_bps_hz") != std::string::npos);

    SweepResult sweep;
    sweep.points = {{-20.0, Method::Proposed, true, 3.5, RunStatus::Solved, ""},
                    {-10.0, Method::Isotropic, false, 0.0, RunStatus::Infeasible, "x"}};
    std::ostringstream table;
    io::write_sweep_table(table, sweep);
    CHECK(table.str() ==
          "gamma_dbw,method,feasible,avg_sum_rate_bps_hz,status\n-20,proposed,1,3.5,solved\n-10,isotropic,0,,infeasible\n");
}

TEST_CASE("command line exit codes")
{
    const fs::path dir = scratch_dir();
    const std::string scenario = kReferenceScenario.string();
    CHECK(run_cli("validate " + scenario) == 0);
    CHECK(run_cli("validate") == 2);
    CHECK(run_cli("solve " + scenario + " --method bogus") == 2);
    CHECK(run_cli("frobnicate") == 2);

    const std::string infeasible = (dir / "infeasible.json").string();
    CHECK(run_cli("solve " + scenario + " --num-slots 10 --gamma-dbw -5 --out " + infeasible) == 1);
    CHECK(io::read_artifact(infeasible).status == RunStatus::Infeasible);

    std::string text = read(kReferenceScenario);
    text.replace(text.find("\"v_max\": 10.0"), 13, "\"v_max\": 0.0");
    const fs::path bad = dir / "grounded.scenario";
    std::ofstream(bad) << text;
    CHECK(run_cli("validate " + bad.string()) == 2);

    const std::string run = (dir / "iso.json").string();
    CHECK(run_cli("baseline " + scenario + " --method isotropic --num-slots 10 --gamma-dbw -25 --max-outer 2 --out " +
                  run) == 0);
    CHECK(fs::exists(dir / "iso.slots.csv"));
    const std::string grid = (dir / "grid.csv").string();
    CHECK(run_cli("beampattern " + run + " --slot 2 --resolution 4,3 --out " + grid) == 0);
    CHECK(run_cli("beampattern " + run + " --slot 11") == 2);
}

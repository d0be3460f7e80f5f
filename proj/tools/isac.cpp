#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "netisac/io.hpp"
#include "netisac/model.hpp"

using namespace netisac;

namespace
{

enum ExitCode
{
    kOk = 0,
    kInfeasible = 1,
    kUsage = 2,
    kNumerical = 3,
};

int exit_code(RunStatus status)
{
    switch (status)
    {
    case RunStatus::Solved:
        return kOk;
    case RunStatus::Infeasible:
        return kInfeasible;
    case RunStatus::NumericalFailure:
        return kNumerical;
    }
    return kNumerical;
}

struct RunFlags
{
    std::string scenario;
    std::string method;
    std::vector<double> gammas_dbw;
    std::string out;
    std::uint64_t seed = 0;
    int max_outer = 20;
    int num_slots = 0;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool gamma_list)
{
    cmd->add_option("scenario", f.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    auto* gamma = cmd->add_option("--gamma-dbw", f.gammas_dbw,
                                  gamma_list ? "Illumination thresholds, comma separated (dBW)"
                                             : "Override the illumination threshold (dBW)");
    gamma->delimiter(',')->allow_extra_args(false);
    if (gamma_list)
        gamma->required();
    cmd->add_option("--out", f.out, "Output path");
    cmd->add_option("--seed", f.seed, "Recorded in the outputs; the pipeline is deterministic");
    cmd->add_option("--max-outer", f.max_outer, "Cap on alternating-optimization rounds")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--num-slots", f.num_slots, "Resample the horizon into this many slots")
        ->check(CLI::PositiveNumber);
}

Scenario prepared_scenario(const RunFlags& f)
{
    Scenario s = io::load_scenario(f.scenario);
    if (f.num_slots > 0)
        s = s.with_num_slots(f.num_slots);
    validate(s);
    return s;
}

std::string sibling(const std::string& path, const std::string& suffix)
{
    std::filesystem::path p(path);
    p.replace_extension();
    return p.string() + suffix;
}

int run_solve(const RunFlags& f, Method method)
{
    Scenario s = prepared_scenario(f);
    if (f.gammas_dbw.size() > 1)
        throw CLI::ValidationError("--gamma-dbw", "solve takes a single threshold");
    if (f.gammas_dbw.size() == 1)
        s = s.with_gamma(dbw_to_watts(f.gammas_dbw.front()));

    SolveOptions options;
    options.method = method;
    options.max_outer = f.max_outer;
    const SolveResult result = solve(s, options);

    std::printf("method: %s\nstatus: %s\n", to_string(method), to_string(result.status));
    if (result.status == RunStatus::Solved)
        std::printf("average sum rate: %.6f bps/Hz over %d slots (%d outer iterations)\n",
                    result.average_sum_rate(), s.num_slots, result.trace.outer_iterations);
    if (!result.message.empty())
        std::printf("note: %s\n", result.message.c_str());

    const std::string out = f.out.empty() ? std::string("run.json") : f.out;
    io::write_artifact(out, io::make_artifact(s, result, f.seed));
    std::printf("artifact: %s\n", out.c_str());
    if (result.status == RunStatus::Solved)
    {
        const std::string table = sibling(out, ".slots.csv");
        std::ofstream os(table, std::ios::binary);
        io::write_slot_table(os, result.design, s);
        std::printf("slot table: %s\n", table.c_str());
    }
    return exit_code(result.status);
}

int run_validate(const RunFlags& f)
{
    Scenario s = prepared_scenario(f);
    if (f.gammas_dbw.size() == 1)
        s = s.with_gamma(dbw_to_watts(f.gammas_dbw.front()));
    const IlluminationFloor floor = max_min_illumination(s);
    std::printf("scenario: M=%d K=%d Q=%d N=%d N_a=%d\n", s.num_gbs(), s.num_uavs(), s.num_sensing(),
                s.num_slots, s.num_antennas);
    std::printf("illumination threshold: %.3f dBW\n", watts_to_dbw(s.gamma));
    if (floor.status != conic::Status::Optimal)
    {
        std::printf("max_min_illumination: %s\n", conic::to_string(floor.status));
        return kNumerical;
    }
    std::printf("max_min_illumination: %.3f dBW\n", watts_to_dbw(floor.floor));
    std::printf("isotropic limit: %.3f dBW\n", watts_to_dbw(isotropic_illumination_limit(s)));
    std::printf("threshold feasible: %s\n", s.gamma <= floor.floor ? "yes" : "no");
    return kOk;
}

int run_sweep(const RunFlags& f, const std::vector<std::string>& method_names)
{
    const Scenario s = prepared_scenario(f);
    std::vector<Method> methods;
    for (const std::string& name : method_names)
    {
        const auto m = parse_method(name);
        if (!m)
            throw CLI::ValidationError("--method", "unknown method '" + name + "'");
        methods.push_back(*m);
    }
    if (methods.empty())
        methods = {Method::Proposed, Method::StraightFlight, Method::Isotropic};

    SolveOptions options;
    options.max_outer = f.max_outer;
    const SweepResult sweep = gamma_sweep(s, f.gammas_dbw, methods, options);
    if (f.out.empty())
    {
        io::write_sweep_table(std::cout, sweep);
    }
    else
    {
        std::ofstream os(f.out, std::ios::binary);
        io::write_sweep_table(os, sweep);
        if (!os)
            throw io::FormatError("write failed for '" + f.out + "'");
        std::printf("sweep table: %s\n", f.out.c_str());
    }
    return kOk;
}

struct GridFlags
{
    std::string artifact;
    int slot = 1;
    double altitude = 0.0;
    std::vector<double> x_range, y_range;
    std::vector<int> resolution{81, 81};
    std::string out;
};

int run_beampattern(const GridFlags& f)
{
    const io::RunArtifact a = io::read_artifact(f.artifact);
    if (a.design.num_slots() == 0)
        throw CLI::ValidationError("artifact", "the run has no design (status " +
                                                   std::string(to_string(a.status)) + ")");
    const Scenario& s = a.scenario;

    // Default window: every GBS, sensing point and UAV waypoint plus a margin.
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    auto grow = [&](const Vec2& p) {
        x0 = std::min(x0, p.x());
        x1 = std::max(x1, p.x());
        y0 = std::min(y0, p.y());
        y1 = std::max(y1, p.y());
    };
    for (const auto& p : s.gbs_positions)
        grow(p);
    for (const auto& p : s.sensing_points)
        grow(p);
    for (int k = 0; k < a.design.num_uavs(); ++k)
        for (int n = 0; n < a.design.num_slots(); ++n)
            grow(a.design.q(k, n));

    io::GridSpec spec;
    spec.slot = f.slot - 1;
    spec.altitude = f.altitude > 0.0 ? f.altitude : s.sensing_altitude;
    spec.x_min = f.x_range.size() == 2 ? f.x_range[0] : x0 - 20.0;
    spec.x_max = f.x_range.size() == 2 ? f.x_range[1] : x1 + 20.0;
    spec.y_min = f.y_range.size() == 2 ? f.y_range[0] : y0 - 20.0;
    spec.y_max = f.y_range.size() == 2 ? f.y_range[1] : y1 + 20.0;
    spec.nx = f.resolution.at(0);
    spec.ny = f.resolution.at(1);
    const io::BeampatternGrid grid = io::beampattern(a.design, s, spec);

    if (f.out.empty())
    {
        io::write_beampattern(std::cout, grid);
    }
    else
    {
        std::ofstream os(f.out, std::ios::binary);
        io::write_beampattern(os, grid);
        std::printf("beampattern: %s (%d x %d points, slot %d, altitude %.1f m)\n", f.out.c_str(), spec.nx,
                    spec.ny, f.slot, spec.altitude);
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cooperative ISAC beamforming, UAV association and trajectory design"};
    app.require_subcommand(1);

    RunFlags validate_flags, solve_flags, baseline_flags, sweep_flags;
    std::vector<std::string> sweep_methods;
    GridFlags grid_flags;

    auto* cmd_validate = app.add_subcommand("validate", "Check a scenario and report its sensing limits");
    add_run_flags(cmd_validate, validate_flags, false);

    auto* cmd_solve = app.add_subcommand("solve", "Run one method and write a run artifact");
    add_run_flags(cmd_solve, solve_flags, false);
    solve_flags.method = "proposed";
    cmd_solve->add_option("--method", solve_flags.method, "proposed | straight | isotropic")
        ->check(CLI::IsMember({"proposed", "straight", "isotropic"}));

    auto* cmd_baseline = app.add_subcommand("baseline", "Run a benchmark design and write a run artifact");
    add_run_flags(cmd_baseline, baseline_flags, false);
    baseline_flags.method = "straight";
    cmd_baseline->add_option("--method", baseline_flags.method, "straight | isotropic")
        ->check(CLI::IsMember({"straight", "isotropic"}));

    auto* cmd_sweep = app.add_subcommand("sweep", "Average sum rate versus illumination threshold");
    add_run_flags(cmd_sweep, sweep_flags, true);
    cmd_sweep->add_option("--method", sweep_methods, "Methods to run (default: all)")
        ->delimiter(',')
        ->check(CLI::IsMember({"proposed", "straight", "isotropic"}));

    auto* cmd_grid = app.add_subcommand("beampattern", "Illumination over a grid for one slot of a run");
    cmd_grid->add_option("artifact", grid_flags.artifact, "Run artifact")->required()->check(CLI::ExistingFile);
    cmd_grid->add_option("--slot", grid_flags.slot, "Slot, 1-based")->check(CLI::PositiveNumber);
    cmd_grid->add_option("--altitude", grid_flags.altitude, "Evaluation altitude in meters (default: sensing)");
    cmd_grid->add_option("--x-range", grid_flags.x_range, "xmin,xmax")->delimiter(',')->expected(2);
    cmd_grid->add_option("--y-range", grid_flags.y_range, "ymin,ymax")->delimiter(',')->expected(2);
    cmd_grid->add_option("--resolution", grid_flags.resolution, "nx,ny")->delimiter(',')->expected(2);
    cmd_grid->add_option("--out", grid_flags.out, "Output CSV (default: stdout)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try
    {
        if (cmd_validate->parsed())
            return run_validate(validate_flags);
        if (cmd_solve->parsed())
            return run_solve(solve_flags, *parse_method(solve_flags.method));
        if (cmd_baseline->parsed())
            return run_solve(baseline_flags, *parse_method(baseline_flags.method));
        if (cmd_sweep->parsed())
            return run_sweep(sweep_flags, sweep_methods);
        if (cmd_grid->parsed())
            return run_beampattern(grid_flags);
    }
    catch (const CLI::Error& e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    }
    catch (const io::FormatError& e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    }
    catch (const ScenarioError& e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    }
    catch (const InvalidArgument& e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    }
    return kUsage;
}

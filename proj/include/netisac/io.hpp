#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "netisac/orchestrator.hpp"

namespace netisac::io
{

/// Malformed input document; the message names the offending field.
class FormatError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kArtifactSchema = "netisac-run/1";

/// Parses a scenario document (JSON object, keys as in Scenario). Accepts
/// gamma_dbw, kappa_db and noise_dbw in place of the linear fields.
/// Duplicate and unknown keys are rejected. The result is validated.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

/// Linear-unit document that parse_scenario reads back exactly.
std::string dump_scenario(const Scenario& scenario);

struct RunArtifact
{
    Scenario scenario;
    Method method = Method::Proposed;
    RunStatus status = RunStatus::Solved;
    std::string message;
    std::uint64_t seed = 0;
    Design design;
    AoTrace trace;
};

RunArtifact make_artifact(const Scenario& scenario, const SolveResult& result, std::uint64_t seed);

/// Also carries per-slot rates and per-(point, slot) illumination, which are
/// derived on write and ignored on read.
std::string artifact_to_json(const RunArtifact& artifact);
RunArtifact artifact_from_json(const std::string& text);

void write_artifact(const std::filesystem::path& path, const RunArtifact& artifact);
RunArtifact read_artifact(const std::filesystem::path& path);

/// One row per slot (1-based): sum rate, worst illumination, then position,
/// serving GBS (1-based) and rate of every UAV.
void write_slot_table(std::ostream& os, const Design& design, const Scenario& scenario);

/// One row per (threshold, method) in sweep order.
void write_sweep_table(std::ostream& os, const SweepResult& sweep);

struct GridSpec
{
    int slot = 0; ///< 0-based
    double altitude = 0.0;
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;
    int nx = 0, ny = 0;
};

struct BeampatternGrid
{
    GridSpec spec;
    std::vector<double> xs, ys;
    std::vector<double> power; ///< watts, [iy * nx + ix]
    std::vector<Vec2> uav_positions;
    std::vector<double> uav_rates;
};

/// Illumination over a horizontal grid at spec.altitude for one slot.
BeampatternGrid beampattern(const Design& design, const Scenario& scenario, const GridSpec& spec);

/// Grid rows (x, y, power in dBW) followed by one row per UAV with its
/// position and rate.
void write_beampattern(std::ostream& os, const BeampatternGrid& grid);

} // namespace netisac::io

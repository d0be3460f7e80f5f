#include "netisac/io.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "netisac/model.hpp"

namespace netisac::io
{

using nlohmann::json;

namespace
{

/// Typed access to one JSON object that remembers which keys were read.
class FieldReader
{
public:
    FieldReader(const json& object, std::string where) : object_(object), where_(std::move(where))
    {
        if (!object_.is_object())
            throw FormatError(where_ + ": expected an object");
    }

    bool has(const std::string& key) const { return object_.contains(key); }

    const json& raw(const std::string& key)
    {
        if (!object_.contains(key))
            throw FormatError(where_ + ": missing field '" + key + "'");
        used_.insert(key);
        return object_.at(key);
    }

    double number(const std::string& key)
    {
        const json& v = raw(key);
        if (!v.is_number())
            throw FormatError(where_ + ": field '" + key + "' must be a number");
        return v.get<double>();
    }

    int integer(const std::string& key)
    {
        const json& v = raw(key);
        if (!v.is_number_integer() || v.get<long long>() < std::numeric_limits<int>::min() ||
            v.get<long long>() > std::numeric_limits<int>::max())
            throw FormatError(where_ + ": field '" + key + "' must be an integer");
        return v.get<int>();
    }

    std::string text(const std::string& key)
    {
        const json& v = raw(key);
        if (!v.is_string())
            throw FormatError(where_ + ": field '" + key + "' must be a string");
        return v.get<std::string>();
    }

    bool boolean(const std::string& key)
    {
        const json& v = raw(key);
        if (!v.is_boolean())
            throw FormatError(where_ + ": field '" + key + "' must be a boolean");
        return v.get<bool>();
    }

    Vec2 point(const json& v, const std::string& key) const
    {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw FormatError(where_ + ": field '" + key + "' must hold [x, y] pairs");
        return Vec2(v[0].get<double>(), v[1].get<double>());
    }

    std::vector<Vec2> points(const std::string& key)
    {
        const json& v = raw(key);
        if (!v.is_array())
            throw FormatError(where_ + ": field '" + key + "' must be a list of [x, y] pairs");
        std::vector<Vec2> out;
        for (const json& p : v)
            out.push_back(point(p, key));
        return out;
    }

    std::vector<double> numbers(const std::string& key)
    {
        const json& v = raw(key);
        if (!v.is_array())
            throw FormatError(where_ + ": field '" + key + "' must be a list of numbers");
        std::vector<double> out;
        for (const json& x : v)
        {
            if (!x.is_number())
                throw FormatError(where_ + ": field '" + key + "' must be a list of numbers");
            out.push_back(x.get<double>());
        }
        return out;
    }

    /// Exactly one of `linear` and `db` must be present; returns watts or a
    /// linear ratio.
    double linear_or_db(const std::string& linear, const std::string& db)
    {
        const bool a = has(linear);
        const bool b = has(db);
        if (a && b)
            throw FormatError(where_ + ": fields '" + linear + "' and '" + db + "' are mutually exclusive");
        if (!a && !b)
            throw FormatError(where_ + ": missing field '" + linear + "' (or '" + db + "')");
        return a ? number(linear) : dbw_to_watts(number(db));
    }

    void reject_unknown() const
    {
        for (const auto& item : object_.items())
            if (!used_.count(item.key()))
                throw FormatError(where_ + ": unknown field '" + item.key() + "'");
    }

private:
    const json& object_;
    std::string where_;
    std::set<std::string> used_;
};

/// Parses `text`, rejecting duplicate keys at any depth.
json parse_strict(const std::string& text, const std::string& what)
{
    std::vector<std::set<std::string>> open_objects;
    std::string duplicate;
    json::parser_callback_t track = [&](int, json::parse_event_t event, json& parsed) {
        switch (event)
        {
        case json::parse_event_t::object_start:
            open_objects.emplace_back();
            break;
        case json::parse_event_t::object_end:
            open_objects.pop_back();
            break;
        case json::parse_event_t::key:
            if (!open_objects.back().insert(parsed.get<std::string>()).second && duplicate.empty())
                duplicate = parsed.get<std::string>();
            break;
        default:
            break;
        }
        return true;
    };
    json doc;
    try
    {
        doc = json::parse(text, track);
    }
    catch (const json::parse_error& e)
    {
        throw FormatError(what + ": " + e.what());
    }
    if (!duplicate.empty())
        throw FormatError(what + ": duplicate key '" + duplicate + "'");
    return doc;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FormatError("cannot write '" + path.string() + "'");
    out << text;
    if (!out)
        throw FormatError("write failed for '" + path.string() + "'");
}

json point_json(const Vec2& p) { return json::array({p.x(), p.y()}); }

json points_json(const std::vector<Vec2>& ps)
{
    json out = json::array();
    for (const auto& p : ps)
        out.push_back(point_json(p));
    return out;
}

json scenario_json(const Scenario& s)
{
    return json{
        {"gbs_positions", points_json(s.gbs_positions)},
        {"uav_initial", points_json(s.uav_initial)},
        {"uav_final", points_json(s.uav_final)},
        {"uav_altitudes", s.uav_altitudes},
        {"sensing_points", points_json(s.sensing_points)},
        {"sensing_altitude", s.sensing_altitude},
        {"num_antennas", s.num_antennas},
        {"antenna_spacing_over_wavelength", s.antenna_spacing_over_wavelength},
        {"num_slots", s.num_slots},
        {"slot_duration", s.slot_duration},
        {"p_max", s.p_max},
        {"gamma", s.gamma},
        {"v_max", s.v_max},
        {"d_min", s.d_min},
        {"kappa", s.kappa},
        {"noise_power", s.noise_power},
    };
}

Scenario scenario_from(const json& doc, const std::string& where)
{
    FieldReader r(doc, where);
    Scenario s;
    s.gbs_positions = r.points("gbs_positions");
    s.uav_initial = r.points("uav_initial");
    s.uav_final = r.points("uav_final");
    s.uav_altitudes = r.numbers("uav_altitudes");
    s.sensing_points = r.points("sensing_points");
    s.sensing_altitude = r.number("sensing_altitude");
    s.num_antennas = r.integer("num_antennas");
    if (r.has("antenna_spacing_over_wavelength"))
        s.antenna_spacing_over_wavelength = r.number("antenna_spacing_over_wavelength");
    s.num_slots = r.integer("num_slots");
    s.slot_duration = r.number("slot_duration");
    s.p_max = r.number("p_max");
    s.gamma = r.linear_or_db("gamma", "gamma_dbw");
    s.v_max = r.number("v_max");
    s.d_min = r.number("d_min");
    s.kappa = r.linear_or_db("kappa", "kappa_db");
    s.noise_power = r.linear_or_db("noise_power", "noise_dbw");
    r.reject_unknown();
    validate(s);
    return s;
}

json matrix_json(const CMatrix& x)
{
    json data = json::array();
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j)
        {
            data.push_back(x(i, j).real());
            data.push_back(x(i, j).imag());
        }
    return json{{"rows", x.rows()}, {"cols", x.cols()}, {"data", data}};
}

CMatrix matrix_from(const json& doc, int dim, const std::string& where)
{
    FieldReader r(doc, where);
    const int rows = r.integer("rows");
    const int cols = r.integer("cols");
    const json& data = r.raw("data");
    r.reject_unknown();
    if (rows != dim || cols != dim)
        throw FormatError(where + ": expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
    if (!data.is_array() || data.size() != static_cast<size_t>(2 * rows * cols))
        throw FormatError(where + ": field 'data' must hold 2*rows*cols numbers");
    CMatrix x(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
        {
            const json& re = data[2 * (i * cols + j)];
            const json& im = data[2 * (i * cols + j) + 1];
            if (!re.is_number() || !im.is_number())
                throw FormatError(where + ": field 'data' must hold numbers");
            x(i, j) = Complex(re.get<double>(), im.get<double>());
        }
    return x;
}

json design_json(const Design& d)
{
    json trajectories = json::array();
    for (int k = 0; k < d.num_uavs(); ++k)
    {
        json row = json::array();
        for (int n = 0; n < d.num_slots(); ++n)
            row.push_back(point_json(d.q(k, n)));
        trajectories.push_back(row);
    }
    json association = json::array();
    json w = json::array();
    json r = json::array();
    for (int n = 0; n < d.num_slots(); ++n)
    {
        json serving = json::array();
        for (int k = 0; k < d.num_uavs(); ++k)
            serving.push_back(d.serving(k, n));
        association.push_back(serving);
        for (int m = 0; m < d.num_gbs(); ++m)
        {
            r.push_back(matrix_json(d.r(m, n)));
            for (int k = 0; k < d.num_uavs(); ++k)
                w.push_back(matrix_json(d.w(m, k, n)));
        }
    }
    return json{
        {"num_gbs", d.num_gbs()},
        {"num_uavs", d.num_uavs()},
        {"num_slots", d.num_slots()},
        {"num_antennas", d.num_antennas()},
        {"trajectories", trajectories},
        {"association", association},
        {"w", w},
        {"r", r},
    };
}

Design design_from(const json& doc)
{
    const std::string where = "design";
    FieldReader r(doc, where);
    const int M = r.integer("num_gbs");
    const int K = r.integer("num_uavs");
    const int N = r.integer("num_slots");
    const int na = r.integer("num_antennas");
    if (M < 1 || K < 1 || N < 1 || na < 1)
        throw FormatError(where + ": dimensions must be positive");
    Design d(M, K, N, na);

    const json& trajectories = r.raw("trajectories");
    if (!trajectories.is_array() || trajectories.size() != static_cast<size_t>(K))
        throw FormatError(where + ": field 'trajectories' must hold one list per UAV");
    for (int k = 0; k < K; ++k)
    {
        const json& row = trajectories[k];
        if (!row.is_array() || row.size() != static_cast<size_t>(N))
            throw FormatError(where + ": field 'trajectories' must hold one point per slot");
        for (int n = 0; n < N; ++n)
            d.q(k, n) = r.point(row[n], "trajectories");
    }

    const json& association = r.raw("association");
    if (!association.is_array() || association.size() != static_cast<size_t>(N))
        throw FormatError(where + ": field 'association' must hold one list per slot");
    for (int n = 0; n < N; ++n)
    {
        const json& row = association[n];
        if (!row.is_array() || row.size() != static_cast<size_t>(K))
            throw FormatError(where + ": field 'association' must hold one GBS index per UAV");
        for (int k = 0; k < K; ++k)
        {
            if (!row[k].is_number_integer() || row[k].get<int>() < 0 || row[k].get<int>() >= M)
                throw FormatError(where + ": field 'association' holds an invalid GBS index");
            d.set_serving(k, n, row[k].get<int>());
        }
    }

    const json& w = r.raw("w");
    const json& rc = r.raw("r");
    if (!w.is_array() || w.size() != static_cast<size_t>(N * M * K))
        throw FormatError(where + ": field 'w' must hold N*M*K matrices");
    if (!rc.is_array() || rc.size() != static_cast<size_t>(N * M))
        throw FormatError(where + ": field 'r' must hold N*M matrices");
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < M; ++m)
        {
            d.r(m, n) = matrix_from(rc[n * M + m], na, where + ".r");
            for (int k = 0; k < K; ++k)
                d.w(m, k, n) = matrix_from(w[(n * M + m) * K + k], na, where + ".w");
        }
    r.reject_unknown();
    return d;
}

std::optional<conic::Status> parse_status(const std::string& name)
{
    for (auto s : {conic::Status::Optimal, conic::Status::Infeasible, conic::Status::Unbounded,
                   conic::Status::NumericalFailure})
        if (name == conic::to_string(s))
            return s;
    return std::nullopt;
}

json trace_json(const AoTrace& trace)
{
    json stages = json::array();
    for (const StageRecord& s : trace.stages)
        stages.push_back(json{
            {"outer", s.outer},
            {"stage", to_string(s.stage)},
            {"objective", s.objective},
            {"seconds", s.seconds},
            {"status", conic::to_string(s.status)},
            {"inner_iterations", s.inner_iterations},
            {"trust_radius", s.trust_radius},
        });
    return json{{"outer_iterations", trace.outer_iterations}, {"converged", trace.converged}, {"stages", stages}};
}

AoTrace trace_from(const json& doc)
{
    FieldReader r(doc, "trace");
    AoTrace trace;
    trace.outer_iterations = r.integer("outer_iterations");
    trace.converged = r.boolean("converged");
    const json& stages = r.raw("stages");
    if (!stages.is_array())
        throw FormatError("trace: field 'stages' must be a list");
    for (const json& item : stages)
    {
        FieldReader s(item, "trace.stages");
        StageRecord rec;
        rec.outer = s.integer("outer");
        const std::string stage = s.text("stage");
        bool known = false;
        for (Stage st : {Stage::Initial, Stage::Association, Stage::Beamforming, Stage::Trajectory})
            if (stage == to_string(st))
            {
                rec.stage = st;
                known = true;
            }
        if (!known)
            throw FormatError("trace.stages: unknown stage '" + stage + "'");
        rec.objective = s.number("objective");
        rec.seconds = s.number("seconds");
        const auto status = parse_status(s.text("status"));
        if (!status)
            throw FormatError("trace.stages: unknown status");
        rec.status = *status;
        rec.inner_iterations = s.integer("inner_iterations");
        rec.trust_radius = s.number("trust_radius");
        s.reject_unknown();
        trace.stages.push_back(rec);
    }
    r.reject_unknown();
    return trace;
}

std::string fmt(double value)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

} // namespace

Scenario parse_scenario(const std::string& text)
{
    return scenario_from(parse_strict(text, "scenario"), "scenario");
}

Scenario load_scenario(const std::filesystem::path& path)
{
    return parse_scenario(read_file(path));
}

std::string dump_scenario(const Scenario& scenario)
{
    return scenario_json(scenario).dump(2) + "\n";
}

RunArtifact make_artifact(const Scenario& scenario, const SolveResult& result, std::uint64_t seed)
{
    RunArtifact a;
    a.scenario = scenario;
    a.method = result.method;
    a.status = result.status;
    a.message = result.message;
    a.seed = seed;
    a.design = result.design;
    a.trace = result.trace;
    return a;
}

std::string artifact_to_json(const RunArtifact& a)
{
    json doc{
        {"schema", kArtifactSchema},
        {"method", to_string(a.method)},
        {"status", to_string(a.status)},
        {"message", a.message},
        {"seed", a.seed},
        {"scenario", scenario_json(a.scenario)},
        {"trace", trace_json(a.trace)},
    };
    const bool has_design = a.status == RunStatus::Solved && a.design.num_slots() > 0;
    if (has_design)
    {
        doc["design"] = design_json(a.design);
        json rates = json::array();
        json illumination = json::array();
        for (int n = 0; n < a.design.num_slots(); ++n)
        {
            rates.push_back(sum_rate(a.design, a.scenario, n));
            json row = json::array();
            for (int q = 0; q < a.scenario.num_sensing(); ++q)
                row.push_back(illumination_power(a.design, a.scenario, q, n));
            illumination.push_back(row);
        }
        doc["slot_sum_rates"] = rates;
        doc["illumination"] = illumination;
        doc["objective"] = total_rate(a.design, a.scenario);
    }
    return doc.dump(1) + "\n";
}

RunArtifact artifact_from_json(const std::string& text)
{
    const json doc = parse_strict(text, "artifact");
    FieldReader r(doc, "artifact");
    if (r.text("schema") != kArtifactSchema)
        throw FormatError(std::string("artifact: unsupported schema, expected '") + kArtifactSchema + "'");
    RunArtifact a;
    const std::string method = r.text("method");
    const auto m = parse_method(method);
    if (!m)
        throw FormatError("artifact: unknown method '" + method + "'");
    a.method = *m;
    const std::string status = r.text("status");
    bool known = false;
    for (RunStatus s : {RunStatus::Solved, RunStatus::Infeasible, RunStatus::NumericalFailure})
        if (status == to_string(s))
        {
            a.status = s;
            known = true;
        }
    if (!known)
        throw FormatError("artifact: unknown status '" + status + "'");
    a.message = r.text("message");
    const json& seed = r.raw("seed");
    if (!seed.is_number_unsigned())
        throw FormatError("artifact: field 'seed' must be an unsigned integer");
    a.seed = seed.get<std::uint64_t>();
    a.scenario = scenario_from(r.raw("scenario"), "artifact.scenario");
    a.trace = trace_from(r.raw("trace"));
    if (r.has("design"))
    {
        a.design = design_from(r.raw("design"));
        if (!a.design.same_shape(Design(a.scenario.num_gbs(), a.scenario.num_uavs(), a.scenario.num_slots,
                                        a.scenario.num_antennas)))
            throw FormatError("artifact: design dimensions do not match the scenario");
        r.raw("slot_sum_rates");
        r.raw("illumination");
        r.raw("objective");
    }
    r.reject_unknown();
    return a;
}

void write_artifact(const std::filesystem::path& path, const RunArtifact& artifact)
{
    write_file(path, artifact_to_json(artifact));
}

RunArtifact read_artifact(const std::filesystem::path& path)
{
    return artifact_from_json(read_file(path));
}

void write_slot_table(std::ostream& os, const Design& d, const Scenario& s)
{
    os << "slot,sum_rate_bps_hz,min_illumination_dbw";
    for (int k = 1; k <= d.num_uavs(); ++k)
        os << ",uav" << k << "_x,uav" << k << "_y,uav" << k << "_gbs,uav" << k << "_rate_bps_hz";
    os << '\n';
    for (int n = 0; n < d.num_slots(); ++n)
    {
        double worst = std::numeric_limits<double>::infinity();
        for (int q = 0; q < s.num_sensing(); ++q)
            worst = std::min(worst, illumination_power(d, s, q, n));
        os << n + 1 << ',' << fmt(sum_rate(d, s, n)) << ',' << fmt(watts_to_dbw(worst));
        for (int k = 0; k < d.num_uavs(); ++k)
        {
            const int m = d.serving(k, n);
            os << ',' << fmt(d.q(k, n).x()) << ',' << fmt(d.q(k, n).y()) << ',' << m + 1 << ','
               << fmt(rate(d, s, m, k, n));
        }
        os << '\n';
    }
}

void write_sweep_table(std::ostream& os, const SweepResult& sweep)
{
    os << "gamma_dbw,method,feasible,avg_sum_rate_bps_hz,status\n";
    for (const SweepPoint& p : sweep.points)
    {
        os << fmt(p.gamma_dbw) << ',' << to_string(p.method) << ',' << (p.feasible ? 1 : 0) << ',';
        if (p.feasible)
            os << fmt(p.average_sum_rate);
        os << ',' << to_string(p.status) << '\n';
    }
}

BeampatternGrid beampattern(const Design& design, const Scenario& scenario, const GridSpec& spec)
{
    if (spec.slot < 0 || spec.slot >= design.num_slots())
        throw InvalidArgument("beampattern: slot " + std::to_string(spec.slot + 1) + " is out of range 1.." +
                              std::to_string(design.num_slots()));
    if (spec.nx < 1 || spec.ny < 1)
        throw InvalidArgument("beampattern: grid needs at least one point per axis");
    if (!(spec.altitude > 0.0))
        throw InvalidArgument("beampattern: altitude must be > 0");

    BeampatternGrid g;
    g.spec = spec;
    auto axis = [](double lo, double hi, int count) {
        std::vector<double> out(count);
        for (int i = 0; i < count; ++i)
            out[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
        return out;
    };
    g.xs = axis(spec.x_min, spec.x_max, spec.nx);
    g.ys = axis(spec.y_min, spec.y_max, spec.ny);
    g.power.resize(static_cast<size_t>(spec.nx) * spec.ny);
    for_each_index(Exec::Parallel, spec.ny, [&](int iy) {
        for (int ix = 0; ix < spec.nx; ++ix)
            g.power[iy * spec.nx + ix] =
                illumination_at(design, scenario, Vec2(g.xs[ix], g.ys[iy]), spec.altitude, spec.slot);
    });
    for (int k = 0; k < design.num_uavs(); ++k)
    {
        g.uav_positions.push_back(design.q(k, spec.slot));
        g.uav_rates.push_back(rate(design, scenario, design.serving(k, spec.slot), k, spec.slot));
    }
    return g;
}

void write_beampattern(std::ostream& os, const BeampatternGrid& g)
{
    os << "kind,x,y,power_dbw,rate_bps_hz\n";
    for (int iy = 0; iy < g.spec.ny; ++iy)
        for (int ix = 0; ix < g.spec.nx; ++ix)
            os << "grid," << fmt(g.xs[ix]) << ',' << fmt(g.ys[iy]) << ','
               << fmt(watts_to_dbw(g.power[iy * g.spec.nx + ix])) << ",\n";
    for (size_t k = 0; k < g.uav_positions.size(); ++k)
        os << "uav" << k + 1 << ',' << fmt(g.uav_positions[k].x()) << ',' << fmt(g.uav_positions[k].y()) << ",,"
           << fmt(g.uav_rates[k]) << '\n';
}

} // namespace netisac::io

#include "netisac/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace netisac
{

double aod(const Vec2& q, const Vec2& u, double h_alt)
{
    if (!std::isfinite(q.x()) || !std::isfinite(q.y()) || !std::isfinite(u.x()) ||
        !std::isfinite(u.y()) || !std::isfinite(h_alt))
        throw InvalidArgument("aod: non-finite input");
    if (!(h_alt > 0.0))
        throw InvalidArgument("aod: altitude must be positive");
    // atan2 keeps full relative accuracy near 0 where arccos does not.
    return std::atan2((q - u).norm(), h_alt);
}

double cos_aod(const Vec2& q, const Vec2& u, double h_alt)
{
    return h_alt / std::sqrt((q - u).squaredNorm() + h_alt * h_alt);
}

CVector steering_vector(double cos_theta, int num_antennas, double spacing_ratio)
{
    if (!(std::abs(cos_theta) <= 1.0))
        throw InvalidArgument("steering_vector: |cos_theta| must be <= 1");
    CVector a(num_antennas);
    const double step = 2.0 * kPi * spacing_ratio * cos_theta;
    for (int p = 0; p < num_antennas; ++p)
        a[p] = std::polar(1.0, step * p);
    return a;
}

double path_gain(const Scenario& s, const Vec2& q, const Vec2& u, double h_alt)
{
    return s.kappa / ((q - u).squaredNorm() + h_alt * h_alt);
}

CVector channel_vector(const Scenario& s, int m, const Vec2& q_k, double h_k)
{
    const Vec2& u = s.gbs_positions.at(m);
    const double beta = path_gain(s, q_k, u, h_k);
    return std::sqrt(beta) *
           steering_vector(cos_aod(q_k, u, h_k), s.num_antennas, s.antenna_spacing_over_wavelength);
}

double quad_form(const CMatrix& x, const CVector& v)
{
    return v.dot(x * v).real();
}

double min_eigenvalue(const CMatrix& x)
{
    if (x.size() == 0)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(x, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
}

bool is_psd(const CMatrix& x, double tol_rel)
{
    const double tr = x.trace().real();
    return min_eigenvalue(x) >= -tol_rel * std::max(1.0, tr);
}

namespace
{

/// Clamps round-off negatives of v^H X v; rejects those beyond the PSD
/// tolerance, -1e-9 |v|^2 max(1, |X|).
double checked_power(double value, double v_norm2, const CMatrix& x)
{
    if (value >= 0.0)
        return value;
    if (value < -1e-9 * v_norm2 * std::max(1.0, x.norm()))
        throw std::domain_error("negative quadratic form: covariance is not PSD");
    return 0.0;
}

} // namespace

LinkBudget link_budget(const Design& d, const Scenario& s, int m, int k, int n)
{
    const CVector h = channel_vector(s, m, d.q(k, n), s.uav_altitudes[k]);
    const double scale = h.squaredNorm();
    LinkBudget out;
    out.signal = checked_power(quad_form(d.w(m, k, n), h), scale, d.w(m, k, n));
    double interference = 0.0;
    for (int l = 0; l < d.num_gbs(); ++l)
    {
        for (int i = 0; i < d.num_uavs(); ++i)
        {
            if (l == m && i == k)
                continue;
            interference += checked_power(quad_form(d.w(l, i, n), h), scale, d.w(l, i, n));
        }
        interference += checked_power(quad_form(d.r(l, n), h), scale, d.r(l, n));
    }
    out.interference_plus_noise = interference + s.noise_power;
    return out;
}

double sinr(const Design& d, const Scenario& s, int m, int k, int n)
{
    const LinkBudget b = link_budget(d, s, m, k, n);
    return b.signal / b.interference_plus_noise;
}

double rate(const Design& d, const Scenario& s, int m, int k, int n)
{
    return std::log2(1.0 + sinr(d, s, m, k, n));
}

double sum_rate(const Design& d, const Scenario& s, int n)
{
    double total = 0.0;
    for (int k = 0; k < d.num_uavs(); ++k)
        total += rate(d, s, d.serving(k, n), k, n);
    return total;
}

double total_rate(const Design& d, const Scenario& s)
{
    double total = 0.0;
    for (int n = 0; n < d.num_slots(); ++n)
        total += sum_rate(d, s, n);
    return total;
}

double illumination_at(const Design& d, const Scenario& s, const Vec2& point, double altitude,
                       int n)
{
    double zeta = 0.0;
    for (int l = 0; l < d.num_gbs(); ++l)
    {
        const Vec2& u = s.gbs_positions[l];
        const double dist2 = (u - point).squaredNorm() + altitude * altitude;
        const CVector a = steering_vector(altitude / std::sqrt(dist2), s.num_antennas,
                                          s.antenna_spacing_over_wavelength);
        const CMatrix x = d.transmit_covariance(l, n);
        zeta += checked_power(quad_form(x, a), a.squaredNorm(), x) / dist2;
    }
    return zeta;
}

double illumination_power(const Design& d, const Scenario& s, int q, int n)
{
    return illumination_at(d, s, s.sensing_points.at(q), s.sensing_altitude, n);
}

const char* to_string(ConstraintFamily f)
{
    switch (f)
    {
    case ConstraintFamily::Sensing: return "sensing";
    case ConstraintFamily::Power: return "power";
    case ConstraintFamily::Psd: return "psd";
    case ConstraintFamily::Endpoint: return "endpoint";
    case ConstraintFamily::Speed: return "speed";
    case ConstraintFamily::Collision: return "collision";
    case ConstraintFamily::Association: return "association";
    }
    return "unknown";
}

std::optional<Violation> ViolationReport::find(ConstraintFamily family) const
{
    for (const auto& v : worst)
        if (v.family == family)
            return v;
    return std::nullopt;
}

std::string ViolationReport::summary() const
{
    if (worst.empty())
        return "no violations";
    std::ostringstream os;
    for (const auto& v : worst)
        os << to_string(v.family) << "[index " << v.index << ", slot " << v.slot
           << "] magnitude " << v.magnitude << "; ";
    return os.str();
}

namespace
{

class WorstTracker
{
public:
    void offer(ConstraintFamily family, int index, int slot, double magnitude)
    {
        for (auto& v : report_.worst)
        {
            if (v.family == family)
            {
                if (magnitude > v.magnitude)
                    v = {family, index, slot, magnitude};
                return;
            }
        }
        report_.worst.push_back({family, index, slot, magnitude});
    }

    ViolationReport take() { return std::move(report_); }

private:
    ViolationReport report_;
};

} // namespace

ViolationReport check_constraints(const Design& d, const Scenario& s, const ConstraintTolerances& tol)
{
    WorstTracker worst;
    const int M = d.num_gbs();
    const int K = d.num_uavs();
    const int N = d.num_slots();

    for (int n = 0; n < N; ++n)
    {
        for (int k = 0; k < K; ++k)
        {
            const int m = d.serving(k, n);
            if (m < 0 || m >= M)
                worst.offer(ConstraintFamily::Association, k, n, 1.0);
        }
        for (int m = 0; m < M; ++m)
        {
            double power = d.r(m, n).trace().real();
            for (int k = 0; k < K; ++k)
                power += d.w(m, k, n).trace().real();
            if (power > s.p_max * (1.0 + tol.power_rel))
                worst.offer(ConstraintFamily::Power, m, n, power - s.p_max);

            auto check_psd = [&](const CMatrix& x) {
                const double tr = x.trace().real();
                const double lo = min_eigenvalue(x);
                if (lo < -tol.psd_rel * std::max(1.0, tr))
                    worst.offer(ConstraintFamily::Psd, m, n, -lo);
            };
            check_psd(d.r(m, n));
            for (int k = 0; k < K; ++k)
                check_psd(d.w(m, k, n));
        }
        for (int q = 0; q < s.num_sensing(); ++q)
        {
            const double zeta = illumination_power(d, s, q, n);
            if (zeta < s.gamma * (1.0 - tol.sensing_rel))
                worst.offer(ConstraintFamily::Sensing, q, n, s.gamma - zeta);
        }
    }

    for (int k = 0; k < K; ++k)
    {
        const double e0 = (d.q(k, 0) - s.uav_initial[k]).norm();
        if (e0 > tol.endpoint_abs)
            worst.offer(ConstraintFamily::Endpoint, k, 0, e0);
        const double e1 = (d.q(k, N - 1) - s.uav_final[k]).norm();
        if (e1 > tol.endpoint_abs)
            worst.offer(ConstraintFamily::Endpoint, k, N - 1, e1);

        const double step = s.max_step();
        for (int n = 0; n + 1 < N; ++n)
        {
            const double dist = (d.q(k, n + 1) - d.q(k, n)).norm();
            if (dist > step * (1.0 + tol.speed_rel) + tol.endpoint_abs)
                worst.offer(ConstraintFamily::Speed, k, n, dist - step);
        }
    }

    const double d2 = s.d_min * s.d_min;
    for (int n = 0; n < N; ++n)
        for (int k = 0; k < K; ++k)
            for (int i = k + 1; i < K; ++i)
            {
                const double dh = s.uav_altitudes[k] - s.uav_altitudes[i];
                const double sep = (d.q(k, n) - d.q(i, n)).squaredNorm() + dh * dh;
                if (sep < d2 * (1.0 - tol.collision_rel))
                    worst.offer(ConstraintFamily::Collision, k * K + i, n, d2 - sep);
            }

    return worst.take();
}

} // namespace netisac

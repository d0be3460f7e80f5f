#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netisac/design.hpp"

namespace netisac
{

/// Angle of departure from a ground array at `u` to a point at horizontal
/// position `q` and altitude `h_alt`.
double aod(const Vec2& q, const Vec2& u, double h_alt);

/// cos(aod) = h / sqrt(|q-u|^2 + h^2), computed without the arccos round trip.
double cos_aod(const Vec2& q, const Vec2& u, double h_alt);

/// ULA response: element p is exp(j 2 pi (d/lambda) p cos_theta).
CVector steering_vector(double cos_theta, int num_antennas, double spacing_ratio);

/// Large-scale gain kappa / (|q-u|^2 + h^2).
double path_gain(const Scenario& scenario, const Vec2& q, const Vec2& u, double h_alt);

/// h_{m,k} for a UAV at horizontal position q_k and altitude h_k.
CVector channel_vector(const Scenario& scenario, int m, const Vec2& q_k, double h_k);

/// Re(v^H X v); X is assumed Hermitian.
double quad_form(const CMatrix& x, const CVector& v);

/// True when min eig(X) >= -tol_rel * max(1, tr X).
bool is_psd(const CMatrix& x, double tol_rel = 1e-9);
double min_eigenvalue(const CMatrix& x);

/// Signal and interference-plus-noise power seen by UAV k at slot n when
/// served by GBS m.
struct LinkBudget
{
    double signal = 0.0;
    double interference_plus_noise = 0.0;
};

LinkBudget link_budget(const Design& design, const Scenario& scenario, int m, int k, int n);

double sinr(const Design& design, const Scenario& scenario, int m, int k, int n);

/// r_{m,k}[n] = log2(1 + sinr).
double rate(const Design& design, const Scenario& scenario, int m, int k, int n);

/// r[n]: sum of rates of associated pairs only.
double sum_rate(const Design& design, const Scenario& scenario, int n);

/// sum_n r[n].
double total_rate(const Design& design, const Scenario& scenario);

/// zeta_q[n], the illumination power at sensing point q.
double illumination_power(const Design& design, const Scenario& scenario, int q, int n);

/// Illumination power at an arbitrary point (x, y, altitude).
double illumination_at(const Design& design, const Scenario& scenario, const Vec2& point,
                       double altitude, int n);

enum class ConstraintFamily
{
    Sensing,
    Power,
    Psd,
    Endpoint,
    Speed,
    Collision,
    Association,
};

const char* to_string(ConstraintFamily family);

struct Violation
{
    ConstraintFamily family;
    int index = 0; ///< GBS, UAV, sensing point or UAV pair (k*K+i), by family
    int slot = 0;
    double magnitude = 0.0;
};

/// Worst violation per constraint family; empty when the design is feasible.
struct ViolationReport
{
    std::vector<Violation> worst;

    bool empty() const { return worst.empty(); }
    std::optional<Violation> find(ConstraintFamily family) const;
    std::string summary() const;
};

struct ConstraintTolerances
{
    double power_rel = 1e-6;
    double sensing_rel = 1e-6;
    double psd_rel = 1e-9;
    double endpoint_abs = 1e-9;
    double speed_rel = 1e-9;
    double collision_rel = 1e-9;
};

ViolationReport check_constraints(const Design& design, const Scenario& scenario,
                                  const ConstraintTolerances& tol = {});

} // namespace netisac

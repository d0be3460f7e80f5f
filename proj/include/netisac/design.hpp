#pragma once

#include <vector>

#include "netisac/scenario.hpp"

namespace netisac
{

/// Per-slot decision state. Covariances are stored flat; slots are 0-indexed.
///
/// Association is kept as the serving GBS of each (UAV, slot), so every UAV is
/// associated with exactly one GBS by construction.
class Design
{
public:
    Design() = default;
    Design(int num_gbs, int num_uavs, int num_slots, int num_antennas);

    /// Zero covariances, straight constant-speed trajectories and
    /// nearest-GBS association.
    static Design straight_flight(const Scenario& scenario);

    int num_gbs() const { return num_gbs_; }
    int num_uavs() const { return num_uavs_; }
    int num_slots() const { return num_slots_; }
    int num_antennas() const { return num_antennas_; }

    CMatrix& w(int m, int k, int n) { return w_cov_[w_index(m, k, n)]; }
    const CMatrix& w(int m, int k, int n) const { return w_cov_[w_index(m, k, n)]; }
    CMatrix& r(int m, int n) { return r_cov_[r_index(m, n)]; }
    const CMatrix& r(int m, int n) const { return r_cov_[r_index(m, n)]; }

    Vec2& q(int k, int n) { return trajectories_[k * num_slots_ + n]; }
    const Vec2& q(int k, int n) const { return trajectories_[k * num_slots_ + n]; }

    int serving(int k, int n) const { return serving_[n * num_uavs_ + k]; }
    void set_serving(int k, int n, int m) { serving_[n * num_uavs_ + k] = m; }
    int alpha(int m, int k, int n) const { return serving(k, n) == m ? 1 : 0; }

    /// X_m[n] = sum_k W_{m,k}[n] + R_m[n].
    CMatrix transmit_covariance(int m, int n) const;

    /// Folds W_{m,k}[n] of unassociated pairs into R_m[n]. Leaves every
    /// transmit covariance, and hence every rate and illumination, unchanged.
    void fold_unassociated();

    bool same_shape(const Design& other) const;

private:
    int w_index(int m, int k, int n) const { return (n * num_gbs_ + m) * num_uavs_ + k; }
    int r_index(int m, int n) const { return n * num_gbs_ + m; }

    int num_gbs_ = 0;
    int num_uavs_ = 0;
    int num_slots_ = 0;
    int num_antennas_ = 0;
    std::vector<CMatrix> w_cov_;
    std::vector<CMatrix> r_cov_;
    std::vector<Vec2> trajectories_;
    std::vector<int> serving_;
};

} // namespace netisac

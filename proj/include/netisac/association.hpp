#pragma once

#include "netisac/design.hpp"
#include "netisac/parallel.hpp"

namespace netisac
{

/// Serving GBS of UAV k at slot n that maximizes r_{m,k}[n] under the current
/// covariances and trajectory; ties go to the smallest index.
int best_serving_gbs(const Design& design, const Scenario& scenario, int k, int n);

/// Sets every (k, n) to its best serving GBS. Rates r_{m,k}[n] do not depend on
/// the association, so the per-UAV choice is jointly optimal.
void optimize_association(Design& design, const Scenario& scenario, Exec exec = Exec::Parallel);

} // namespace netisac

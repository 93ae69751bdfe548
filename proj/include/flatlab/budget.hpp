#pragma once

#include <vector>

#include "flatlab/threads.hpp"
#include "flatlab/tunnel.hpp"

namespace flatlab {

struct Heights {
    double h = 0.0;   ///< sqrt(2 rho diam - rho^2)
    double h0 = 0.0;  ///< sqrt(2 pi rho diam + 8 rho)
};

/// Closed-form comparison heights; rho must be positive and at most 2*diam.
Heights heights(double rho, double diam);

/// Volume budget bounding the flat distance between a host with one tunnel and
/// the same host with the matching chord thread, plus the companion
/// Hausdorff-distance bound h0 + 2 pi rho + h.
struct FillingBudget {
    double rho = 0, rho0 = 0, L = 0;
    double diam = 0, vol = 0;
    double h = 0, h0 = 0;
    double pipe_vol = 0;     ///< half-rotated tunnel, one dimension up
    double slice_vol = 0;    ///< equatorial pipe slice = tunnel volume
    double vol_bottom = 0;   ///< h0 * (vol + slice)
    double vol_mid = 0;      ///< rho * vol + pipe
    double vol_top = 0;      ///< h * vol
    double dF_bound = 0;     ///< vol_bottom + vol_mid + vol_top
    double dGH_bound = 0;    ///< h0 + 2 pi rho + h
};

FillingBudget filling_budget(const TunnelProfile& profile, double vol, double diam);

struct IteratedOptions {
    double rho0_factor = 0.5;  ///< neck radius = factor * system tunnel radius
    ProfileOptions profile = coarse_profile_options();
};

/// Budgets for replacing every tunnel of a thread system one at a time,
/// chained by the triangle inequality.  Host volume per step counts the
/// not-yet-replaced tunnels; host diameter is pi.
struct IteratedBudget {
    double eps = 0;
    int count = 0;         ///< net size N
    int thread_count = 0;  ///< K = N(N-1)/2
    std::vector<FillingBudget> per_step;
    double total_dF = 0;
    double total_dGH = 0;
    double fitted_c1 = 0;  ///< max_k tunnel volume / rho^{m-1}
    double fitted_c2 = 0;  ///< sum_k tunnel volume / eps^{m-1}
    double fitted_c3 = 0;  ///< max_k per-step dF / rho
};

IteratedBudget iterated_budget(const ThreadSystem& threads, const IteratedOptions& opts = {});

}  // namespace flatlab

#include "flatlab/budget.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "flatlab/errors.hpp"

namespace flatlab {

Heights heights(double rho, double diam) {
    if (!(rho > 0.0)) throw ValidationError("heights needs rho > 0");
    if (!(diam > 0.0)) throw ValidationError("heights needs diam > 0");
    if (rho > 2.0 * diam)
        throw ValidationError("height h would be imaginary: rho = " + std::to_string(rho) +
                              " exceeds 2 * diam = " + std::to_string(2.0 * diam));
    Heights out;
    out.h = std::sqrt(2.0 * rho * diam - rho * rho);
    out.h0 = std::sqrt(2.0 * M_PI * rho * diam + 8.0 * rho);
    return out;
}

namespace {

/// Half rotation of the profile one dimension up: (omega_m / 2) * int r^m ds.
double pipe_volume(const TunnelProfile& profile) {
    const double ring = sphere_area(profile.m);
    double integral = 0.0;
    for (std::size_t i = 1; i < profile.samples.size(); ++i) {
        const auto& a = profile.samples[i - 1];
        const auto& b = profile.samples[i];
        integral += 0.5 * (std::pow(a.r, profile.m) + std::pow(b.r, profile.m)) * (b.s - a.s);
    }
    return 0.5 * ring * integral;
}

}  // namespace

FillingBudget filling_budget(const TunnelProfile& profile, double vol, double diam) {
    if (!(vol > 0.0)) throw ValidationError("filling_budget needs vol > 0");
    if (!(profile.rho < diam)) throw ValidationError("filling_budget needs profile rho < diam");
    FillingBudget b;
    b.rho = profile.rho;
    b.rho0 = profile.rho0;
    b.L = profile.length;
    b.diam = diam;
    b.vol = vol;
    const Heights ht = heights(profile.rho, diam);
    b.h = ht.h;
    b.h0 = ht.h0;
    b.pipe_vol = pipe_volume(profile);
    b.slice_vol = profile_volume(profile);
    b.vol_bottom = b.h0 * (vol + b.slice_vol);
    b.vol_mid = b.rho * vol + b.pipe_vol;
    b.vol_top = b.h * vol;
    b.dF_bound = b.vol_bottom + b.vol_mid + b.vol_top;
    b.dGH_bound = b.h0 + 2.0 * M_PI * b.rho + b.h;
    return b;
}

IteratedBudget iterated_budget(const ThreadSystem& threads, const IteratedOptions& opts) {
    IteratedBudget out;
    out.eps = threads.eps();
    out.count = threads.count();
    out.thread_count = threads.thread_count();
    const int m = threads.m();
    const double rho = threads.rho;
    const double rho0 = opts.rho0_factor * rho;
    if (!(rho0 > 0.0) || !(rho0 < rho))
        throw ValidationError("iterated_budget rho0_factor must lie in (0, 1)");
    const double host_diam = M_PI;
    const double sphere_vol = sphere_area(m);

    // Tunnel profiles per thread, then suffix volume sums: the host at step k
    // still carries every tunnel that has not been replaced yet.
    std::vector<TunnelProfile> profiles;
    profiles.reserve(threads.pairs.size());
    for (const auto& t : threads.pairs)
        profiles.push_back(generate_profile(m, rho0, rho, t.length, opts.profile));

    std::vector<double> tunnel_vol(profiles.size());
    for (std::size_t k = 0; k < profiles.size(); ++k) tunnel_vol[k] = profile_volume(profiles[k]);
    std::vector<double> suffix(profiles.size() + 1, 0.0);
    for (std::size_t k = profiles.size(); k-- > 0;) suffix[k] = suffix[k + 1] + tunnel_vol[k];

    double sum_df = 0.0, sum_dgh = 0.0, c1 = 0.0, c3 = 0.0;
    for (std::size_t k = 0; k < profiles.size(); ++k) {
        const double host_vol = sphere_vol + suffix[k + 1];
        FillingBudget b = filling_budget(profiles[k], host_vol, host_diam);
        sum_df += b.dF_bound;
        sum_dgh += b.dGH_bound;
        c1 = std::max(c1, tunnel_vol[k] / std::pow(rho, m - 1));
        c3 = std::max(c3, b.dF_bound / rho);
        out.per_step.push_back(std::move(b));
    }
    out.total_dF = sum_df;
    out.total_dGH = sum_dgh;
    out.fitted_c1 = c1;
    out.fitted_c2 = suffix[0] / std::pow(out.eps, m - 1);
    out.fitted_c3 = c3;
    return out;
}

}  // namespace flatlab

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace flatlab {

/// Deterministic random source.  Doubles are produced from the raw 64-bit
/// stream (not through std:: distributions) so that identical seeds give
/// identical artifacts everywhere.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Standard normal (Box-Muller, cached pair).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0x1.0p-60) u1 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * M_PI * u2;
        spare_ = mag * std::sin(ang);
        have_spare_ = true;
        return mag * std::cos(ang);
    }

    /// Uniform point on S^m as a unit vector in R^{m+1} (normalized Gaussians).
    std::vector<double> unit_vector(int ambient_dim) {
        std::vector<double> v(ambient_dim);
        while (true) {
            double n2 = 0.0;
            for (auto& c : v) {
                c = normal();
                n2 += c * c;
            }
            if (n2 > 1e-24) {
                const double inv = 1.0 / std::sqrt(n2);
                for (auto& c : v) c *= inv;
                return v;
            }
        }
    }

    std::uint64_t raw() { return gen_(); }

  private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace flatlab

// SPDX-License-Identifier: Apache-2.0
//
// Measurement-noise model: i.i.d. zero-mean Gaussian perturbations of the
// real and imaginary parts, each with standard deviation alpha times the
// node-average of |H|. Draws come from an explicitly seeded mt19937_64
// through a fixed Box-Muller transform, so a (field, alpha, seed) triple
// replays bit-identically and scaling the field scales the output exactly.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "admrec/grid.hpp"

namespace admrec {
namespace detail {

class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // uniform in (0,1]: avoids log(0)
        const double u1 = (static_cast<double>(rng_()) + 1.0) * 0x1p-64;
        const double u2 = static_cast<double>(rng_()) * 0x1p-64;
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

  private:
    std::mt19937_64 rng_;
    bool have_spare_{false};
    double spare_{0.0};
};

}  // namespace detail

inline double mean_abs(const ComplexScalarField& H) {
    double s = 0.0;
    for (const cplx& z : H.v) s += std::abs(z);
    return s / static_cast<double>(H.v.size());
}

/// Returns H plus i.i.d. complex Gaussian noise with per-part standard
/// deviation alpha * mean|H|. alpha = 0 returns the input unchanged.
inline ComplexScalarField add_noise(const ComplexScalarField& H, double alpha,
                                    std::uint64_t seed) {
    if (alpha < 0.0) throw std::invalid_argument("add_noise: alpha must be >= 0");
    if (alpha == 0.0) return H;
    const double level = alpha * mean_abs(H);
    if (!(level > 0.0))
        throw std::invalid_argument("add_noise: field is identically zero, noise level undefined");
    detail::GaussianStream gauss(seed);
    ComplexScalarField out(H.grid);
    for (std::size_t k = 0; k < H.v.size(); ++k) {
        const double dre = level * gauss.next();
        const double dim = level * gauss.next();
        out.v[k] = H.v[k] + cplx(dre, dim);
    }
    return out;
}

}  // namespace admrec

// SPDX-License-Identifier: Apache-2.0
//
// Reconstruction quality measures: relative L2 error against ground truth
// (grid-weighted; the uniform h^2 weight cancels in the ratio) and
// fixed-y cross sections for profile comparisons.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "admrec/grid.hpp"
#include "admrec/reconstruction.hpp"

namespace admrec {

/// ||a - b||_2 / ||b||_2 over the masked nodes (all nodes when mask is
/// null). Rejects a truth that vanishes on the mask.
inline double relative_l2(const std::vector<cplx>& recon, const std::vector<cplx>& truth,
                          const std::vector<std::uint8_t>* mask = nullptr) {
    if (recon.size() != truth.size())
        throw std::invalid_argument("relative_l2: size mismatch");
    if (mask && mask->size() != truth.size())
        throw std::invalid_argument("relative_l2: mask size mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < truth.size(); ++k) {
        if (mask && !(*mask)[k]) continue;
        num += std::norm(recon[k] - truth[k]);
        den += std::norm(truth[k]);
    }
    if (!(den > 0.0))
        throw std::invalid_argument("relative_l2: truth is zero on the comparison domain");
    return std::sqrt(num / den);
}

inline double relative_l2(const ComplexScalarField& recon, const ComplexScalarField& truth,
                          const AdmissibleMask* mask = nullptr) {
    require_same_grid(recon.grid, truth.grid, "relative_l2");
    if (mask) require_same_grid(mask->grid, truth.grid, "relative_l2");
    return relative_l2(recon.v, truth.v, mask ? &mask->inside : nullptr);
}

inline double relative_l2(const RealScalarField& recon, const RealScalarField& truth,
                          const std::vector<std::uint8_t>* mask = nullptr) {
    if (!(recon.grid == truth.grid))
        throw std::invalid_argument("relative_l2: fields live on different grids");
    std::vector<cplx> a(recon.v.begin(), recon.v.end()), b(truth.v.begin(), truth.v.end());
    return relative_l2(a, b, mask);
}

/// Node values along a horizontal grid line y = const.
struct CrossSection {
    double y{0.0};
    std::vector<double> x;
    std::vector<cplx> values;
};

inline CrossSection cross_section(const ComplexScalarField& f, double y) {
    const Grid2D& g = f.grid;
    int jhit = -1;
    for (int j = 0; j < g.n; ++j)
        if (std::abs(g.y(j) - y) <= 1e-12) {
            jhit = j;
            break;
        }
    if (jhit < 0)
        throw std::invalid_argument("cross_section: line y = " + std::to_string(y) +
                                    " does not pass through grid nodes");
    CrossSection cs;
    cs.y = g.y(jhit);
    cs.x.resize(g.n);
    cs.values.resize(g.n);
    for (int i = 0; i < g.n; ++i) {
        cs.x[i] = g.x(i);
        cs.values[i] = f.at(i, jhit);
    }
    return cs;
}

/// One error-table row in the shape the experiment reports use.
struct CoefficientError {
    std::string coefficient;
    double noiseless_error{0.0};
    double noisy_error{-1.0};  ///< negative when no noisy run happened
    double mask_fraction{1.0};
};

inline void to_json(nlohmann::json& j, const CoefficientError& e) {
    j = nlohmann::json{{"coefficient", e.coefficient},
                       {"noiseless_error", e.noiseless_error},
                       {"mask_fraction", e.mask_fraction}};
    if (e.noisy_error >= 0.0)
        j["noisy_error"] = e.noisy_error;
    else
        j["noisy_error"] = nullptr;
}

}  // namespace admrec

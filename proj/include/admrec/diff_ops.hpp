// SPDX-License-Identifier: Apache-2.0
//
// Finite-difference first derivatives on the node grid: gradient, the 2-D
// curl pair and divergence. Central differences at interior nodes, 3-point
// one-sided differences on the boundary ring; both O(h^2). No ghost nodes.

#pragma once

#include <vector>

#include "admrec/grid.hpp"

namespace admrec {
namespace detail {

// d/dx along grid rows. Central inside, one-sided at i = 0 and i = n-1.
inline void ddx(const Grid2D& g, const std::vector<cplx>& f, std::vector<cplx>& out) {
    const int n = g.n;
    const double inv2h = 1.0 / (2.0 * g.h);
    for (int j = 0; j < n; ++j) {
        const std::size_t row = g.index(0, j);
        out[row] = (-3.0 * f[row] + 4.0 * f[row + 1] - f[row + 2]) * inv2h;
        for (int i = 1; i < n - 1; ++i)
            out[row + i] = (f[row + i + 1] - f[row + i - 1]) * inv2h;
        out[row + n - 1] = (3.0 * f[row + n - 1] - 4.0 * f[row + n - 2] + f[row + n - 3]) * inv2h;
    }
}

// d/dy along grid columns.
inline void ddy(const Grid2D& g, const std::vector<cplx>& f, std::vector<cplx>& out) {
    const int n = g.n;
    const std::size_t s = n;  // stride between consecutive j
    const double inv2h = 1.0 / (2.0 * g.h);
    for (int i = 0; i < n; ++i) {
        out[g.index(i, 0)] =
            (-3.0 * f[g.index(i, 0)] + 4.0 * f[g.index(i, 1)] - f[g.index(i, 2)]) * inv2h;
        for (int j = 1; j < n - 1; ++j) {
            const std::size_t k = g.index(i, j);
            out[k] = (f[k + s] - f[k - s]) * inv2h;
        }
        out[g.index(i, n - 1)] = (3.0 * f[g.index(i, n - 1)] - 4.0 * f[g.index(i, n - 2)] +
                                  f[g.index(i, n - 3)]) *
                                 inv2h;
    }
}

}  // namespace detail

/// grad f = (df/dx, df/dy).
inline ComplexVectorField gradient(const ComplexScalarField& f) {
    ComplexVectorField out(f.grid);
    detail::ddx(f.grid, f.v, out.x);
    detail::ddy(f.grid, f.v, out.y);
    return out;
}

/// Vector curl of a scalar: (-dH/dy, dH/dx). Equals J * gradient(H) with
/// J = [[0,-1],[1,0]] by construction (same 1-D stencils).
inline ComplexVectorField vector_curl(const ComplexScalarField& H) {
    ComplexVectorField out(H.grid);
    detail::ddy(H.grid, H.v, out.x);
    for (auto& c : out.x) c = -c;
    detail::ddx(H.grid, H.v, out.y);
    return out;
}

/// Scalar curl of a vector: dF2/dx - dF1/dy.
inline ComplexScalarField scalar_curl(const ComplexVectorField& F) {
    ComplexScalarField out(F.grid);
    std::vector<cplx> tmp(F.grid.size());
    detail::ddx(F.grid, F.y, out.v);
    detail::ddy(F.grid, F.x, tmp);
    for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] -= tmp[k];
    return out;
}

/// div F = dF1/dx + dF2/dy.
inline ComplexScalarField divergence(const ComplexVectorField& F) {
    ComplexScalarField out(F.grid);
    std::vector<cplx> tmp(F.grid.size());
    detail::ddx(F.grid, F.x, out.v);
    detail::ddy(F.grid, F.y, tmp);
    for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] += tmp[k];
    return out;
}

}  // namespace admrec

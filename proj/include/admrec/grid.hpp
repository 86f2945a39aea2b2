// SPDX-License-Identifier: Apache-2.0
//
// Uniform grid on [-1,1]^2 and the node-sampled field containers used by
// every other header: complex scalar fields (magnetic field, Cramer
// coefficients), complex 2-vector fields (electric field, curls) and
// complex symmetric 2x2 tensor fields (admittivity and friends).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace admrec {

using cplx = std::complex<double>;

/// Uniform tensor-product grid of (N+1)x(N+1) nodes on [-1,1]^2.
/// Nodes are addressed by (i,j) with x = -1 + i*h, y = -1 + j*h, and fields
/// store them row-major by y then x: flat index = j*n + i.
struct Grid2D {
    int n{0};       ///< nodes per axis, N+1
    double h{0.0};  ///< spacing, 2/N

    [[nodiscard]] int cells() const { return n - 1; }
    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(n) * n; }
    [[nodiscard]] std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * n + i;
    }
    [[nodiscard]] double x(int i) const { return -1.0 + i * h; }
    [[nodiscard]] double y(int j) const { return -1.0 + j * h; }
    [[nodiscard]] bool on_boundary(int i, int j) const {
        return i == 0 || j == 0 || i == n - 1 || j == n - 1;
    }

    friend bool operator==(const Grid2D& a, const Grid2D& b) = default;
};

/// Builds the grid for an even subdivision count N >= 4. Even N keeps the
/// cross-section lines y = -0.5 and y = 0 on grid nodes.
inline Grid2D make_grid(int N) {
    if (N < 4) throw std::invalid_argument("make_grid: N must be >= 4, got " + std::to_string(N));
    if (N % 2 != 0) throw std::invalid_argument("make_grid: N must be even, got " + std::to_string(N));
    return Grid2D{N + 1, 2.0 / N};
}

inline void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what) {
    if (!(a == b)) throw std::invalid_argument(std::string(what) + ": fields live on different grids");
}

/// Complex scalar sampled at every node.
struct ComplexScalarField {
    Grid2D grid;
    std::vector<cplx> v;

    ComplexScalarField() = default;
    explicit ComplexScalarField(const Grid2D& g, cplx fill = {})
        : grid(g), v(g.size(), fill) {}

    [[nodiscard]] cplx& at(int i, int j) { return v[grid.index(i, j)]; }
    [[nodiscard]] const cplx& at(int i, int j) const { return v[grid.index(i, j)]; }

    /// Samples f(x, y) at every node.
    template <class F>
    static ComplexScalarField sample(const Grid2D& g, F&& f) {
        ComplexScalarField out(g);
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i)
                out.at(i, j) = f(g.x(i), g.y(j));
        return out;
    }
};

/// Complex 2-vector sampled at every node; components stored as two planes.
struct ComplexVectorField {
    Grid2D grid;
    std::vector<cplx> x, y;

    ComplexVectorField() = default;
    explicit ComplexVectorField(const Grid2D& g)
        : grid(g), x(g.size(), cplx{}), y(g.size(), cplx{}) {}
};

/// Complex symmetric 2x2 tensor sampled at every node; only the three
/// independent components are stored, so symmetry holds by construction.
struct SymTensorField {
    Grid2D grid;
    std::vector<cplx> a11, a12, a22;

    SymTensorField() = default;
    explicit SymTensorField(const Grid2D& g)
        : grid(g), a11(g.size(), cplx{}), a12(g.size(), cplx{}), a22(g.size(), cplx{}) {}
};

/// Real scalar per node; conditioning maps, masks-as-images, coefficients.
struct RealScalarField {
    Grid2D grid;
    std::vector<double> v;

    RealScalarField() = default;
    explicit RealScalarField(const Grid2D& g, double fill = 0.0)
        : grid(g), v(g.size(), fill) {}

    [[nodiscard]] double& at(int i, int j) { return v[grid.index(i, j)]; }
    [[nodiscard]] const double& at(int i, int j) const { return v[grid.index(i, j)]; }
};

/// Angular frequency and (constant scalar) magnetic permeability.
struct PhysicsParams {
    double omega{1.0};
    double mu0{1.0};

    void validate() const {
        if (!(omega > 0.0)) throw std::invalid_argument("PhysicsParams: omega must be > 0");
        if (!(mu0 > 0.0)) throw std::invalid_argument("PhysicsParams: mu0 must be > 0");
    }
};

// Pointwise field arithmetic. Shape preserving; mixing grids is an error.

inline ComplexScalarField add(const ComplexScalarField& a, const ComplexScalarField& b) {
    require_same_grid(a.grid, b.grid, "add");
    ComplexScalarField out(a.grid);
    for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] = a.v[k] + b.v[k];
    return out;
}

inline ComplexScalarField sub(const ComplexScalarField& a, const ComplexScalarField& b) {
    require_same_grid(a.grid, b.grid, "sub");
    ComplexScalarField out(a.grid);
    for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] = a.v[k] - b.v[k];
    return out;
}

inline ComplexScalarField scale(const ComplexScalarField& a, cplx c) {
    ComplexScalarField out(a.grid);
    for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] = c * a.v[k];
    return out;
}

inline ComplexScalarField multiply(const ComplexScalarField& a, const ComplexScalarField& b) {
    require_same_grid(a.grid, b.grid, "multiply");
    ComplexScalarField out(a.grid);
    for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] = a.v[k] * b.v[k];
    return out;
}

/// Eigenvalues of a real symmetric 2x2 matrix [[p, s], [s, q]].
inline std::pair<double, double> sym2_eigenvalues(double p, double q, double s) {
    const double mean = 0.5 * (p + q);
    const double rad = std::hypot(0.5 * (p - q), s);
    return {mean - rad, mean + rad};
}

/// Outcome of the uniform-ellipticity scan; `ok` plus the worst offender.
struct EllipticityReport {
    bool ok{false};
    double kappa{0.0};
    double min_eig_sigma{0.0}, max_eig_sigma{0.0};
    double min_eig_eps{0.0}, max_eig_eps{0.0};
    int worst_i{-1}, worst_j{-1};
    double worst_eig{0.0};
    std::string worst_part;  // "Re(gamma)" or "Im(gamma)/omega"

    explicit operator bool() const { return ok; }
};

/// Scans gamma = sigma + i*omega*eps and checks that at every node both
/// eigenvalues of Re(gamma) and of Im(gamma)/omega lie in [1/kappa, kappa].
/// Pure predicate: never throws, reports the worst node instead.
inline EllipticityReport validate_ellipticity(const SymTensorField& gamma, double kappa,
                                              double omega = 1.0) {
    EllipticityReport rep;
    rep.kappa = kappa;
    rep.ok = kappa > 1.0 && omega > 0.0;
    rep.min_eig_sigma = rep.min_eig_eps = std::numeric_limits<double>::infinity();
    rep.max_eig_sigma = rep.max_eig_eps = -std::numeric_limits<double>::infinity();
    const double lo = 1.0 / kappa, hi = kappa;
    double worst_violation = 0.0;
    const int n = gamma.grid.n;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const std::size_t k = gamma.grid.index(i, j);
            const double parts[2][3] = {
                {gamma.a11[k].real(), gamma.a22[k].real(), gamma.a12[k].real()},
                {gamma.a11[k].imag() / omega, gamma.a22[k].imag() / omega,
                 gamma.a12[k].imag() / omega}};
            for (int part = 0; part < 2; ++part) {
                const auto [emin, emax] =
                    sym2_eigenvalues(parts[part][0], parts[part][1], parts[part][2]);
                if (!std::isfinite(emin) || !std::isfinite(emax)) {
                    rep.ok = false;
                    rep.worst_i = i;
                    rep.worst_j = j;
                    rep.worst_part = part == 0 ? "Re(gamma)" : "Im(gamma)/omega";
                    rep.worst_eig = emin;
                    return rep;
                }
                double& mn = part == 0 ? rep.min_eig_sigma : rep.min_eig_eps;
                double& mx = part == 0 ? rep.max_eig_sigma : rep.max_eig_eps;
                mn = std::min(mn, emin);
                mx = std::max(mx, emax);
                for (double e : {emin, emax}) {
                    const double viol = std::max(lo - e, e - hi);
                    if (viol > worst_violation) {
                        worst_violation = viol;
                        rep.worst_i = i;
                        rep.worst_j = j;
                        rep.worst_eig = e;
                        rep.worst_part = part == 0 ? "Re(gamma)" : "Im(gamma)/omega";
                        rep.ok = false;
                    }
                }
            }
        }
    }
    return rep;
}

}  // namespace admrec

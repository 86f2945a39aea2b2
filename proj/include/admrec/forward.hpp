// SPDX-License-Identifier: Apache-2.0
//
// Synthetic data generation: solves the scalar second-order form of the
// 2-D time-harmonic Maxwell system,
//   div(J^T gamma^{-1} J grad H) + i*omega*mu0*H = 0   in X,
//   H = g                                              on dX,
// for known admittivity gamma, and recovers E = gamma^{-1} curl H.
// Dirichlet traces of H stand in for the tangential-E boundary condition:
// only the interior pair (E, H) feeds the reconstruction, and prescribing H
// directly lets CGO target fields steer the illuminations exactly.

#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <complex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "admrec/diff_ops.hpp"
#include "admrec/field_io.hpp"
#include "admrec/grid.hpp"

namespace admrec {

/// Complex Dirichlet data on the 4N boundary nodes, stored in grid scan
/// order (j outer, i inner, boundary nodes only).
struct BoundaryTrace {
    Grid2D grid;
    std::vector<cplx> values;

    static std::size_t node_count(const Grid2D& g) { return 4 * static_cast<std::size_t>(g.cells()); }

    template <class F>
    static void for_each_node(const Grid2D& g, F&& f) {
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i)
                if (g.on_boundary(i, j)) f(i, j);
    }

    static BoundaryTrace zero(const Grid2D& g) {
        return BoundaryTrace{g, std::vector<cplx>(node_count(g), cplx{})};
    }

    template <class F>
    static BoundaryTrace from_function(const Grid2D& g, F&& f) {
        BoundaryTrace t = zero(g);
        std::size_t k = 0;
        for_each_node(g, [&](int i, int j) { t.values[k++] = f(g.x(i), g.y(j)); });
        return t;
    }

    static BoundaryTrace from_field(const ComplexScalarField& f) {
        BoundaryTrace t = zero(f.grid);
        std::size_t k = 0;
        for_each_node(f.grid, [&](int i, int j) { t.values[k++] = f.at(i, j); });
        return t;
    }

    void validate() const {
        if (values.size() != node_count(grid))
            throw std::invalid_argument("BoundaryTrace: value count does not match grid");
        for (const cplx& z : values)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw std::invalid_argument("BoundaryTrace: non-finite boundary value");
    }
};

/// H on the full grid and E = gamma^{-1} curl H.
struct ForwardSolution {
    ComplexScalarField H;
    ComplexVectorField E;
    double residual{0.0};  ///< relative residual achieved by the linear solve
};

/// Sparse discretization of the interior operator plus identity rows at
/// boundary nodes (which carry the Dirichlet data through the RHS).
struct AssembledSystem {
    Grid2D grid;
    Eigen::SparseMatrix<cplx> matrix;

    /// Triplet text dump, one "row col re im" line per stored entry.
    void dump_triplets(std::ostream& os) const {
        for (int k = 0; k < matrix.outerSize(); ++k)
            for (Eigen::SparseMatrix<cplx>::InnerIterator it(matrix, k); it; ++it)
                os << it.row() << ' ' << it.col() << ' ' << format_double(it.value().real())
                   << ' ' << format_double(it.value().imag()) << '\n';
    }
};

namespace detail {

// J^T gamma^{-1} J = gamma / det(gamma), per node.
struct FluxTensor {
    std::vector<cplx> a, b, c;  // A11, A12, A22
};

inline FluxTensor flux_tensor(const SymTensorField& gamma) {
    FluxTensor A;
    const std::size_t m = gamma.grid.size();
    A.a.resize(m);
    A.b.resize(m);
    A.c.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const cplx det = gamma.a11[k] * gamma.a22[k] - gamma.a12[k] * gamma.a12[k];
        if (!(std::abs(det) > 0.0))
            throw std::invalid_argument("flux_tensor: singular admittivity tensor at node " +
                                        std::to_string(k));
        A.a[k] = gamma.a11[k] / det;
        A.b[k] = gamma.a12[k] / det;
        A.c[k] = gamma.a22[k] / det;
    }
    return A;
}

}  // namespace detail

/// Assembles div(A grad .) + i*omega*mu0 at interior nodes, A = J^T g^{-1} J:
/// flux form for the diagonal of A (arithmetic-mean midpoint coefficients),
/// centered 4-point corner stencils for the off-diagonal cross terms.
/// The second-order part of every interior row annihilates constants.
inline AssembledSystem assemble_operator(const SymTensorField& gamma,
                                         const PhysicsParams& params) {
    params.validate();
    const Grid2D& g = gamma.grid;
    const detail::FluxTensor A = detail::flux_tensor(gamma);
    const int n = g.n;
    const double invh2 = 1.0 / (g.h * g.h);
    const cplx i_omega_mu(0.0, params.omega * params.mu0);

    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(9 * g.size());
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const auto row = static_cast<int>(g.index(i, j));
            if (g.on_boundary(i, j)) {
                trip.emplace_back(row, row, cplx(1.0, 0.0));
                continue;
            }
            const std::size_t k = g.index(i, j);
            const std::size_t kE = g.index(i + 1, j), kW = g.index(i - 1, j);
            const std::size_t kN = g.index(i, j + 1), kS = g.index(i, j - 1);
            const cplx ae = 0.5 * (A.a[k] + A.a[kE]) * invh2;
            const cplx aw = 0.5 * (A.a[k] + A.a[kW]) * invh2;
            const cplx cn = 0.5 * (A.c[k] + A.c[kN]) * invh2;
            const cplx cs = 0.5 * (A.c[k] + A.c[kS]) * invh2;
            trip.emplace_back(row, static_cast<int>(kE), ae);
            trip.emplace_back(row, static_cast<int>(kW), aw);
            trip.emplace_back(row, static_cast<int>(kN), cn);
            trip.emplace_back(row, static_cast<int>(kS), cs);
            trip.emplace_back(row, row, -(ae + aw + cn + cs) + i_omega_mu);
            const cplx q = 0.25 * invh2;
            trip.emplace_back(row, static_cast<int>(g.index(i + 1, j + 1)),
                              q * (A.b[kE] + A.b[kN]));
            trip.emplace_back(row, static_cast<int>(g.index(i + 1, j - 1)),
                              -q * (A.b[kE] + A.b[kS]));
            trip.emplace_back(row, static_cast<int>(g.index(i - 1, j + 1)),
                              -q * (A.b[kW] + A.b[kN]));
            trip.emplace_back(row, static_cast<int>(g.index(i - 1, j - 1)),
                              q * (A.b[kW] + A.b[kS]));
        }
    }
    AssembledSystem sys;
    sys.grid = g;
    sys.matrix.resize(static_cast<int>(g.size()), static_cast<int>(g.size()));
    sys.matrix.setFromTriplets(trip.begin(), trip.end());
    sys.matrix.makeCompressed();
    return sys;
}

namespace detail {

inline Eigen::VectorXcd rhs_from_trace(const Grid2D& g, const BoundaryTrace& trace) {
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(static_cast<int>(g.size()));
    std::size_t k = 0;
    BoundaryTrace::for_each_node(
        g, [&](int i, int j) { b[static_cast<int>(g.index(i, j))] = trace.values[k++]; });
    return b;
}

inline ComplexVectorField electric_field(const SymTensorField& gamma,
                                         const ComplexScalarField& H) {
    const ComplexVectorField curlH = vector_curl(H);
    ComplexVectorField E(H.grid);
    for (std::size_t k = 0; k < E.x.size(); ++k) {
        const cplx det = gamma.a11[k] * gamma.a22[k] - gamma.a12[k] * gamma.a12[k];
        // gamma^{-1} = adj(gamma)/det
        E.x[k] = (gamma.a22[k] * curlH.x[k] - gamma.a12[k] * curlH.y[k]) / det;
        E.y[k] = (-gamma.a12[k] * curlH.x[k] + gamma.a11[k] * curlH.y[k]) / det;
    }
    return E;
}

}  // namespace detail

/// Direct sparse factorization of the assembled operator, reusable across
/// right-hand sides (the matrix does not depend on the boundary data).
class ForwardFactorization {
  public:
    ForwardFactorization(const SymTensorField& gamma, const PhysicsParams& params)
        : gamma_(gamma), system_(assemble_operator(gamma, params)) {
        solver_.compute(system_.matrix);
        if (solver_.info() != Eigen::Success)
            throw std::runtime_error("solve_forward: sparse factorization failed (" +
                                     std::string(solver_.lastErrorMessage()) +
                                     "); operator singular or near-singular");
    }

    [[nodiscard]] const AssembledSystem& system() const { return system_; }

    [[nodiscard]] ForwardSolution solve(const BoundaryTrace& trace) const {
        require_same_grid(trace.grid, system_.grid, "solve_forward");
        trace.validate();
        const Eigen::VectorXcd b = detail::rhs_from_trace(system_.grid, trace);
        const Eigen::VectorXcd x = solver_.solve(b);
        const double bnorm = b.norm();
        const double res = (system_.matrix * x - b).norm() / (bnorm > 0 ? bnorm : 1.0);
        if (!(res <= 1e-10))
            throw std::runtime_error(
                "solve_forward: relative residual " + std::to_string(res) +
                " exceeds 1e-10; discrete operator near-singular for this grid/coefficients");
        ForwardSolution sol;
        sol.H = ComplexScalarField(system_.grid);
        for (std::size_t k = 0; k < sol.H.v.size(); ++k) sol.H.v[k] = x[static_cast<int>(k)];
        sol.E = detail::electric_field(gamma_, sol.H);
        return sol;
    }

  private:
    SymTensorField gamma_;
    AssembledSystem system_;
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>, Eigen::COLAMDOrdering<int>> solver_;
};

/// One-shot solve for a single boundary trace.
inline ForwardSolution solve_forward(const SymTensorField& gamma, const PhysicsParams& params,
                                     const BoundaryTrace& trace) {
    return ForwardFactorization(gamma, params).solve(trace);
}

/// Solves the same operator for several traces, factoring once.
inline std::vector<ForwardSolution> solve_forward(const SymTensorField& gamma,
                                                  const PhysicsParams& params,
                                                  const std::vector<BoundaryTrace>& traces) {
    ForwardFactorization fac(gamma, params);
    std::vector<ForwardSolution> out;
    out.reserve(traces.size());
    for (const BoundaryTrace& t : traces) out.push_back(fac.solve(t));
    return out;
}

}  // namespace admrec

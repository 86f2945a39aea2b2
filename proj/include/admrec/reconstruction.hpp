// SPDX-License-Identifier: Apache-2.0
//
// Pointwise admittivity reconstruction from five (or more) measured
// magnetic fields. The chain is: Cramer-rule basis coefficients on the
// region where det(curl H1, curl H2) is bounded away from zero, constraint
// tensors M_j = (Z_j H^T)^sym built from one more derivative, and a
// per-node least-squares solve for the three entries of gamma^{-1}, where
//   gamma^{-1} : M_j = i*omega*mu0*(l^j_1 H_1 + l^j_2 H_2 - H_{2+j}).
// Every derivative comes from diff_ops, so the whole recovery is local:
// gamma at a node reads fields only on its 5x5 stencil neighborhood.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "admrec/diff_ops.hpp"
#include "admrec/grid.hpp"

namespace admrec {

/// Nodes where |det(curl H1, curl H2)| >= c0.
struct AdmissibleMask {
    Grid2D grid;
    std::vector<std::uint8_t> inside;
    double c0{0.0};

    [[nodiscard]] std::size_t count() const {
        std::size_t c = 0;
        for (auto b : inside) c += b;
        return c;
    }
    [[nodiscard]] double fraction() const {
        return inside.empty() ? 0.0 : static_cast<double>(count()) / inside.size();
    }
};

/// Basis coefficients l^j_1, l^j_2 of the extra fields in the (E1, E2)
/// basis, one pair of scalar fields per extra measurement j.
struct CramerCoefficients {
    std::vector<ComplexScalarField> c1, c2;
    ComplexScalarField det12;  ///< det(curl H1, curl H2), diagnostic
};

/// Per-node constraint tensors and right-hand sides, one per extra field,
/// plus the dependency-closed validity flags (a node is valid when every
/// node its derivative stencils read is admissible).
struct ConstraintSystem {
    Grid2D grid;
    std::vector<SymTensorField> lhs;
    std::vector<ComplexScalarField> rhs;
    std::vector<std::uint8_t> valid;
};

namespace detail {

// 1-D stencil dependencies of the first-derivative operators in diff_ops.
inline void stencil_deps(int i, int n, int out[3]) {
    if (i == 0) {
        out[0] = 0; out[1] = 1; out[2] = 2;
    } else if (i == n - 1) {
        out[0] = n - 3; out[1] = n - 2; out[2] = n - 1;
    } else {
        out[0] = i - 1; out[1] = i; out[2] = i + 1;  // self unused by central, harmless
    }
}

inline std::vector<std::uint8_t> dependency_closed(const AdmissibleMask& mask) {
    const Grid2D& g = mask.grid;
    std::vector<std::uint8_t> ok(g.size(), 0);
    int dx[3], dy[3];
    for (int j = 0; j < g.n; ++j) {
        stencil_deps(j, g.n, dy);
        for (int i = 0; i < g.n; ++i) {
            stencil_deps(i, g.n, dx);
            bool good = mask.inside[g.index(i, j)] != 0;
            for (int t = 0; t < 3 && good; ++t)
                good = mask.inside[g.index(dx[t], j)] && mask.inside[g.index(i, dy[t])];
            ok[g.index(i, j)] = good ? 1 : 0;
        }
    }
    return ok;
}

// Deterministic nearest-valid fill: multi-source BFS over the 4-neighbor
// graph, sources in scan order. Values at invalid nodes are copied from
// the first valid node reached.
template <class CopyFn>
inline std::size_t fill_from_nearest(const Grid2D& g, const std::vector<std::uint8_t>& valid,
                                     CopyFn&& copy_value) {
    std::deque<std::size_t> queue;
    std::vector<std::int32_t> source(g.size(), -1);
    for (std::size_t k = 0; k < valid.size(); ++k)
        if (valid[k]) {
            source[k] = static_cast<std::int32_t>(k);
            queue.push_back(k);
        }
    if (queue.empty())
        throw std::runtime_error("reconstruction: no admissible nodes to fill from");
    std::size_t filled = 0;
    while (!queue.empty()) {
        const std::size_t k = queue.front();
        queue.pop_front();
        const int i = static_cast<int>(k) % g.n, j = static_cast<int>(k) / g.n;
        const int ni[4] = {i - 1, i + 1, i, i};
        const int nj[4] = {j, j, j - 1, j + 1};
        for (int t = 0; t < 4; ++t) {
            if (ni[t] < 0 || ni[t] >= g.n || nj[t] < 0 || nj[t] >= g.n) continue;
            const std::size_t nk = g.index(ni[t], nj[t]);
            if (source[nk] >= 0) continue;
            source[nk] = source[k];
            copy_value(nk, static_cast<std::size_t>(source[k]));
            ++filled;
            queue.push_back(nk);
        }
    }
    return filled;
}

}  // namespace detail

/// Cramer-rule coefficients of fields[2+j] in the basis of the first two,
/// computed from the vector curls; nodes failing the determinant condition
/// |det| >= c0 are masked out and their coefficients left at zero.
inline std::pair<CramerCoefficients, AdmissibleMask> cramer_coefficients(
    const std::vector<ComplexScalarField>& fields, double c0) {
    if (fields.size() < 5)
        throw std::invalid_argument("cramer_coefficients: need at least 5 fields, got " +
                                    std::to_string(fields.size()));
    const Grid2D& g = fields[0].grid;
    for (const auto& f : fields) require_same_grid(f.grid, g, "cramer_coefficients");

    std::vector<ComplexVectorField> curls;
    curls.reserve(fields.size());
    for (const auto& f : fields) curls.push_back(vector_curl(f));

    AdmissibleMask mask{g, std::vector<std::uint8_t>(g.size(), 0), c0};
    CramerCoefficients out;
    out.det12 = ComplexScalarField(g);
    const std::size_t m = fields.size() - 2;
    out.c1.assign(m, ComplexScalarField(g));
    out.c2.assign(m, ComplexScalarField(g));

    for (std::size_t k = 0; k < g.size(); ++k) {
        const cplx det = curls[0].x[k] * curls[1].y[k] - curls[0].y[k] * curls[1].x[k];
        out.det12.v[k] = det;
        mask.inside[k] = std::abs(det) >= c0 ? 1 : 0;
        if (!mask.inside[k]) continue;
        for (std::size_t j = 0; j < m; ++j) {
            const auto& cj = curls[2 + j];
            out.c1[j].v[k] = (cj.x[k] * curls[1].y[k] - cj.y[k] * curls[1].x[k]) / det;
            out.c2[j].v[k] = (curls[0].x[k] * cj.y[k] - curls[0].y[k] * cj.x[k]) / det;
        }
    }
    if (mask.count() == 0)
        throw std::runtime_error(
            "cramer_coefficients: admissible region is empty (determinant condition fails "
            "everywhere); different or additional illuminations are required");
    return {std::move(out), std::move(mask)};
}

/// Constraint tensors M_j = (Z_j H^T)^sym with Z_j = [curl l^j_1 | curl l^j_2],
/// H = [curl H1 | curl H2], and right-hand sides
/// r_j = i*omega*mu0*(l^j_1 H1 + l^j_2 H2 - H_{2+j}).
inline ConstraintSystem build_constraint_system(const std::vector<ComplexScalarField>& fields,
                                                const CramerCoefficients& coeffs,
                                                const AdmissibleMask& mask,
                                                const PhysicsParams& params) {
    const Grid2D& g = fields[0].grid;
    const std::size_t m = coeffs.c1.size();
    if (fields.size() != m + 2)
        throw std::invalid_argument("build_constraint_system: field/coefficient count mismatch");
    const ComplexVectorField C1 = vector_curl(fields[0]);
    const ComplexVectorField C2 = vector_curl(fields[1]);
    const cplx i_omega_mu(0.0, params.omega * params.mu0);

    ConstraintSystem sys;
    sys.grid = g;
    sys.valid = detail::dependency_closed(mask);
    sys.lhs.assign(m, SymTensorField(g));
    sys.rhs.assign(m, ComplexScalarField(g));
    for (std::size_t j = 0; j < m; ++j) {
        const ComplexVectorField z1 = vector_curl(coeffs.c1[j]);
        const ComplexVectorField z2 = vector_curl(coeffs.c2[j]);
        SymTensorField& M = sys.lhs[j];
        ComplexScalarField& r = sys.rhs[j];
        for (std::size_t k = 0; k < g.size(); ++k) {
            M.a11[k] = z1.x[k] * C1.x[k] + z2.x[k] * C2.x[k];
            M.a22[k] = z1.y[k] * C1.y[k] + z2.y[k] * C2.y[k];
            M.a12[k] = 0.5 * (z1.x[k] * C1.y[k] + z2.x[k] * C2.y[k] + z1.y[k] * C1.x[k] +
                              z2.y[k] * C2.x[k]);
            r.v[k] = i_omega_mu *
                     (coeffs.c1[j].v[k] * fields[0].v[k] + coeffs.c2[j].v[k] * fields[1].v[k] -
                      fields[2 + j].v[k]);
        }
    }
    return sys;
}

/// Result of the per-node inverse-tensor solve.
struct InverseSolveResult {
    SymTensorField gamma_inv;
    RealScalarField sigma_min;          ///< smallest singular value of the m x 3 system
    std::vector<std::uint8_t> flagged;  ///< rank-deficient or dependency-invalid nodes
    std::size_t flagged_count{0};
};

/// Per admissible node solves the least-squares system whose j-th row is
/// a*(M_j)11 + 2b*(M_j)12 + c*(M_j)22 = r_j for gamma^{-1} = [[a,b],[b,c]].
/// Nodes with sigma_min below sigma_min_rel_tol times the largest row norm
/// are flagged and filled from the nearest solved neighbor.
inline InverseSolveResult solve_pointwise(const ConstraintSystem& sys,
                                          const AdmissibleMask& mask,
                                          double sigma_min_rel_tol = 1e-8) {
    require_same_grid(sys.grid, mask.grid, "solve_pointwise");
    const std::size_t m = sys.lhs.size();
    if (m < 3)
        throw std::invalid_argument("solve_pointwise: need >= 3 constraint rows per node");
    const Grid2D& g = sys.grid;
    InverseSolveResult out;
    out.gamma_inv = SymTensorField(g);
    out.sigma_min = RealScalarField(g);
    out.flagged.assign(g.size(), 0);

    Eigen::MatrixXcd A(m, 3);
    Eigen::VectorXcd b(m);
    std::vector<std::uint8_t> solved(g.size(), 0);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!sys.valid[k]) {
            out.flagged[k] = 1;
            continue;
        }
        double max_row = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            A(j, 0) = sys.lhs[j].a11[k];
            A(j, 1) = 2.0 * sys.lhs[j].a12[k];
            A(j, 2) = sys.lhs[j].a22[k];
            b(j) = sys.rhs[j].v[k];
            max_row = std::max(max_row, A.row(j).norm());
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const double smin = svd.singularValues()(2);
        out.sigma_min.v[k] = smin;
        if (!(smin >= sigma_min_rel_tol * max_row)) {
            out.flagged[k] = 1;
            continue;
        }
        const Eigen::Vector3cd sol = svd.solve(b);
        out.gamma_inv.a11[k] = sol(0);
        out.gamma_inv.a12[k] = sol(1);
        out.gamma_inv.a22[k] = sol(2);
        solved[k] = 1;
    }
    out.flagged_count = detail::fill_from_nearest(g, solved, [&](std::size_t dst, std::size_t src) {
        out.gamma_inv.a11[dst] = out.gamma_inv.a11[src];
        out.gamma_inv.a12[dst] = out.gamma_inv.a12[src];
        out.gamma_inv.a22[dst] = out.gamma_inv.a22[src];
    });
    return out;
}

/// gamma, conductivity and scaled-permittivity fields recovered from the
/// pointwise inverse.
struct MaterialFields {
    SymTensorField gamma;
    SymTensorField sigma;  ///< Re gamma (imaginary parts zero)
    SymTensorField eps;    ///< Im gamma / omega
    std::vector<std::uint8_t> flagged;
    std::size_t flagged_count{0};
};

/// Inverts gamma^{-1} per node and splits gamma = sigma + i*omega*eps.
/// Near-singular nodes are flagged and filled from the nearest sound node.
inline MaterialFields materials_from_inverse(const SymTensorField& gamma_inv, double omega) {
    if (!(omega > 0.0)) throw std::invalid_argument("materials_from_inverse: omega must be > 0");
    const Grid2D& g = gamma_inv.grid;
    MaterialFields out;
    out.gamma = SymTensorField(g);
    out.sigma = SymTensorField(g);
    out.eps = SymTensorField(g);
    out.flagged.assign(g.size(), 0);
    std::vector<std::uint8_t> good(g.size(), 0);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const cplx a = gamma_inv.a11[k], b = gamma_inv.a12[k], c = gamma_inv.a22[k];
        const cplx det = a * c - b * b;
        const double scale = std::norm(a) + 2.0 * std::norm(b) + std::norm(c);
        if (!(std::abs(det) > 1e-12 * scale)) {
            out.flagged[k] = 1;
            continue;
        }
        out.gamma.a11[k] = c / det;
        out.gamma.a12[k] = -b / det;
        out.gamma.a22[k] = a / det;
        good[k] = 1;
    }
    out.flagged_count = detail::fill_from_nearest(g, good, [&](std::size_t dst, std::size_t src) {
        out.gamma.a11[dst] = out.gamma.a11[src];
        out.gamma.a12[dst] = out.gamma.a12[src];
        out.gamma.a22[dst] = out.gamma.a22[src];
    });
    for (std::size_t k = 0; k < g.size(); ++k) {
        out.sigma.a11[k] = out.gamma.a11[k].real();
        out.sigma.a12[k] = out.gamma.a12[k].real();
        out.sigma.a22[k] = out.gamma.a22[k].real();
        out.eps.a11[k] = out.gamma.a11[k].imag() / omega;
        out.eps.a12[k] = out.gamma.a12[k].imag() / omega;
        out.eps.a22[k] = out.gamma.a22[k].imag() / omega;
    }
    return out;
}

/// Everything one reconstruction produces, for callers that want the
/// intermediates as well as the material fields.
struct ReconstructionResult {
    CramerCoefficients coeffs;
    AdmissibleMask mask;
    ConstraintSystem system;
    InverseSolveResult inverse;
    MaterialFields materials;
};

/// Full chain from measured fields to material tensors. c0 is the absolute
/// determinant threshold; callers usually derive it from a relative level
/// (c0_rel * max |det|), see cramer_coefficients.
inline ReconstructionResult reconstruct_admittivity(
    const std::vector<ComplexScalarField>& fields, const PhysicsParams& params, double c0_rel,
    double sigma_min_rel_tol = 1e-8) {
    // first pass to size the threshold
    const ComplexVectorField cu1 = vector_curl(fields.at(0));
    const ComplexVectorField cu2 = vector_curl(fields.at(1));
    double max_det = 0.0;
    for (std::size_t k = 0; k < cu1.x.size(); ++k)
        max_det = std::max(max_det,
                           std::abs(cu1.x[k] * cu2.y[k] - cu1.y[k] * cu2.x[k]));
    const double c0 = c0_rel * max_det;

    ReconstructionResult r;
    std::tie(r.coeffs, r.mask) = cramer_coefficients(fields, c0);
    r.system = build_constraint_system(fields, r.coeffs, r.mask, params);
    r.inverse = solve_pointwise(r.system, r.mask, sigma_min_rel_tol);
    r.materials = materials_from_inverse(r.inverse.gamma_inv, params.omega);
    return r;
}

}  // namespace admrec

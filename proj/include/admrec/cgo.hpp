// SPDX-License-Identifier: Apache-2.0
//
// Complex-geometrical-optics style solutions for constant admittivity
// tensors. For gamma constant the magnetic field solves a Helmholtz-type
// equation -div(gt^{-1} grad H) + H = 0 with gt = -i*omega*mu0*J^T*gamma*J;
// factoring gt = Q*Q^T yields the exact exponential family H = e^{x.(Q u)}
// for any u with u^T u = 1. These fields certify the reconstructibility
// conditions (nonvanishing field determinant, independent constraint
// tensors) and provide boundary data that steers the forward solver onto
// well-conditioned illuminations.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "admrec/forward.hpp"
#include "admrec/grid.hpp"

namespace admrec {

using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

inline Mat2 rotation_J() {
    Mat2 J;
    J << 0.0, -1.0, 1.0, 0.0;
    return J;
}

/// Coefficient tensor of the Helmholtz-form equation for constant gamma:
/// gt = -i*omega*mu0 * J^T * gamma * J.
inline Mat2 helmholtz_tensor(const Mat2& gamma, const PhysicsParams& params) {
    const Mat2 J = rotation_J();
    return cplx(0.0, -params.omega * params.mu0) * (J.transpose() * gamma * J);
}

namespace detail {

// Bilinear (transpose, not conjugate) dot product.
inline cplx bdot(const Vec2& a, const Vec2& b) { return a(0) * b(0) + a(1) * b(1); }

inline cplx det2(const Vec2& a, const Vec2& b) { return a(0) * b(1) - a(1) * b(0); }

}  // namespace detail

/// Principal square-root factor of a complex symmetric 2x2 matrix:
/// returns symmetric Q with Q*Q^T = A. Uses the eigendecomposition
/// A = V D V^T with complex-orthogonal V (bilinear-normalized eigenvectors,
/// eigenvalues ordered by descending real part, then imaginary part) and
/// principal square roots of the eigenvalues. Near-defective input, where
/// no well-conditioned orthogonal eigenbasis exists, is an error.
inline Mat2 factor_symmetric(const Mat2& A) {
    if (std::abs(A(0, 1) - A(1, 0)) > 1e-12 * A.norm())
        throw std::invalid_argument("factor_symmetric: matrix is not symmetric");
    const cplx p = A(0, 0), q = A(1, 1), s = A(0, 1);
    const cplx mean = 0.5 * (p + q);
    const cplx rad = std::sqrt(0.25 * (p - q) * (p - q) + s * s);
    cplx l1 = mean + rad, l2 = mean - rad;
    if (l1.real() < l2.real() ||
        (l1.real() == l2.real() && l1.imag() < l2.imag()))
        std::swap(l1, l2);
    const double scale = A.norm();
    if (std::abs(l1) < 1e-14 * scale || std::abs(l2) < 1e-14 * scale || scale == 0.0)
        throw std::invalid_argument("factor_symmetric: matrix is singular");

    Mat2 V;
    if (std::abs(s) <= 1e-15 * scale && std::abs(p - q) <= 1e-15 * scale) {
        // scalar matrix: any orthonormal basis works
        V.setIdentity();
        l1 = p;
        l2 = q;
    } else {
        // eigenvector for l: (s, l - p) or (l - q, s), whichever is larger
        auto eigvec = [&](cplx l) {
            Vec2 v1(s, l - p), v2(l - q, s);
            Vec2 v = v1.norm() >= v2.norm() ? v1 : v2;
            const cplx vv = detail::bdot(v, v);
            if (std::abs(vv) < 1e-14 * v.squaredNorm())
                throw std::invalid_argument(
                    "factor_symmetric: defective matrix (isotropic eigenvector)");
            return Vec2(v / std::sqrt(vv));
        };
        V.col(0) = eigvec(l1);
        V.col(1) = eigvec(l2);
        Eigen::JacobiSVD<Mat2> svd(V);
        const double cond = svd.singularValues()(0) / svd.singularValues()(1);
        if (!(cond < 1e8))
            throw std::invalid_argument(
                "factor_symmetric: near-defective matrix, eigenvector condition " +
                std::to_string(cond));
    }
    Mat2 D = Mat2::Zero();
    D(0, 0) = std::sqrt(l1);
    D(1, 1) = std::sqrt(l2);
    return V * D * V.transpose();
}

/// The Q factor and the five direction vectors of one illumination family.
/// Bilinear normalization u^T u = 1; u1 = e1 and u2 = e2 by convention.
struct CgoBasis {
    Mat2 Q;
    std::array<Vec2, 5> u;
};

inline CgoBasis make_cgo_basis(const Mat2& gamma_ref, const PhysicsParams& params,
                               const std::array<double, 3>& angles) {
    CgoBasis b;
    b.Q = factor_symmetric(helmholtz_tensor(gamma_ref, params));
    b.u[0] = Vec2(1.0, 0.0);
    b.u[1] = Vec2(0.0, 1.0);
    for (int j = 0; j < 3; ++j)
        b.u[2 + j] = Vec2(std::cos(angles[j]), std::sin(angles[j]));
    return b;
}

/// Exact pointwise samples of H(x) = exp(x . (Q u)).
inline ComplexScalarField cgo_field(const Mat2& Q, const Vec2& u, const Grid2D& grid) {
    const Vec2 d = Q * u;
    return ComplexScalarField::sample(
        grid, [&](double x, double y) { return std::exp(x * d(0) + y * d(1)); });
}

inline ComplexScalarField cgo_field(const CgoBasis& basis, int which_u, const Grid2D& grid) {
    return cgo_field(basis.Q, basis.u.at(which_u), grid);
}

/// Closed-form constraint tensor of the gradient formulation,
///   Mt_j = H_{2+j}(x) * Q * [[a(a-1), ab], [ab, b(b-1)]] * Q^T,
/// with a = u_{2+j}.u1, b = u_{2+j}.u2. Requires u1 = e1, u2 = e2.
inline Mat2 analytic_constraint_tensor(const CgoBasis& basis, int j, double x, double y) {
    if ((basis.u[0] - Vec2(1, 0)).norm() > 1e-12 || (basis.u[1] - Vec2(0, 1)).norm() > 1e-12)
        throw std::invalid_argument("analytic_constraint_tensor: requires u1 = e1, u2 = e2");
    const Vec2& uj = basis.u.at(2 + j);
    const cplx a = uj(0), b = uj(1);
    Mat2 inner;
    inner << a * (a - 1.0), a * b, a * b, b * (b - 1.0);
    const Vec2 d = basis.Q * uj;
    const cplx Hj = std::exp(x * d(0) + y * d(1));
    return Hj * (basis.Q * inner * basis.Q.transpose());
}

/// Smallest singular value of the three symmetric matrices stacked as rows
/// (M11, sqrt(2)*M12, M22); the weight makes row norms Frobenius norms.
/// Zero iff the matrices are linearly dependent in S2(C).
inline double smallest_sv(const Mat2& M1, const Mat2& M2, const Mat2& M3) {
    Eigen::Matrix3cd S;
    const double r2 = std::sqrt(2.0);
    const Mat2* Ms[3] = {&M1, &M2, &M3};
    for (int j = 0; j < 3; ++j)
        S.row(j) << (*Ms[j])(0, 0), r2 * (*Ms[j])(0, 1), (*Ms[j])(1, 1);
    Eigen::JacobiSVD<Eigen::Matrix3cd> svd(S);
    return svd.singularValues()(2);
}

/// Per-node independence map for three measured constraint-tensor fields.
inline RealScalarField check_independence(const SymTensorField& M1, const SymTensorField& M2,
                                          const SymTensorField& M3) {
    require_same_grid(M1.grid, M2.grid, "check_independence");
    require_same_grid(M1.grid, M3.grid, "check_independence");
    RealScalarField out(M1.grid);
    Mat2 A, B, C;
    for (std::size_t k = 0; k < out.v.size(); ++k) {
        A << M1.a11[k], M1.a12[k], M1.a12[k], M1.a22[k];
        B << M2.a11[k], M2.a12[k], M2.a12[k], M2.a22[k];
        C << M3.a11[k], M3.a12[k], M3.a12[k], M3.a22[k];
        out.v[k] = smallest_sv(A, B, C);
    }
    return out;
}

/// Minimum over a coarse probe grid of the analytic constraint-tensor
/// independence measure; the go/no-go score for an angle set.
inline double independence_probe(const CgoBasis& basis, int probe_n = 21) {
    double min_sv = std::numeric_limits<double>::infinity();
    const double step = 2.0 / (probe_n - 1);
    for (int j = 0; j < probe_n; ++j)
        for (int i = 0; i < probe_n; ++i) {
            const double x = -1.0 + i * step, y = -1.0 + j * step;
            min_sv = std::min(min_sv, smallest_sv(analytic_constraint_tensor(basis, 0, x, y),
                                                  analytic_constraint_tensor(basis, 1, x, y),
                                                  analytic_constraint_tensor(basis, 2, x, y)));
        }
    return min_sv;
}

/// The five boundary traces plus the basis that generated them.
struct IlluminationSet {
    CgoBasis basis;
    std::array<BoundaryTrace, 5> traces;
    double probe_min_sv{0.0};
    int attempts{1};
};

inline constexpr std::array<double, 3> kDefaultIlluminationAngles = {
    M_PI / 4.0, M_PI / 3.0, 2.0 * M_PI / 3.0};

/// Builds CGO boundary traces for the grid from a constant reference tensor.
/// Verifies the independence of the analytic constraint tensors on a coarse
/// probe; on failure rotates the whole angle set by pi/16 per attempt, up to
/// 8 attempts, then reports the best score achieved.
inline IlluminationSet choose_illuminations(
    const Mat2& gamma_ref, const PhysicsParams& params, const Grid2D& grid,
    const std::array<double, 3>& angles = kDefaultIlluminationAngles) {
    double best_sv = -1.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
        const double shift = attempt * M_PI / 16.0;
        const std::array<double, 3> a = {angles[0] + shift, angles[1] + shift,
                                         angles[2] + shift};
        CgoBasis basis = make_cgo_basis(gamma_ref, params, a);
        const double sv = independence_probe(basis);
        best_sv = std::max(best_sv, sv);
        if (sv > 1e-10) {
            IlluminationSet set;
            set.basis = basis;
            set.probe_min_sv = sv;
            set.attempts = attempt + 1;
            for (int i = 0; i < 5; ++i) {
                const ComplexScalarField f = cgo_field(basis, i, grid);
                set.traces[i] = BoundaryTrace::from_field(f);
            }
            return set;
        }
    }
    throw std::runtime_error(
        "choose_illuminations: no admissible angle set found; best independence score " +
        std::to_string(best_sv));
}

}  // namespace admrec

// SPDX-License-Identifier: Apache-2.0
//
// Ground-truth admittivity fields gamma = sigma + i*omega*eps. The smooth
// phantom samples fixed closed forms; the piecewise-constant phantom is a
// configurable background-plus-inclusions map with a documented default,
// loadable from a plain text file so new phantoms need no recompile.

#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "admrec/grid.hpp"

namespace admrec {

/// Smooth six-coefficient phantom.
inline SymTensorField simulation1(const Grid2D& grid, double omega) {
    SymTensorField gamma(grid);
    for (int j = 0; j < grid.n; ++j) {
        for (int i = 0; i < grid.n; ++i) {
            const double x = grid.x(i), y = grid.y(j);
            const std::size_t k = grid.index(i, j);
            const double s1 = 2.0 + std::sin(M_PI * x) * std::sin(M_PI * y);
            const double s2 = 0.5 * std::sin(2.0 * M_PI * x);
            const double s3 = 1.8 + std::exp(-15.0 * (x * x + y * y)) +
                              std::exp(-15.0 * ((x - 0.6) * (x - 0.6) + (y - 0.5) * (y - 0.5))) -
                              std::exp(-15.0 * ((x + 0.4) * (x + 0.4) + (y + 0.6) * (y + 0.6)));
            const double e1 = 2.0 - std::sin(M_PI * x) * std::sin(M_PI * y);
            const double e2 = 0.5 * std::sin(2.0 * M_PI * y);
            const double e3 = 1.8 + std::exp(-12.0 * (x * x + y * y)) +
                              std::exp(-12.0 * ((x + 0.6) * (x + 0.6) + (y - 0.5) * (y - 0.5))) -
                              std::exp(-12.0 * ((x - 0.4) * (x - 0.4) + (y + 0.6) * (y + 0.6)));
            gamma.a11[k] = cplx(s1, omega * e1);
            gamma.a12[k] = cplx(s2, omega * e2);
            gamma.a22[k] = cplx(s3, omega * e3);
        }
    }
    return gamma;
}

/// One piecewise-constant inclusion: a disc or an axis-aligned rectangle
/// that overrides one coefficient inside its support.
struct Inclusion {
    enum class Shape { disc, rect };
    enum class Coefficient { s1, s2, s3, e1, e2, e3 };

    Shape shape{Shape::disc};
    Coefficient coeff{Coefficient::s1};
    double value{0.0};
    // disc: (p0,p1) center, p2 radius; rect: corners (p0,p1)-(p2,p3)
    double p0{0}, p1{0}, p2{0}, p3{0};

    [[nodiscard]] bool contains(double x, double y) const {
        if (shape == Shape::disc)
            return (x - p0) * (x - p0) + (y - p1) * (y - p1) <= p2 * p2;
        return x >= p0 && x <= p2 && y >= p1 && y <= p3;
    }
};

/// Background values plus an ordered inclusion list (later entries win).
struct PhantomSpec {
    double bg_s1{2.0}, bg_s2{0.0}, bg_s3{2.0};
    double bg_e1{2.0}, bg_e2{0.0}, bg_e3{2.0};
    std::vector<Inclusion> inclusions;

    [[nodiscard]] SymTensorField sample(const Grid2D& grid, double omega) const {
        SymTensorField gamma(grid);
        for (int j = 0; j < grid.n; ++j) {
            for (int i = 0; i < grid.n; ++i) {
                const double x = grid.x(i), y = grid.y(j);
                double c[6] = {bg_s1, bg_s2, bg_s3, bg_e1, bg_e2, bg_e3};
                for (const Inclusion& inc : inclusions)
                    if (inc.contains(x, y)) c[static_cast<int>(inc.coeff)] = inc.value;
                const std::size_t k = grid.index(i, j);
                gamma.a11[k] = cplx(c[0], omega * c[3]);
                gamma.a12[k] = cplx(c[1], omega * c[4]);
                gamma.a22[k] = cplx(c[2], omega * c[5]);
            }
        }
        return gamma;
    }
};

/// Default piecewise-constant phantom: two discs and one square per
/// diagonal coefficient, one disc each for the off-diagonals, contrasts in
/// [0.5, 3.5] so the whole field stays uniformly elliptic with kappa = 5.
inline PhantomSpec default_piecewise_spec() {
    PhantomSpec spec;
    using S = Inclusion::Shape;
    using C = Inclusion::Coefficient;
    spec.inclusions = {
        {S::disc, C::s1, 3.0, -0.45, 0.35, 0.30, 0.0},
        {S::disc, C::s1, 1.2, 0.45, -0.40, 0.25, 0.0},
        {S::rect, C::s1, 2.6, 0.15, 0.25, 0.65, 0.70},
        {S::disc, C::s2, 0.5, 0.30, 0.30, 0.35, 0.0},
        {S::disc, C::s2, -0.4, -0.40, -0.40, 0.30, 0.0},
        {S::disc, C::s3, 3.2, 0.00, 0.45, 0.30, 0.0},
        {S::disc, C::s3, 1.1, -0.50, -0.30, 0.25, 0.0},
        {S::rect, C::s3, 2.7, -0.75, -0.75, -0.25, -0.35},
        {S::disc, C::e1, 3.1, 0.40, 0.40, 0.28, 0.0},
        {S::disc, C::e1, 1.2, -0.45, -0.35, 0.28, 0.0},
        {S::rect, C::e1, 2.5, -0.70, 0.20, -0.20, 0.65},
        {S::disc, C::e2, 0.5, -0.30, 0.35, 0.32, 0.0},
        {S::disc, C::e2, -0.4, 0.35, -0.35, 0.30, 0.0},
        {S::disc, C::e3, 3.0, -0.05, -0.50, 0.28, 0.0},
        {S::disc, C::e3, 1.3, 0.50, 0.30, 0.25, 0.0},
        {S::rect, C::e3, 2.6, 0.20, -0.80, 0.70, -0.40},
    };
    return spec;
}

/// Piecewise-constant phantom with the documented default layout.
inline SymTensorField simulation2(const Grid2D& grid, double omega) {
    return default_piecewise_spec().sample(grid, omega);
}

namespace detail {

inline Inclusion::Coefficient parse_coefficient(const std::string& s) {
    if (s == "s1") return Inclusion::Coefficient::s1;
    if (s == "s2") return Inclusion::Coefficient::s2;
    if (s == "s3") return Inclusion::Coefficient::s3;
    if (s == "e1") return Inclusion::Coefficient::e1;
    if (s == "e2") return Inclusion::Coefficient::e2;
    if (s == "e3") return Inclusion::Coefficient::e3;
    throw std::runtime_error("phantom file: unknown coefficient '" + s + "'");
}

}  // namespace detail

/// Parses the phantom definition format:
///   background = s1 s2 s3 e1 e2 e3
///   disc <coeff> <value> <cx> <cy> <r>
///   rect <coeff> <value> <x0> <y0> <x1> <y1>
/// Blank lines and '#' comments are ignored.
inline PhantomSpec parse_phantom(std::istream& is) {
    PhantomSpec spec;
    spec.inclusions.clear();
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        auto fail = [&](const std::string& why) {
            throw std::runtime_error("phantom file line " + std::to_string(lineno) + ": " + why);
        };
        if (head == "background") {
            std::string eq;
            ls >> eq;
            if (eq != "=") fail("expected 'background = s1 s2 s3 e1 e2 e3'");
            if (!(ls >> spec.bg_s1 >> spec.bg_s2 >> spec.bg_s3 >> spec.bg_e1 >> spec.bg_e2 >>
                  spec.bg_e3))
                fail("expected six background values");
        } else if (head == "disc" || head == "rect") {
            Inclusion inc;
            inc.shape = head == "disc" ? Inclusion::Shape::disc : Inclusion::Shape::rect;
            std::string coeff;
            if (!(ls >> coeff)) fail("missing coefficient");
            inc.coeff = detail::parse_coefficient(coeff);
            const int nparams = inc.shape == Inclusion::Shape::disc ? 3 : 4;
            double* slots[4] = {&inc.p0, &inc.p1, &inc.p2, &inc.p3};
            if (!(ls >> inc.value)) fail("missing value");
            for (int t = 0; t < nparams; ++t)
                if (!(ls >> *slots[t])) fail("missing geometry parameter");
            spec.inclusions.push_back(inc);
        } else {
            fail("unknown directive '" + head + "'");
        }
    }
    return spec;
}

inline PhantomSpec parse_phantom_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open phantom file " + path);
    return parse_phantom(is);
}

}  // namespace admrec

// SPDX-License-Identifier: Apache-2.0
//
// Field serialization. CSV layout: a header line recording the field name,
// N and h, then one CSV row per grid row (fixed y), with each complex node
// value occupying two adjacent columns (re, im). Values are printed with 17
// significant digits so a write/read round trip is bit exact.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "admrec/grid.hpp"

namespace admrec {

inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_csv(std::ostream& os, const ComplexScalarField& f, const std::string& name) {
    const int n = f.grid.n;
    os << "# field=" << name << ",N=" << f.grid.cells() << ",h=" << format_double(f.grid.h)
       << "\n";
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const cplx& z = f.at(i, j);
            if (i) os << ',';
            os << format_double(z.real()) << ',' << format_double(z.imag());
        }
        os << '\n';
    }
}

inline void write_csv(const std::filesystem::path& path, const ComplexScalarField& f,
                      const std::string& name) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_csv: cannot open " + path.string());
    write_csv(os, f, name);
}

inline ComplexScalarField read_csv(std::istream& is, std::string* name_out = nullptr) {
    std::string header;
    if (!std::getline(is, header) || header.rfind("# field=", 0) != 0)
        throw std::runtime_error("read_csv: missing field header line");
    const auto npos = std::string::npos;
    const auto ncut = header.find(",N=");
    const auto hcut = header.find(",h=");
    if (ncut == npos || hcut == npos) throw std::runtime_error("read_csv: malformed header");
    if (name_out) *name_out = header.substr(8, ncut - 8);
    const int N = std::stoi(header.substr(ncut + 3, hcut - ncut - 3));
    Grid2D grid = make_grid(N);
    ComplexScalarField f(grid);
    std::string line;
    for (int j = 0; j < grid.n; ++j) {
        if (!std::getline(is, line))
            throw std::runtime_error("read_csv: expected " + std::to_string(grid.n) + " rows");
        std::istringstream ls(line);
        std::string tok;
        for (int i = 0; i < grid.n; ++i) {
            double re = 0, im = 0;
            if (!std::getline(ls, tok, ',')) throw std::runtime_error("read_csv: short row");
            re = std::stod(tok);
            if (!std::getline(ls, tok, ',')) throw std::runtime_error("read_csv: short row");
            im = std::stod(tok);
            f.at(i, j) = {re, im};
        }
    }
    return f;
}

inline ComplexScalarField read_csv(const std::filesystem::path& path,
                                   std::string* name_out = nullptr) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_csv: cannot open " + path.string());
    return read_csv(is, name_out);
}

inline ComplexScalarField to_complex_field(const RealScalarField& r) {
    ComplexScalarField f(r.grid);
    for (std::size_t k = 0; k < r.v.size(); ++k) f.v[k] = cplx(r.v[k], 0.0);
    return f;
}

/// Grayscale heatmap, binary PGM, values linearly mapped min->0, max->255.
inline void write_pgm(const std::filesystem::path& path, const RealScalarField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_pgm: cannot open " + path.string());
    const int n = f.grid.n;
    double lo = f.v.empty() ? 0.0 : f.v[0], hi = lo;
    for (double x : f.v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    const double span = hi > lo ? hi - lo : 1.0;
    os << "P5\n" << n << " " << n << "\n255\n";
    // image rows run top to bottom: emit decreasing y
    for (int j = n - 1; j >= 0; --j)
        for (int i = 0; i < n; ++i) {
            const double t = (f.at(i, j) - lo) / span;
            os.put(static_cast<char>(static_cast<int>(t * 255.0 + 0.5)));
        }
}

}  // namespace admrec

// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration: a small sectioned key/value text format,
// parsed into ExperimentConfig. Command-line flags override file values.

#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "admrec/cgo.hpp"
#include "admrec/regularization.hpp"

namespace admrec {

using IniData = std::map<std::string, std::map<std::string, std::string>>;

/// Parses "[section]" headers and "key = value" lines; '#' starts a
/// comment; keys before any section land in section "".
inline IniData parse_ini(std::istream& is) {
    IniData data;
    std::string line, section;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            data[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected 'key = value'");
        data[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return data;
}

inline IniData parse_ini_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file " + path);
    return parse_ini(is);
}

/// Everything one experiment run needs.
struct ExperimentConfig {
    std::string phantom{"sim1"};  ///< "sim1", "sim2" or a phantom-file path
    int grid_n{80};               ///< subdivision count N
    double omega{1.0};
    double mu0{1.0};
    double kappa{5.0};            ///< ellipticity bound checked before solving
    double alpha{0.0};            ///< noise level, fraction of mean |H|
    std::uint64_t seed{1};
    double c0_rel{1e-6};          ///< admissibility threshold, relative to max |det|
    double sigma_min_rel_tol{1e-8};
    std::array<double, 3> angles{kDefaultIlluminationAngles};
    RegConfig reg{};
    bool dump_intermediate{false};
    std::string out_dir;

    void validate() const {
        if (grid_n < 4 || grid_n % 2 != 0)
            throw std::invalid_argument("config: grid n must be even and >= 4");
        if (alpha < 0.0) throw std::invalid_argument("config: alpha must be >= 0");
        if (!(omega > 0.0) || !(mu0 > 0.0))
            throw std::invalid_argument("config: omega and mu0 must be > 0");
        if (!(c0_rel > 0.0)) throw std::invalid_argument("config: c0_rel must be > 0");
        reg.validate();
    }
};

inline RegConfig::Method parse_reg_method(const std::string& s) {
    if (s == "none") return RegConfig::Method::none;
    if (s == "tikhonov") return RegConfig::Method::tikhonov;
    if (s == "tv") return RegConfig::Method::tv;
    throw std::runtime_error("config: unknown regularization method '" + s + "'");
}

inline ExperimentConfig config_from_ini(const IniData& ini) {
    ExperimentConfig cfg;
    auto get = [&](const std::string& sec, const std::string& key) -> const std::string* {
        const auto s = ini.find(sec);
        if (s == ini.end()) return nullptr;
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    };
    auto getd = [&](const std::string& sec, const std::string& key, double& out) {
        if (const std::string* v = get(sec, key)) out = std::stod(*v);
    };
    if (const auto* v = get("phantom", "kind")) cfg.phantom = *v;
    if (const auto* v = get("phantom", "file")) cfg.phantom = *v;
    getd("phantom", "kappa", cfg.kappa);
    if (const auto* v = get("grid", "n")) cfg.grid_n = std::stoi(*v);
    getd("physics", "omega", cfg.omega);
    getd("physics", "mu0", cfg.mu0);
    getd("noise", "alpha", cfg.alpha);
    if (const auto* v = get("noise", "seed")) cfg.seed = std::stoull(*v);
    getd("reconstruction", "c0_rel", cfg.c0_rel);
    getd("reconstruction", "sigma_min_tol", cfg.sigma_min_rel_tol);
    for (int t = 0; t < 3; ++t)
        getd("illuminations", "angle" + std::to_string(t + 1), cfg.angles[t]);
    if (const auto* v = get("regularization", "method")) cfg.reg.method = parse_reg_method(*v);
    getd("regularization", "rho", cfg.reg.rho);
    getd("regularization", "mu", cfg.reg.mu_b);
    if (const auto* v = get("regularization", "iters")) cfg.reg.max_iters = std::stoi(*v);
    getd("regularization", "tol", cfg.reg.tol);
    if (const auto* v = get("regularization", "isotropic")) cfg.reg.isotropic = *v == "true";
    if (const auto* v = get("output", "dir")) cfg.out_dir = *v;
    if (const auto* v = get("output", "dump_intermediate"))
        cfg.dump_intermediate = *v == "true";
    return cfg;
}

inline ExperimentConfig config_from_file(const std::string& path) {
    return config_from_ini(parse_ini_file(path));
}

}  // namespace admrec

// run_config.hpp — configuration for the command-line front end: flat
// dotted-key text files, flag overrides, canonical hashing for reproducible
// output provenance.

#pragma once

#include <cstdint>
#include <string>

#include "fanodho/params.hpp"
#include "fanodho/spectral.hpp"

namespace fanodho {

struct RunConfig {
    // model
    double mass = 1.0;
    double omega0 = 1.0;
    double gamma = 0.1;
    double cutoff = 50.0;
    double kT = 0.0;
    double hbar = 1.0;

    // bath
    std::string bath_kind = "drude"; // drude | ohmic-sharp | tabulated
    std::string bath_table;          // csv path when tabulated

    // flags
    bool counter_term = true;
    bool rwa = false;
    bool limit_mode = false;

    // grids
    double omega_min = 0.0;
    double omega_max = 0.0; // 0 -> automatic
    std::size_t omega_points = 501;
    double t_min = 0.0;
    double t_max = 10.0;
    std::size_t t_points = 101;

    // ensemble
    std::size_t bath_modes = 400;
    std::size_t n_samples = 1000;
    double dt = 1e-3;
    double bath_omega_max = 0.0; // 0 -> discretization default
    std::uint64_t seed = 0;
    std::string ic_variant = "shifted"; // bare | shifted
    double q0 = 1.0;
    double p0 = 0.0;

    // output
    std::string format = "csv"; // csv | json
    std::string out_path;       // empty -> FANODHO_OUT_DIR (or .) + default name

    // parse "key = value" lines; '#' comments; unknown keys are rejected
    static RunConfig from_file(const std::string& path);
    void set(const std::string& key, const std::string& value);

    void validate() const;

    // stable canonical rendering of every field, and its FNV-1a hash
    std::string canonical() const;
    std::uint64_t hash() const;

    BathSpectrum spectrum() const;
    ModelParams params() const;
};

// fixed-format double rendering used by every emitter ("%.17g", C locale)
std::string format_double(double v);

} // namespace fanodho

#pragma once

// Orchestration: run configuration, the three-pipeline eps-sweep, the
// splitting-law fit, and machine-readable emission (CSV/JSON + manifest).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hopfsplit/difference/difference.hpp"
#include "hopfsplit/model/model_io.hpp"

namespace hopfsplit {

struct RunConfig {
    std::string model_path;
    RawModel model;                 // parsed model (inline or from model_path)
    std::vector<double> epsilons;   // strictly decreasing
    double delta = 0.4;
    double chi = 1.5707963267948966;
    double xi = 0.2;
    double eta = 0.0;               // 0 = eps/8
    int K = 40;
    int N_series = 40;
    double tol = 1e-12;
    double safety_factor = 2.0;
    std::string format = "csv";    // csv | json
    std::string out_dir = ".";
    int workers = 1;
    std::optional<long> bits_override;

    // raw bytes of the config file, for the manifest hash
    std::string source_text;

    ManifoldOptions manifold_options(prec_t bits) const;
    void validate() const; // throws ConfigError
};

RunConfig parse_run_config(const std::string& path);

struct SplittingRecord {
    double epsilon = 0;
    Vec2 dm;
    Real d_abs = Real::zero(64);
    std::string pipeline; // direct | propagated | predicted
    long bits = 0;
    long steps = 0;
    double wall_ms = 0; // manifest only, never in the CSV
    std::string error;  // nonempty when the pipeline failed
    // direction data (diagonal frame), for the fit's phase model
    Complex ds0 = Complex::zero(64);
};

struct SweepResult {
    std::vector<SplittingRecord> records; // sorted by (epsilon desc, pipeline)
    bool any_failed = false;
    bool all_failed_somewhere = false; // some eps has no surviving pipeline
    std::map<double, long> bits_per_epsilon;
};

SweepResult run_sweep(const RunConfig& cfg);

struct FitResult {
    Real A = Real::zero(64);     // target pi/2
    Real B = Real::zero(64);     // target b
    Real logC = Real::zero(64);
    Real F0_est = Real::zero(64);
    Real residual_rms = Real::zero(64);
    Real condition = Real::zero(64); // normal-equations conditioning proxy
    int points_used = 0;
    std::vector<std::string> warnings;
};

// Least-squares fit of log d = logC - A/eps - B log(1/eps) on the direct
// records; when the model's F0 is nonzero a cos/sin(F0 log(1/eps)) pair is
// added, and F0_est always comes from the ds0 phase model.
FitResult fit_splitting_law(const std::vector<SplittingRecord>& records, const Real& f0_model);

// ---- emission ----------------------------------------------------------

std::string sha256_hex(const std::string& bytes);

struct Manifest {
    std::string config_sha256;
    std::string tool_version;
    std::map<double, long> per_epsilon_bits;
    std::map<std::string, double> timings_ms;
};

// CSV with the exact declared column sets; JSON mirrors the field names and
// wraps {records: [...], manifest: {...}}.
void emit_splitting(const SweepResult& sweep, const RunConfig& cfg, const Manifest& manifest);
void emit_fit(const FitResult& fit, const RunConfig& cfg, const Manifest& manifest);

std::string splitting_csv(const std::vector<SplittingRecord>& records);

} // namespace hopfsplit

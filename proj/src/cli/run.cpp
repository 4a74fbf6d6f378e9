#include "hopfsplit/cli/run.hpp"

#include <openssl/evp.h>

#include "hopfsplit/mp/linalg.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace hopfsplit {

namespace {
constexpr const char* kToolVersion = "hopfsplit 0.1.0";

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}
} // namespace

ManifoldOptions RunConfig::manifold_options(prec_t bits) const {
    ManifoldOptions mo;
    mo.delta = delta;
    mo.chi = chi;
    mo.xi = xi;
    mo.eta = eta > 0 ? eta : -1.0;
    mo.K = K;
    mo.series_order = N_series;
    mo.tol = Real::of(tol, bits);
    return mo;
}

void RunConfig::validate() const {
    if (epsilons.empty()) throw ConfigError("config: epsilon list is empty");
    for (size_t i = 0; i < epsilons.size(); ++i) {
        if (epsilons[i] <= 0) throw ConfigError("config: epsilon must be positive");
        if (epsilons[i] >= delta)
            throw ConfigError("config: epsilon " + std::to_string(epsilons[i]) +
                              " must be smaller than delta " + std::to_string(delta));
        if (i > 0 && epsilons[i] >= epsilons[i - 1])
            throw ConfigError("config: epsilon list must be strictly decreasing");
    }
    if (tol <= 0) throw ConfigError("config: tol must be positive");
    if (safety_factor < 1) throw ConfigError("config: safety_factor must be >= 1");
    if (format != "csv" && format != "json") throw ConfigError("config: format must be csv|json");
    if (workers < 1) throw ConfigError("config: workers must be >= 1");
}

RunConfig parse_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    RunConfig cfg;
    cfg.source_text = buf.str();

    std::istringstream ss(cfg.source_text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        try {
            if (key == "model") ls >> cfg.model_path;
            else if (key == "epsilons") {
                double e;
                while (ls >> e) cfg.epsilons.push_back(e);
            } else if (key == "delta") ls >> cfg.delta;
            else if (key == "chi") ls >> cfg.chi;
            else if (key == "xi") ls >> cfg.xi;
            else if (key == "eta") ls >> cfg.eta;
            else if (key == "K") ls >> cfg.K;
            else if (key == "N_series") ls >> cfg.N_series;
            else if (key == "tol") ls >> cfg.tol;
            else if (key == "safety_factor") ls >> cfg.safety_factor;
            else if (key == "format") ls >> cfg.format;
            else if (key == "out") ls >> cfg.out_dir;
            else if (key == "workers") ls >> cfg.workers;
            else
                throw ConfigError("run config line " + std::to_string(lineno) +
                                  ": unknown key '" + key + "'");
        } catch (const std::ios_base::failure&) {
            throw ConfigError("run config line " + std::to_string(lineno) + ": bad value");
        }
    }
    if (cfg.model_path.empty()) throw ConfigError("config: missing 'model' path");
    std::filesystem::path mp(cfg.model_path);
    if (mp.is_relative()) mp = std::filesystem::path(path).parent_path() / mp;
    cfg.model = parse_model_file(mp.string());
    return cfg;
}

namespace {

void run_one_epsilon(const RunConfig& cfg, double e, std::vector<SplittingRecord>& out) {
    PrecisionContext ctx =
        make_context(e, cfg.safety_factor, cfg.bits_override ? *cfg.bits_override : 64);
    if (cfg.bits_override && *cfg.bits_override > ctx.bits) ctx.bits = *cfg.bits_override;
    ModelSpec spec = make_valid_spec(cfg.model, ctx);
    ManifoldOptions mo = cfg.manifold_options(ctx.bits);
    Real eps = Real::of(e, ctx.bits);

    SplittingRecord direct;
    direct.epsilon = e;
    direct.pipeline = "direct";
    direct.bits = ctx.bits;
    direct.dm = Vec2::zero(ctx.bits);
    double t0 = now_ms();
    try {
        SectionValue sp = shoot_to_section(spec, eps, +1, mo, ctx);
        SectionValue sm = shoot_to_section(spec, eps, -1, mo, ctx);
        direct.dm = sp.value - sm.value;
        direct.d_abs = abs(direct.dm);
        direct.steps = sp.stats.steps + sm.stats.steps;
    } catch (const Error& err) {
        direct.error = err.what();
    }
    direct.wall_ms = now_ms() - t0;

    SplittingRecord prop;
    prop.epsilon = e;
    prop.pipeline = "propagated";
    prop.bits = ctx.bits;
    prop.dm = Vec2::zero(ctx.bits);
    SplittingRecord pred;
    pred.epsilon = e;
    pred.pipeline = "predicted";
    pred.bits = ctx.bits;
    pred.dm = Vec2::zero(ctx.bits);
    t0 = now_ms();
    try {
        DifferenceOptions dop;
        dop.delta = cfg.delta;
        dop.manifold = mo;
        DifferenceRun run = propagate_difference_exact(spec, eps, dop, ctx);
        prop.dm = run.dm_zero;
        prop.d_abs = abs(run.dm_zero);
        prop.steps = run.stats.steps;
        auto [ds0, du0] = diagonalize(run.dm_zero, run.Ys_zero, conj(run.Ys_zero));
        (void)du0;
        prop.ds0 = ds0;
        prop.wall_ms = now_ms() - t0;

        t0 = now_ms();
        auto pr = asymptotic_predictor(spec, eps, Real::of(cfg.delta, ctx.bits), run.theta_s, ctx);
        pred.ds0 = pr.ds_zero_pred;
        // predicted section difference 2 Re[(Ys(0), 1) ds(0)]
        Vec2 dm_pred{Complex{(run.Ys_zero * pr.ds_zero_pred).re * 2, Real::zero(ctx.bits)},
                     Complex{pr.ds_zero_pred.re * 2, Real::zero(ctx.bits)}};
        pred.dm = dm_pred;
        pred.d_abs = abs(dm_pred);
    } catch (const Error& err) {
        if (prop.error.empty() && prop.steps == 0) prop.error = err.what();
        pred.error = err.what();
    }
    pred.wall_ms = now_ms() - t0;

    out = {direct, prop, pred};
}

} // namespace

SweepResult run_sweep(const RunConfig& cfg) {
    cfg.validate();
    SweepResult res;
    std::vector<std::vector<SplittingRecord>> per_eps(cfg.epsilons.size());

    // independent per-eps tasks on a small worker pool
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    int workers = std::min<int>(cfg.workers, static_cast<int>(cfg.epsilons.size()));
    auto work = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= cfg.epsilons.size()) break;
            run_one_epsilon(cfg, cfg.epsilons[i], per_eps[i]);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    for (size_t i = 0; i < per_eps.size(); ++i) {
        bool all_bad = !per_eps[i].empty();
        for (const auto& r : per_eps[i]) {
            if (!r.error.empty()) res.any_failed = true;
            else all_bad = false;
            res.records.push_back(r);
        }
        if (all_bad) res.all_failed_somewhere = true;
        if (!per_eps[i].empty()) res.bits_per_epsilon[cfg.epsilons[i]] = per_eps[i][0].bits;
    }
    return res;
}

FitResult fit_splitting_law(const std::vector<SplittingRecord>& records, const Real& f0_model) {
    prec_t p = 256;
    std::vector<const SplittingRecord*> pts;
    FitResult fit;
    for (const auto& r : records) {
        if (r.pipeline != "direct" || !r.error.empty()) continue;
        if (!(r.d_abs > 0)) {
            fit.warnings.push_back("excluded eps = " + std::to_string(r.epsilon) +
                                   ": zero splitting (log undefined)");
            continue;
        }
        pts.push_back(&r);
    }
    if (pts.size() < 4)
        throw ParameterError("fit_splitting_law: need at least 4 usable records");

    bool oscillate = !f0_model.is_zero();
    int ncol = oscillate ? 5 : 3;
    DenseMatrix A(static_cast<int>(pts.size()), ncol, p);
    std::vector<Complex> rhs;
    for (size_t i = 0; i < pts.size(); ++i) {
        Real e = Real::of(pts[i]->epsilon, p);
        Real linv = log(Real::one(p) / e);
        A.at(static_cast<int>(i), 0) = Complex::one(p);
        A.at(static_cast<int>(i), 1) = Complex{-(Real::one(p) / e), Real::zero(p)};
        A.at(static_cast<int>(i), 2) = Complex{-linv, Real::zero(p)};
        if (oscillate) {
            Real ph = f0_model * linv;
            A.at(static_cast<int>(i), 3) = Complex{cos(ph), Real::zero(p)};
            A.at(static_cast<int>(i), 4) = Complex{sin(ph), Real::zero(p)};
        }
        rhs.push_back(Complex{log(Real(pts[i]->d_abs)), Real::zero(p)});
    }
    std::vector<Complex> sol;
    try {
        sol = least_squares(A, rhs);
    } catch (const ConditioningError&) {
        throw ConditioningError("fit_splitting_law: design is rank-deficient (epsilon points "
                                "too clustered)");
    }
    fit.logC = sol[0].re;
    fit.A = sol[1].re;
    fit.B = sol[2].re;
    fit.points_used = static_cast<int>(pts.size());

    Real ss = Real::zero(p);
    for (size_t i = 0; i < pts.size(); ++i) {
        Complex model = Complex::zero(p);
        for (int j = 0; j < ncol; ++j) model += A.at(static_cast<int>(i), j) * sol[static_cast<size_t>(j)];
        Real resid = rhs[i].re - model.re;
        ss = ss + resid * resid;
    }
    fit.residual_rms = sqrt(ss / static_cast<long>(pts.size()));

    // F0 estimate from the phase model arg(ds0) ~ phi + F0 log(1/eps), using
    // whichever records carry direction data
    std::vector<std::pair<Real, Real>> phase_pts;
    for (const auto& r : records) {
        if (r.pipeline != "propagated" || !r.error.empty() || r.ds0.is_zero()) continue;
        Real e = Real::of(r.epsilon, p);
        phase_pts.emplace_back(log(Real::one(p) / e), arg(r.ds0));
    }
    if (phase_pts.size() >= 2) {
        // unwrap phases against the previous point
        Real two_pi = 2 * Real::pi(p);
        for (size_t i = 1; i < phase_pts.size(); ++i) {
            while (phase_pts[i].second - phase_pts[i - 1].second > Real::pi(p))
                phase_pts[i].second -= two_pi;
            while (phase_pts[i - 1].second - phase_pts[i].second > Real::pi(p))
                phase_pts[i].second += two_pi;
        }
        DenseMatrix P(static_cast<int>(phase_pts.size()), 2, p);
        std::vector<Complex> pr;
        for (size_t i = 0; i < phase_pts.size(); ++i) {
            P.at(static_cast<int>(i), 0) = Complex::one(p);
            P.at(static_cast<int>(i), 1) = Complex{phase_pts[i].first, Real::zero(p)};
            pr.push_back(Complex{phase_pts[i].second, Real::zero(p)});
        }
        auto ps = least_squares(P, pr);
        fit.F0_est = ps[1].re;
    }

    // conditioning proxy: ratio of extreme diagonal magnitudes of A^H A
    Real dmin(p), dmax(p);
    for (int j = 0; j < ncol; ++j) {
        Real acc = Real::zero(p);
        for (size_t i = 0; i < pts.size(); ++i) acc = acc + norm2(A.at(static_cast<int>(i), j));
        if (j == 0) dmin = dmax = acc;
        dmin = min(dmin, acc);
        dmax = max(dmax, acc);
    }
    fit.condition = sqrt(dmax / dmin);
    return fit;
}

// ---- emission -----------------------------------------------------------

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

namespace {
std::string real_str(const Real& r) { return r.str(30); }

nlohmann::json manifest_json(const Manifest& m) {
    nlohmann::json j;
    j["config_sha256"] = m.config_sha256;
    j["tool_version"] = m.tool_version;
    nlohmann::json bits = nlohmann::json::object();
    for (const auto& [e, b] : m.per_epsilon_bits) bits[std::to_string(e)] = b;
    j["per_epsilon_bits"] = bits;
    nlohmann::json t = nlohmann::json::object();
    for (const auto& [k, v] : m.timings_ms) t[k] = v;
    j["timings_ms"] = t;
    return j;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed for " + path);
}
} // namespace

std::string splitting_csv(const std::vector<SplittingRecord>& records) {
    std::ostringstream os;
    os << "epsilon,re_dy,im_dy,re_dz,im_dz,d_abs,pipeline,bits,steps\n";
    for (const auto& r : records) {
        if (!r.error.empty()) continue;
        os << r.epsilon << "," << real_str(r.dm.y.re) << "," << real_str(r.dm.y.im) << ","
           << real_str(r.dm.z.re) << "," << real_str(r.dm.z.im) << "," << real_str(r.d_abs) << ","
           << r.pipeline << "," << r.bits << "," << r.steps << "\n";
    }
    return os.str();
}

void emit_splitting(const SweepResult& sweep, const RunConfig& cfg, const Manifest& manifest) {
    std::filesystem::create_directories(cfg.out_dir);
    if (cfg.format == "csv") {
        write_file(cfg.out_dir + "/splitting.csv", splitting_csv(sweep.records));
        write_file(cfg.out_dir + "/manifest.json", manifest_json(manifest).dump(2) + "\n");
    } else {
        nlohmann::json j;
        j["records"] = nlohmann::json::array();
        for (const auto& r : sweep.records) {
            nlohmann::json rec;
            rec["epsilon"] = r.epsilon;
            rec["pipeline"] = r.pipeline;
            rec["bits"] = r.bits;
            rec["steps"] = r.steps;
            if (r.error.empty()) {
                rec["re_dy"] = real_str(r.dm.y.re);
                rec["im_dy"] = real_str(r.dm.y.im);
                rec["re_dz"] = real_str(r.dm.z.re);
                rec["im_dz"] = real_str(r.dm.z.im);
                rec["d_abs"] = real_str(r.d_abs);
            } else {
                rec["error"] = r.error;
            }
            j["records"].push_back(rec);
        }
        j["manifest"] = manifest_json(manifest);
        write_file(cfg.out_dir + "/splitting.json", j.dump(2) + "\n");
    }
}

void emit_fit(const FitResult& fit, const RunConfig& cfg, const Manifest& manifest) {
    std::filesystem::create_directories(cfg.out_dir);
    nlohmann::json j;
    j["A"] = real_str(fit.A);
    j["B"] = real_str(fit.B);
    j["logC"] = real_str(fit.logC);
    j["F0_est"] = real_str(fit.F0_est);
    j["residual_rms"] = real_str(fit.residual_rms);
    j["condition"] = real_str(fit.condition);
    j["points_used"] = fit.points_used;
    j["warnings"] = fit.warnings;
    j["manifest"] = manifest_json(manifest);
    write_file(cfg.out_dir + "/fit.json", j.dump(2) + "\n");
}

} // namespace hopfsplit

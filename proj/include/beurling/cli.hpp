#pragma once

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "bounds.hpp"
#include "contour.hpp"
#include "explicit.hpp"
#include "io.hpp"
#include "numsys.hpp"
#include "zeros.hpp"
#include "zeta.hpp"

namespace beurling::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

enum ExitCode : int { kAllPass = 0, kBoundFailure = 1, kInfeasible = 2, kConfigError = 3 };

inline const std::vector<std::string>& task_names() {
    static const std::vector<std::string> names = {"gen",          "eval",          "sweep-bounds",     "find-zeros", "check-counts",
                                                   "build-contour", "explicit-formula", "perron", "study"};
    return names;
}

/// Strict view of a JSON object: unknown keys and type mismatches are reported with their field path.
class Fields {
public:
    Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where("") + "expected an object");
    }
    bool has(const std::string& k) const {
        used_.insert(k);
        return j_.contains(k) && !j_.at(k).is_null();
    }
    template <class T>
    T get(const std::string& k) const {
        used_.insert(k);
        if (!j_.contains(k)) throw ConfigError(where(k) + "required field missing");
        try {
            return j_.at(k).get<T>();
        } catch (const json::exception&) {
            throw ConfigError(where(k) + "wrong type");
        }
    }
    template <class T>
    T get_or(const std::string& k, T fallback) const {
        return has(k) ? get<T>(k) : fallback;
    }
    Fields sub(const std::string& k) const {
        used_.insert(k);
        static const json empty = json::object();
        return Fields(j_.contains(k) ? j_.at(k) : empty, path_.empty() ? k : path_ + "." + k);
    }
    const json& raw(const std::string& k) const {
        used_.insert(k);
        return j_.at(k);
    }
    std::string where(const std::string& k) const {
        const std::string p = k.empty() ? path_ : (path_.empty() ? k : path_ + "." + k);
        return "field '" + (p.empty() ? std::string("<root>") : p) + "': ";
    }
    void reject_unknown() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!used_.count(it.key())) throw ConfigError(where(it.key()) + "unknown field");
        }
    }

private:
    const json& j_;
    std::string path_;
    mutable std::set<std::string> used_;
};

struct AxiomOverrides {
    std::optional<double> kappa, theta, a_const;
};

struct RunConfig {
    json raw;
    SystemSpec system;
    std::optional<double> table_cutoff;
    AxiomOverrides overrides;
    EvaluatorChoice evaluator = EvaluatorChoice::Auto;
    double epsilon = 1e-8;
    std::string task;
    json params = json::object();
    fs::path out_dir = "out";
    std::string prefix;
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string config_hash;
};

inline SystemKind system_kind_from_string(const std::string& s, const std::string& where) {
    for (SystemKind k : {SystemKind::RationalIntegers, SystemKind::GaussianIdeals, SystemKind::RandomBeurling, SystemKind::ExplicitList}) {
        if (s == to_string(k)) return k;
    }
    throw ConfigError(where + "unknown system kind '" + s + "'");
}

inline RunConfig parse_config(const json& j) {
    RunConfig c;
    c.raw = j;
    Fields root(j, "");
    c.seed = root.get_or<std::uint64_t>("seed", 0);
    {
        Fields sys = root.sub("system");
        c.system.kind = system_kind_from_string(sys.get<std::string>("kind"), sys.where("kind"));
        c.system.theta = sys.get_or<double>("theta", c.system.kind == SystemKind::GaussianIdeals ? 0.5 : 0.05);
        c.system.cutoff = sys.get_or<double>("cutoff", 1e5);
        c.system.seed = c.seed;
        if (sys.has("norms")) c.system.norms = sys.get<std::vector<double>>("norms");
        if (sys.has("kappa")) c.system.kappa = sys.get<double>("kappa");
        if (sys.has("a_const")) c.system.a_const = sys.get<double>("a_const");
        sys.reject_unknown();
        if (!(c.system.theta > 0.0 && c.system.theta < 1.0)) throw ConfigError(sys.where("theta") + "must lie in (0,1)");
        if (!(c.system.cutoff >= 2.0)) throw ConfigError(sys.where("cutoff") + "must be >= 2");
        if (c.system.kind == SystemKind::ExplicitList && c.system.norms.empty()) {
            throw ConfigError(sys.where("norms") + "explicit-list needs prime norms");
        }
        for (double n : c.system.norms) {
            if (!(n > 1.0)) throw ConfigError(sys.where("norms") + "prime norms must exceed 1");
        }
    }
    if (root.has("axiom_a")) {
        Fields ax = root.sub("axiom_a");
        if (ax.has("kappa")) c.overrides.kappa = ax.get<double>("kappa");
        if (ax.has("theta")) c.overrides.theta = ax.get<double>("theta");
        if (ax.has("a_const")) c.overrides.a_const = ax.get<double>("a_const");
        ax.reject_unknown();
        if (c.overrides.theta && !(*c.overrides.theta > 0.0 && *c.overrides.theta < 1.0)) {
            throw ConfigError(ax.where("theta") + "must lie in (0,1)");
        }
        if (c.overrides.kappa && !(*c.overrides.kappa > 0.0)) throw ConfigError(ax.where("kappa") + "must be > 0");
        if (c.overrides.a_const && !(*c.overrides.a_const > 0.0)) throw ConfigError(ax.where("a_const") + "must be > 0");
    }
    if (root.has("table_cutoff")) {
        c.table_cutoff = root.get<double>("table_cutoff");
        if (!(*c.table_cutoff >= 1.0)) throw ConfigError(root.where("table_cutoff") + "must be >= 1");
    }
    {
        const std::string ev = root.get_or<std::string>("evaluator", "auto");
        if (ev == "auto") c.evaluator = EvaluatorChoice::Auto;
        else if (ev == "axiom-a") c.evaluator = EvaluatorChoice::AxiomA;
        else if (ev == "euler-maclaurin") c.evaluator = EvaluatorChoice::EulerMaclaurin;
        else throw ConfigError(root.where("evaluator") + "expected auto, axiom-a or euler-maclaurin");
    }
    c.epsilon = root.get_or<double>("epsilon", 1e-8);
    if (!(c.epsilon > 0.0)) throw ConfigError(root.where("epsilon") + "must be > 0");
    c.task = root.get<std::string>("task");
    if (std::find(task_names().begin(), task_names().end(), c.task) == task_names().end()) {
        throw ConfigError(root.where("task") + "unknown task '" + c.task + "'");
    }
    if (root.has("params")) {
        c.params = root.raw("params");
        if (!c.params.is_object()) throw ConfigError(root.where("params") + "expected an object");
    }
    if (root.has("output")) {
        Fields out = root.sub("output");
        c.out_dir = out.get_or<std::string>("dir", "out");
        c.prefix = out.get_or<std::string>("prefix", "");
        out.reject_unknown();
    }
    root.reject_unknown();

    json hashed = j;
    hashed.erase("output");
    c.config_hash = hex64(fnv1a64(hashed.dump()));
    return c;
}

inline RunConfig load_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(j);
}

// ---------------------------------------------------------------------------

struct RunResult {
    int exit_code = kAllPass;
    std::vector<fs::path> artifacts;
    std::string message;
};

class Context {
public:
    explicit Context(const RunConfig& cfg, std::ostream& log) : cfg_(cfg), log_(log) {
        prov_.config_hash = cfg.config_hash;
        prov_.seed = cfg.seed;
        fs::create_directories(cfg.out_dir);
    }

    const RunConfig& cfg() const { return cfg_; }
    const ProvenanceInfo& prov() const { return prov_; }
    std::ostream& log() { return log_; }

    fs::path output(const std::string& name) {
        fs::path p = cfg_.out_dir / (cfg_.prefix + name);
        artifacts_.push_back(p);
        return p;
    }
    fs::path input(const std::string& ref) const {
        fs::path p(ref);
        if (p.is_relative()) p = cfg_.out_dir / p;
        if (!fs::exists(p)) throw ConfigError("referenced artifact " + p.string() + " does not exist");
        return p;
    }
    const std::vector<fs::path>& artifacts() const { return artifacts_; }

    const PrimeSystem& system() {
        if (!system_) system_ = build_system(cfg_.system);
        return *system_;
    }
    /// Axiom-A parameters after overrides; throws AxiomAFailure when the system has none.
    AxiomAParams params() {
        const PrimeSystem& s = system();
        AxiomAParams p;
        if (s.axiom_a) {
            p = *s.axiom_a;
        } else if (cfg_.overrides.kappa && cfg_.overrides.a_const) {
            p.provenance = Provenance::Declared;
        } else {
            throw AxiomAFailure(std::string(to_string(s.kind)) + " system does not satisfy Axiom A (fit rejected)");
        }
        if (cfg_.overrides.kappa) p.kappa = *cfg_.overrides.kappa;
        if (cfg_.overrides.theta) p.theta = *cfg_.overrides.theta;
        if (cfg_.overrides.a_const) {
            p.a_const = *cfg_.overrides.a_const;
            p.provenance = Provenance::Declared;
        }
        if (!cfg_.overrides.theta && !s.axiom_a) p.theta = cfg_.system.theta;
        p.validate();
        return effective(p);
    }
    double table_cutoff() const { return cfg_.table_cutoff.value_or(cfg_.system.cutoff); }

    const ElementTable& table() {
        if (table_) return *table_;
        const double cutoff = table_cutoff();
        std::optional<fs::path> cache;
        if (const char* dir = std::getenv("BEURLING_CACHE_DIR"); dir && *dir) {
            json key = cfg_.raw.at("system");
            key["seed"] = cfg_.seed;
            key["table_cutoff"] = cutoff;
            cache = fs::path(dir) / ("table-" + hex64(fnv1a64(key.dump())) + ".bin");
            if (auto t = load_table(*cache)) {
                table_ = std::move(*t);
                return *table_;
            }
        }
        table_ = generate_elements(system(), cutoff);
        if (cache) {
            std::error_code ec;
            fs::create_directories(cache->parent_path(), ec);
            save_table(*cache, *table_);
        }
        return *table_;
    }

    AnyEvaluator evaluator() {
        const PrimeSystem& s = system();
        const bool has_em = s.kind == SystemKind::RationalIntegers || s.kind == SystemKind::GaussianIdeals;
        const bool need_table = cfg_.evaluator == EvaluatorChoice::AxiomA || !has_em;
        static const ElementTable empty;
        return make_evaluator(s, need_table ? table() : empty, params(), cfg_.evaluator, cfg_.epsilon);
    }

private:
    const RunConfig& cfg_;
    std::ostream& log_;
    ProvenanceInfo prov_;
    std::vector<fs::path> artifacts_;
    std::optional<PrimeSystem> system_;
    std::optional<ElementTable> table_;
};

inline std::string cplx_str(cplx z) { return fmt(z.real()) + (z.imag() < 0 ? "" : "+") + fmt(z.imag()) + "i"; }

template <class F>
decltype(auto) visit_ev(const AnyEvaluator& ev, F&& f) {
    return std::visit(std::forward<F>(f), ev);
}

inline ojson summary_header(Context& ctx, const std::string& task) {
    ojson j;
    j["provenance"] = provenance_json(ctx.prov());
    j["task"] = task;
    return j;
}

inline std::vector<double> doubles(const Fields& f, const std::string& k, std::vector<double> fallback) {
    if (!f.has(k)) return fallback;
    const json& v = f.raw(k);
    if (v.is_number()) return {v.get<double>()};
    try {
        return v.get<std::vector<double>>();
    } catch (const json::exception&) {
        throw ConfigError(f.where(k) + "expected a number or an array of numbers");
    }
}

inline std::vector<cplx> points_field(const Fields& f, const std::string& k) {
    std::vector<cplx> out;
    if (!f.has(k)) return out;
    std::vector<std::vector<double>> pts;
    try {
        pts = f.raw(k).get<std::vector<std::vector<double>>>();
    } catch (const json::exception&) {
        throw ConfigError(f.where(k) + "expected an array of [sigma, t] pairs");
    }
    for (const auto& p : pts) {
        if (p.size() != 2) throw ConfigError(f.where(k) + "expected an array of [sigma, t] pairs");
        out.push_back({p[0], p[1]});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Tasks. Each returns its exit code.

inline int task_gen(Context& ctx, const Fields& f) {
    const int samples = f.get_or<int>("samples", 200);
    f.reject_unknown();
    const PrimeSystem& sys = ctx.system();
    const ElementTable& table = ctx.table();
    ojson sum = summary_header(ctx, "gen");
    sum["system"] = to_string(sys.kind);
    sum["primes"] = sys.primes.size();
    sum["elements"] = table.size();
    sum["distinct_norms"] = table.distinct_size();
    sum["cutoff"] = table.cutoff_x();
    int code = kAllPass;
    std::optional<AxiomAParams> params;
    try {
        params = ctx.params();
    } catch (const AxiomAFailure& e) {
        sum["axiom_a"] = {{"accepted", false}, {"reason", e.what()}};
        code = kBoundFailure;
    }
    if (params) {
        const AxiomAReport rep = verify_axiom_a(table, *params);
        sum["axiom_a"] = {{"accepted", rep.pass},
                          {"kappa", params->kappa},
                          {"theta", params->theta},
                          {"a_const", params->a_const},
                          {"provenance", to_string(params->provenance)},
                          {"max_ratio", rep.max_ratio},
                          {"worst_x", rep.worst_x}};
        if (!rep.pass) code = kBoundFailure;
        ctx.log() << "axiom-a " << (rep.pass ? "pass" : "fail") << " max_ratio=" << fmt(rep.max_ratio) << " at x=" << fmt(rep.worst_x)
                  << "\n";
    } else {
        ctx.log() << "axiom-a rejected\n";
    }
    CsvWriter w(ctx.output("counts.csv"), ctx.prov(), {"x", "N", "R", "psi"});
    const double hi = table.cutoff_x();
    for (int i = 0; i < samples; ++i) {
        const double x = samples == 1 ? hi : std::min(hi, std::exp(std::log(hi) * i / (samples - 1)));
        const double N = static_cast<double>(counting_N(table, x));
        w.row({fmt(x), fmt(N), params ? fmt(remainder_R(table, *params, x)) : "nan", fmt(psi_direct(table, x))});
    }
    write_json(ctx.output("gen_summary.json"), sum);
    return code;
}

inline int task_eval(Context& ctx, const Fields& f) {
    std::vector<cplx> pts = points_field(f, "points");
    const int n_random = f.get_or<int>("random_points", 0);
    const AxiomAParams p = ctx.params();
    const auto sr = doubles(f, "sigma_range", {p.theta + 0.05, 3.0});
    const auto tr = doubles(f, "t_range", {-30.0, 30.0});
    f.reject_unknown();
    if (sr.size() != 2 || tr.size() != 2) throw ConfigError("field 'params.sigma_range'/'params.t_range': expected [lo, hi]");
    std::mt19937_64 rng(ctx.cfg().seed);
    for (int i = 0; i < n_random; ++i) {
        const double sg = sr[0] + (sr[1] - sr[0]) * detail::uniform01(rng);
        const double t = tr[0] + (tr[1] - tr[0]) * detail::uniform01(rng);
        pts.push_back({sg, t});
    }
    const AnyEvaluator ev = ctx.evaluator();
    CsvWriter w(ctx.output("eval.csv"), ctx.prov(),
                {"sigma", "t", "zeta_re", "zeta_im", "zeta_radius", "zeta_prime_re", "zeta_prime_im", "zeta_prime_radius", "status"});
    std::size_t infeasible = 0, conj_violations = 0, real_violations = 0;
    for (const cplx s : pts) {
        try {
            const auto [z, zp, zc] = visit_ev(ev, [&](const auto& e) {
                return std::tuple{e.zeta(s), e.zeta_prime(s), e.zeta(std::conj(s))};
            });
            if (zc.value != std::conj(z.value) || zc.radius != z.radius) ++conj_violations;
            if (s.imag() == 0.0 && z.value.imag() != 0.0) ++real_violations;
            w.row({fmt(s.real()), fmt(s.imag()), fmt(z.value.real()), fmt(z.value.imag()), fmt(z.radius), fmt(zp.value.real()),
                   fmt(zp.value.imag()), fmt(zp.radius), "ok"});
        } catch (const BeurlingError& e) {
            ++infeasible;
            w.row({fmt(s.real()), fmt(s.imag()), "", "", "", "", "", "", e.what()});
        }
    }
    ojson sum = summary_header(ctx, "eval");
    sum["evaluator"] = visit_ev(ev, [](const auto& e) { return e.name(); });
    sum["points"] = pts.size();
    sum["infeasible"] = infeasible;
    sum["conjugate_symmetry_violations"] = conj_violations;
    sum["real_axis_violations"] = real_violations;
    write_json(ctx.output("eval_summary.json"), sum);
    ctx.log() << "eval " << pts.size() << " points, " << infeasible << " infeasible, " << conj_violations << " conjugate and "
              << real_violations << " real-axis violations\n";
    if (conj_violations || real_violations) return kBoundFailure;
    return infeasible * 2 > pts.size() ? kInfeasible : kAllPass;
}

inline int task_sweep(Context& ctx, const Fields& f) {
    const AxiomAParams p = ctx.params();
    std::vector<BoundCase> cases;
    for (const auto& name : f.get_or<std::vector<std::string>>("cases", {"all"})) {
        if (name == "all") {
            cases.assign(kAllBoundCases.begin(), kAllBoundCases.end());
        } else if (auto c = bound_case_from_string(name)) {
            cases.push_back(*c);
        } else {
            throw ConfigError("field 'params.cases': unknown bound case '" + name + "'");
        }
    }
    Grid grid;
    grid.sigma_lo = p.theta + 0.05;
    {
        Fields g = f.sub("grid");
        grid.sigma_lo = g.get_or<double>("sigma_lo", grid.sigma_lo);
        grid.sigma_hi = g.get_or<double>("sigma_hi", grid.sigma_hi);
        grid.t_lo = g.get_or<double>("t_lo", grid.t_lo);
        grid.t_hi = g.get_or<double>("t_hi", grid.t_hi);
        grid.sigma_steps = g.get_or<int>("sigma_steps", grid.sigma_steps);
        grid.t_steps = g.get_or<int>("t_steps", grid.t_steps);
        grid.X = g.get_or<double>("X", grid.X);
        grid.margin = g.get_or<double>("margin", grid.margin);
        g.reject_unknown();
    }
    const bool disk = f.get_or<bool>("zero_free_disk", true);
    const std::vector<cplx> local = points_field(f, "local_points");
    const double local_tol = f.get_or<double>("local_tol", 1e-4);
    f.reject_unknown();

    const ElementTable& table = ctx.table();
    const auto reports = sweep_grid(cases, table, p, grid, ctx.cfg().jobs);
    CsvWriter w(ctx.output("bounds.csv"), ctx.prov(), {"case", "sigma", "t", "lhs", "radius", "rhs", "x_used", "outcome", "reason"});
    ojson sum = summary_header(ctx, "sweep-bounds");
    sum["params"] = {{"kappa", p.kappa}, {"theta", p.theta}, {"a_const", p.a_const}, {"provenance", to_string(p.provenance)}};
    sum["grid"] = {{"sigma_lo", grid.sigma_lo}, {"sigma_hi", grid.sigma_hi}, {"t_lo", grid.t_lo}, {"t_hi", grid.t_hi},
                   {"sigma_steps", grid.sigma_steps}, {"t_steps", grid.t_steps}, {"X", grid.X}};
    std::size_t points = 0, fails = 0, inds = 0;
    ojson per = ojson::array();
    for (const auto& r : reports) {
        for (const auto& pr : r.results) {
            w.row({to_string(r.bound_case), fmt(pr.s.real()), fmt(pr.s.imag()), fmt(pr.lhs), fmt(pr.radius), fmt(pr.rhs), fmt(pr.x_used),
                   to_string(pr.outcome), pr.reason});
        }
        per.push_back({{"case", to_string(r.bound_case)},
                       {"points", r.points},
                       {"passes", r.passes},
                       {"indeterminates", r.indeterminates},
                       {"failures", r.failures}});
        points += r.points;
        fails += r.failures;
        inds += r.indeterminates;
        ctx.log() << to_string(r.bound_case) << ": " << r.passes << " pass, " << r.failures << " fail, " << r.indeterminates
                  << " indeterminate\n";
    }
    sum["cases"] = per;
    sum["points"] = points;
    sum["failures"] = fails;
    sum["indeterminates"] = inds;
    if (disk) {
        const auto zd = visit_ev(ctx.evaluator(), [](const auto& e) { return verify_zero_free_disk(e); });
        sum["zero_free_disk"] = {{"radius", zd.radius}, {"winding", zd.winding}, {"residual", zd.residual}, {"pass", zd.pass}};
        if (!zd.pass) ++fails;
        ctx.log() << "zero-free disk r=" << fmt(zd.radius) << " winding=" << zd.winding << "\n";
    }
    ojson loc = ojson::array();
    for (const cplx z : local) {
        const auto rep = visit_ev(ctx.evaluator(), [&](const auto& e) {
            const ZeroList zl = local_zero_search(e, z, local_tol);
            return verify_logderiv_local(e, z, zl);
        });
        ojson br = ojson::array();
        for (const auto& b : rep.branches) {
            br.push_back({{"branch", b.branch == LocalBranch::LargeT ? "large-t" : "small-t"},
                          {"lhs", b.lhs},
                          {"radius", b.radius},
                          {"rhs", b.rhs},
                          {"outcome", to_string(b.outcome)}});
            if (b.outcome == Outcome::Fail) ++fails;
            if (b.outcome == Outcome::Indeterminate) ++inds;
        }
        loc.push_back({{"z", cplx_str(z)}, {"delta", rep.delta}, {"nearby_zeros", rep.nearby.size()}, {"branches", br}, {"pass", rep.pass}});
        ctx.log() << "local log-derivative at " << cplx_str(z) << ": " << (rep.pass ? "pass" : "not pass") << "\n";
    }
    if (!local.empty()) sum["local_logderiv"] = loc;
    write_json(ctx.output("bounds_summary.json"), sum);
    if (fails) return kBoundFailure;
    return inds * 2 > points ? kInfeasible : kAllPass;
}

inline int task_find_zeros(Context& ctx, const Fields& f) {
    LocateOptions opt;
    opt.tol = f.get_or<double>("tol", opt.tol);
    const auto rect = doubles(f, "rectangle", {});
    const bool survey = f.has("survey");
    ZeroList zl;
    const AnyEvaluator ev = ctx.evaluator();
    if (survey == !rect.empty()) throw ConfigError("field 'params': give exactly one of 'rectangle' or 'survey'");
    if (survey) {
        Fields s = f.sub("survey");
        const double lo = s.get<double>("sigma_lo"), hi = s.get<double>("sigma_hi"), tm = s.get<double>("t_max");
        s.reject_unknown();
        f.reject_unknown();
        zl = visit_ev(ev, [&](const auto& e) { return survey_zeros(e, lo, hi, tm, opt); });
    } else {
        if (rect.size() != 4) throw ConfigError("field 'params.rectangle': expected [sigma_lo, sigma_hi, t_lo, t_hi]");
        f.reject_unknown();
        zl = visit_ev(ev, [&](const auto& e) { return locate_zeros(e, {rect[0], rect[1], rect[2], rect[3]}, opt); });
    }
    write_zero_list_csv(ctx.output("zeros.csv"), zl, ctx.prov());
    long total = 0;
    for (const auto& z : zl.zeros) total += z.multiplicity;
    ojson sum = summary_header(ctx, "find-zeros");
    sum["zeros"] = total;
    sum["certificates"] = zl.certificates.size();
    sum["nudges"] = zl.nudges.size();
    write_json(ctx.output("zeros_summary.json"), sum);
    ctx.log() << "found " << total << " zeros\n";
    return kAllPass;
}

inline int task_check_counts(Context& ctx, const Fields& f) {
    const ZeroList zl = read_zero_list_csv(ctx.input(f.get<std::string>("zeros")));
    const double b = f.get<double>("b");
    const auto Ts = doubles(f, "T", {6.0, 20.0, 50.0});
    const double R = f.get_or<double>("R", 5.0);
    f.reject_unknown();
    const AxiomAParams p = ctx.params();
    CsvWriter w(ctx.output("counts.csv"), ctx.prov(), {"display", "b", "T", "count", "rhs", "pass"});
    std::size_t fails = 0, checks = 0;
    for (double T : Ts) {
        for (const auto& c : check_count_bounds(zl, p, {b, T, R})) {
            w.row({to_string(c.display), fmt(b), fmt(T), std::to_string(c.count), fmt(c.rhs), c.pass ? "true" : "false"});
            ++checks;
            if (!c.pass) ++fails;
        }
    }
    ctx.log() << checks << " count checks, " << fails << " failures\n";
    return fails ? kBoundFailure : kAllPass;
}

inline int task_build_contour(Context& ctx, const Fields& f) {
    const ZeroList zl = read_zero_list_csv(ctx.input(f.get<std::string>("zeros")));
    const double b = f.get<double>("b");
    const TranslateSet ts = TranslateSet::make(doubles(f, "translates", {0.0}));
    const double t_max = f.get<double>("T_max");
    const int samples = f.get_or<int>("samples", 200);
    f.reject_unknown();
    const AxiomAParams p = ctx.params();
    const GammaPath g = build_gamma(zl, p, b, ts, t_max);
    ojson pj = path_to_json(g);
    pj["provenance"] = provenance_json(ctx.prov());
    write_json(ctx.output("path.json"), pj);
    const SeparationReport sep = verify_separation(g, zl, ts);
    const auto lr = visit_ev(ctx.evaluator(), [&](const auto& e) { return verify_logderiv_on_gamma(e, g, ts, samples); });
    CsvWriter w(ctx.output("gamma_logderiv.csv"), ctx.prov(), {"sigma", "t", "alpha", "lhs", "radius", "rhs", "outcome", "reason"});
    for (const auto& s : lr.samples) {
        w.row({fmt(s.s.real()), fmt(s.s.imag()), fmt(s.alpha), fmt(s.lhs), fmt(s.radius), fmt(s.rhs), to_string(s.outcome), s.reason});
    }
    ojson sum = summary_header(ctx, "build-contour");
    sum["height"] = g.height;
    sum["segments"] = sep.segments;
    sum["separation"] = {{"min_ratio", std::isinf(sep.min_ratio) ? ojson("inf") : ojson(sep.min_ratio)},
                         {"min_pole_ratio", sep.min_pole_ratio},
                         {"pass", sep.pass}};
    sum["logderiv"] = {{"points", lr.points}, {"passes", lr.passes}, {"failures", lr.failures}, {"indeterminates", lr.indeterminates}};
    write_json(ctx.output("contour_summary.json"), sum);
    ctx.log() << "path to height " << fmt(g.height) << ", separation min_ratio=" << fmt(sep.min_ratio) << ", log-derivative "
              << lr.passes << "/" << lr.points << " pass\n";
    if (!sep.pass || lr.failures) return kBoundFailure;
    return lr.indeterminates * 2 > lr.points ? kInfeasible : kAllPass;
}

inline std::vector<double> heights_for(const GammaPath& g, const Fields& f) {
    if (f.has("T")) {
        auto Ts = doubles(f, "T", {});
        for (double T : Ts) (void)g.k_of(T);
        return Ts;
    }
    const auto range = doubles(f, "T_range", {4.0, g.height});
    if (range.size() != 2) throw ConfigError("field 'params.T_range': expected [lo, hi]");
    auto Ts = path_heights(g, range[0], range[1]);
    if (Ts.empty()) throw ConfigError("field 'params.T_range': no path height in range");
    return Ts;
}

inline void write_deviation_csv(Context& ctx, const std::string& name, const ConvergenceStudy& st) {
    CsvWriter w(ctx.output(name), ctx.prov(),
                {"x", "T", "psi", "main", "zero_sum", "deviation", "envelope", "implied_constant", "on_jump", "zeros_used"});
    for (const auto& c : st.cells) {
        w.row({fmt(c.x), fmt(c.T), fmt(c.psi_direct), fmt(c.main_term), fmt(c.zero_sum), fmt(c.deviation), fmt(c.envelope),
               fmt(c.implied_constant), c.on_jump ? "true" : "false", std::to_string(c.zeros_used)});
    }
}

inline int task_explicit(Context& ctx, const Fields& f, bool study) {
    const ZeroList zl = read_zero_list_csv(ctx.input(f.get<std::string>("zeros")));
    const GammaPath g = path_from_json(read_json(ctx.input(f.get<std::string>("path"))));
    const auto xs = doubles(f, "x", {});
    if (xs.empty()) throw ConfigError("field 'params.x': required");
    const auto Ts = heights_for(g, f);
    f.reject_unknown();
    const ConvergenceStudy st = convergence_study(ctx.table(), zl, g, xs, Ts, ctx.cfg().jobs);
    write_deviation_csv(ctx, study ? "study.csv" : "deviation.csv", st);
    ojson sum = summary_header(ctx, study ? "study" : "explicit-formula");
    ojson rms = ojson::array();
    for (std::size_t i = 0; i < Ts.size(); ++i) rms.push_back({{"T", Ts[i]}, {"rms", st.rms_at(i)}});
    sum["rms"] = rms;
    double max_c = 0.0;
    bool within = true;
    for (const auto& c : st.cells) {
        max_c = std::max(max_c, c.implied_constant);
        within = within && c.deviation <= c.envelope;
    }
    sum["max_implied_constant"] = max_c;
    sum["within_envelope"] = within;
    if (Ts.size() >= 2) {
        sum["rms_first"] = st.rms_at(0);
        sum["rms_last"] = st.rms_at(Ts.size() - 1);
        sum["rms_decreased"] = st.rms_at(Ts.size() - 1) < st.rms_at(0);
    }
    write_json(ctx.output(study ? "study_summary.json" : "deviation_summary.json"), sum);
    ctx.log() << st.cells.size() << " cells, max implied constant " << fmt(max_c) << "\n";
    return kAllPass;
}

inline int task_perron(Context& ctx, const Fields& f) {
    const ZeroList zl = read_zero_list_csv(ctx.input(f.get<std::string>("zeros")));
    const GammaPath g = path_from_json(read_json(ctx.input(f.get<std::string>("path"))));
    const double x = f.get<double>("x");
    std::vector<double> Ts;
    if (f.has("T_near")) {
        for (double want : doubles(f, "T_near", {})) {
            double best = g.t_seq[1];
            for (std::size_t k = 1; k < g.t_seq.size(); ++k) {
                if (std::abs(g.t_seq[k] - want) < std::abs(best - want)) best = g.t_seq[k];
            }
            Ts.push_back(best);
        }
    } else {
        Ts = heights_for(g, f);
    }
    const double p = f.get_or<double>("p", 0.0);
    f.reject_unknown();
    const ElementTable& table = ctx.table();
    const AnyEvaluator ev = ctx.evaluator();
    CsvWriter w(ctx.output("perron.csv"), ctx.prov(),
                {"x", "T", "p", "integral", "integral_imag", "quad_error", "zero_sum", "estimate", "psi", "gap", "evaluations", "converged"});
    for (double T : Ts) {
        const PerronReport r = visit_ev(ev, [&](const auto& e) { return perron_check(table, e, zl, g, x, T, p); });
        w.row({fmt(r.x), fmt(r.T), fmt(r.p), fmt(r.integral), fmt(r.integral_imag), fmt(r.quad_error), fmt(r.zero_sum), fmt(r.estimate),
               fmt(r.psi), fmt(r.gap), std::to_string(r.evaluations), r.converged ? "true" : "false"});
        ctx.log() << "perron x=" << fmt(x) << " T=" << fmt(T) << " gap=" << fmt(r.gap) << "\n";
    }
    return kAllPass;
}

/// Runs one configured task; never throws.
inline RunResult run(const RunConfig& cfg, std::ostream& log = std::cout) {
    RunResult res;
    try {
        Context ctx(cfg, log);
        const Fields f(cfg.params, "params");
        if (cfg.task == "gen") res.exit_code = task_gen(ctx, f);
        else if (cfg.task == "eval") res.exit_code = task_eval(ctx, f);
        else if (cfg.task == "sweep-bounds") res.exit_code = task_sweep(ctx, f);
        else if (cfg.task == "find-zeros") res.exit_code = task_find_zeros(ctx, f);
        else if (cfg.task == "check-counts") res.exit_code = task_check_counts(ctx, f);
        else if (cfg.task == "build-contour") res.exit_code = task_build_contour(ctx, f);
        else if (cfg.task == "explicit-formula") res.exit_code = task_explicit(ctx, f, false);
        else if (cfg.task == "perron") res.exit_code = task_perron(ctx, f);
        else if (cfg.task == "study") res.exit_code = task_explicit(ctx, f, true);
        res.artifacts = ctx.artifacts();
    } catch (const ConfigError& e) {
        res.exit_code = kConfigError;
        res.message = std::string("config error: ") + e.what();
    } catch (const DomainError& e) {
        res.exit_code = kConfigError;
        res.message = std::string("parameter out of domain: ") + e.what();
    } catch (const InvalidSystemError& e) {
        res.exit_code = kConfigError;
        res.message = std::string("invalid system: ") + e.what();
    } catch (const NoAdmissibleChoiceError& e) {
        res.exit_code = kBoundFailure;
        res.message = std::string("no admissible contour choice: ") + e.what();
    } catch (const BeurlingError& e) {
        res.exit_code = kInfeasible;
        res.message = std::string("infeasible: ") + e.what();
    } catch (const std::filesystem::filesystem_error& e) {
        res.exit_code = kConfigError;
        res.message = std::string("filesystem: ") + e.what();
    }
    return res;
}

}  // namespace beurling::cli

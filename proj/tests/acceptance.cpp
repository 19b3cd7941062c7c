#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include <beurling/beurling.hpp>

namespace fs = std::filesystem;
using namespace beurling;
using json = nlohmann::json;

namespace {

constexpr double kBasel = 1.6449340668482264;
constexpr double kEpsEval = 1e-6;
constexpr double kOrdinateTol = 1e-2;
constexpr double kIndeterminateShare = 0.05;

const double kClassical[] = {14.1347, 21.0220, 25.0109, 30.4249, 32.9351, 37.5862, 40.9187, 43.3271, 48.0052, 49.7738};

// seconds allowed per criterion
const std::map<int, double> kRuntime = {{1, 30}, {2, 60}, {3, 600}, {4, 120}, {5, 300}, {6, 300}, {7, 300}, {8, 120}, {9, 600}, {10, 1800}};

struct Verdict {
    bool pass = false;
    std::string detail;
};

struct Runner {
    fs::path source;
    fs::path out;
    int jobs = 1;

    std::vector<fs::path> configs(int n) const {
        std::vector<fs::path> v;
        const std::string stem = "c" + std::to_string(n) + "_";
        for (const auto& e : fs::directory_iterator(source / "configs" / "acceptance")) {
            if (e.path().filename().string().rfind(stem, 0) == 0) v.push_back(e.path());
        }
        std::sort(v.begin(), v.end());
        return v;
    }

    std::vector<cli::RunResult> run(int n, const fs::path& dir) const {
        std::vector<cli::RunResult> res;
        for (const auto& p : configs(n)) {
            cli::RunConfig cfg = cli::load_config(p);
            cfg.out_dir = dir;
            cfg.jobs = jobs;
            std::ostringstream log;
            res.push_back(cli::run(cfg, log));
            if (!res.back().message.empty()) res.back().message = p.filename().string() + ": " + res.back().message;
        }
        return res;
    }
};

double num(const CsvTable& t, std::size_t row, const std::string& col) { return parse_double(t.rows.at(row).at(t.column(col))); }

std::string first_message(const std::vector<cli::RunResult>& rs) {
    for (const auto& r : rs) {
        if (!r.message.empty()) return r.message;
    }
    return "";
}

Verdict criterion1(const Runner& r, const fs::path& dir) {
    const auto rs = r.run(1, dir);
    if (rs.size() != 4) return {false, "expected 4 configs"};
    std::ostringstream d;
    bool ok = true;
    for (const char* prefix : {"", "theta04_", "theta05_"}) {
        const json s = read_json(dir / (std::string(prefix) + "gen_summary.json"));
        const json& ax = s.at("axiom_a");
        const bool good = ax.at("accepted").get<bool>() && ax.at("max_ratio").get<double>() == 1.0 && ax.at("worst_x").get<double>() == 1.0;
        ok = ok && good;
        d << "theta=" << ax.at("theta").get<double>() << " max_ratio=" << ax.at("max_ratio").get<double>() << " at x="
          << ax.at("worst_x").get<double>() << "; ";
    }
    ok = ok && rs[0].exit_code == 0 && rs[1].exit_code == 0 && rs[2].exit_code == 0;
    const json two = read_json(dir / "two_gen_gen_summary.json");
    const bool rejected = rs[3].exit_code == cli::kBoundFailure && !two.at("axiom_a").at("accepted").get<bool>();
    d << "[2,3] " << (rejected ? "rejected" : "accepted");
    return {ok && rejected, d.str()};
}

Verdict criterion2(const Runner& r, const fs::path& dir) {
    const auto rs = r.run(2, dir);
    if (rs.at(0).exit_code != 0) return {false, first_message(rs)};
    const CsvTable t = read_csv(dir / "eval.csv");
    const double re = num(t, 0, "zeta_re"), im = num(t, 0, "zeta_im"), rad = num(t, 0, "zeta_radius");
    const double err = std::hypot(re - kBasel, im);
    const json s = read_json(dir / "eval_summary.json");
    const std::size_t pts = s.at("points"), conj = s.at("conjugate_symmetry_violations"), real = s.at("real_axis_violations"),
                      inf = s.at("infeasible");
    std::ostringstream d;
    d << "zeta(2)=" << fmt(re) << " err=" << fmt(err) << " radius=" << fmt(rad) << "; " << pts << " points, " << conj
      << " conjugate and " << real << " real-axis violations, " << inf << " infeasible";
    const bool ok = err <= rad && rad <= kEpsEval && std::abs(re - 1.644934) < 5e-7 && pts >= 1000 && conj == 0 && real == 0 && inf == 0;
    return {ok, d.str()};
}

Verdict criterion3(const Runner& r, const fs::path& dir) {
    const auto rs = r.run(3, dir);
    std::ostringstream d;
    bool ok = true;
    for (const char* prefix : {"rational_", "gaussian_"}) {
        const json s = read_json(dir / (std::string(prefix) + "bounds_summary.json"));
        const std::size_t pts = s.at("points"), fails = s.at("failures"), inds = s.at("indeterminates");
        const std::size_t cases = s.at("cases").size();
        const json& g = s.at("grid");
        const int ns = g.at("sigma_steps"), nt = g.at("t_steps");
        const double lo = g.at("sigma_lo"), theta = s.at("params").at("theta");
        ok = ok && cases == kAllBoundCases.size() && fails == 0 && inds < kIndeterminateShare * pts && ns >= 50 && nt >= 60 &&
             lo <= theta + 0.05 + 1e-12 && g.at("sigma_hi").get<double>() >= 3.0 && g.at("t_hi").get<double>() >= 30.0 &&
             g.at("t_lo").get<double>() <= -30.0;
        d << prefix << "grid " << ns << "x" << nt << " from sigma " << fmt(lo) << ", " << cases << " cases, " << pts << " in-domain points, "
          << fails << " failures, " << inds << " indeterminate; ";
    }
    for (const auto& x : rs) ok = ok && x.exit_code == 0;
    return {ok, d.str()};
}

Verdict criterion4(const Runner& r, const fs::path& dir) {
    const auto rs = r.run(4, dir);
    std::ostringstream d;
    bool ok = true;
    for (const char* prefix : {"rational_", "gaussian_"}) {
        const json s = read_json(dir / (std::string(prefix) + "bounds_summary.json"));
        const json& z = s.at("zero_free_disk");
        ok = ok && z.at("winding").get<long>() == 0 && z.at("pass").get<bool>();
        d << prefix << "radius=" << fmt(z.at("radius").get<double>()) << " winding=" << z.at("winding").get<long>() << "; ";
    }
    for (const auto& x : rs) ok = ok && x.exit_code == 0;
    return {ok, d.str()};
}

Verdict criterion5(const Runner& r, const fs::path& dir) {
    const auto rs = r.run(5, dir);
    if (rs.at(0).exit_code != 0) return {false, first_message(rs)};
    const ZeroList zl = read_zero_list_csv(dir / "zeros.csv");
    std::vector<double> gammas;
    for (const auto& z : zl.zeros) {
        for (int m = 0; m < z.multiplicity; ++m) gammas.push_back(z.gamma);
    }
    std::sort(gammas.begin(), gammas.end());
    std::ostringstream d;
    d << gammas.size() << " zeros (expected 10)";
    bool ok = gammas.size() == 10;
    double worst = 0.0;
    for (std::size_t i = 0; i < std::min<std::size_t>(gammas.size(), 10); ++i) worst = std::max(worst, std::abs(gammas[i] - kClassical[i]));
    ok = ok && worst <= kOrdinateTol;
    d << ", first 10 ordinates within " << fmt(worst);
    if (gammas.size() > 10) d << ", extra ordinate " << fmt(gammas[10]);
    return {ok, d.str()};
}

Verdict criterion6(const Runner& r, const fs::path& dir) {
    const auto rs = r.run(6, dir);
    for (const auto& x : rs) {
        if (x.exit_code != 0) return {false, first_message(rs) + " exit " + std::to_string(x.exit_code)};
    }
    const CsvTable t = read_csv(dir / "counts.csv");
    std::size_t fails = 0;
    std::map<double, std::size_t> per_T;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (t.rows[i][t.column("pass")] != "true") ++fails;
        per_T[num(t, i, "T")] += 1;
    }
    std::ostringstream d;
    d << t.rows.size() << " display checks over T={6,20,50}, " << fails << " failures";
    return {fails == 0 && per_T.size() == 3, d.str()};
}

Verdict criterion7(const Runner& r, const fs::path& dir) {
    const auto rs = r.run(7, dir);
    for (const auto& x : rs) {
        if (x.exit_code != 0) return {false, first_message(rs) + " exit " + std::to_string(x.exit_code)};
    }
    const json s = read_json(dir / "contour_summary.json");
    const json& sep = s.at("separation");
    const double ratio = sep.at("min_ratio").is_string() ? INFINITY : sep.at("min_ratio").get<double>();
    const std::size_t pts = s.at("logderiv").at("points"), fails = s.at("logderiv").at("failures"),
                      inds = s.at("logderiv").at("indeterminates");
    std::ostringstream d;
    d << "height " << fmt(s.at("height").get<double>()) << ", min_ratio " << fmt(ratio) << ", log-derivative " << pts << " samples, "
      << fails << " failures, " << inds << " indeterminate";
    return {ratio >= 1.0 && sep.at("pass").get<bool>() && pts >= 100 && fails == 0 && inds == 0, d.str()};
}

Verdict criterion8(const Runner& r, const fs::path& dir) {
    const auto rs = r.run(8, dir);
    if (rs.at(0).exit_code != 0) return {false, first_message(rs)};
    const json s = read_json(dir / "bounds_summary.json");
    std::ostringstream d;
    bool ok = s.at("local_logderiv").size() == 3;
    for (const auto& p : s.at("local_logderiv")) {
        ok = ok && p.at("pass").get<bool>();
        d << p.at("z").get<std::string>() << (p.at("pass").get<bool>() ? " pass" : " not pass") << "; ";
    }
    return {ok, d.str()};
}

Verdict criterion9(const Runner& r, const fs::path& dir) {
    const auto rs = r.run(9, dir);
    for (const auto& x : rs) {
        if (x.exit_code != 0) return {false, first_message(rs) + " exit " + std::to_string(x.exit_code)};
    }
    const json s = read_json(dir / "study_summary.json");
    const double first = s.at("rms_first"), last = s.at("rms_last");
    const json& rms = s.at("rms");
    const double T0 = rms.front().at("T"), T1 = rms.back().at("T");
    const CsvTable p = read_csv(dir / "perron.csv");
    const bool perron_ok = p.rows.size() == 2 && num(p, 1, "gap") < num(p, 0, "gap") && p.rows[0][p.column("converged")] == "true" &&
                           p.rows[1][p.column("converged")] == "true";
    std::ostringstream d;
    d << "rms " << fmt(first) << " at T=" << fmt(T0) << " -> " << fmt(last) << " at T=" << fmt(T1) << " (factor " << fmt(first / last)
      << "), max implied constant " << fmt(s.at("max_implied_constant").get<double>()) << ", within envelope "
      << (s.at("within_envelope").get<bool>() ? "yes" : "no");
    if (p.rows.size() == 2) {
        d << "; perron gap " << fmt(num(p, 0, "gap")) << " at T=" << fmt(num(p, 0, "T")) << " -> " << fmt(num(p, 1, "gap")) << " at T="
          << fmt(num(p, 1, "T"));
    }
    const bool ok = last < first && T0 >= 4.0 && T1 <= 100.0 && s.at("within_envelope").get<bool>() && perron_ok;
    return {ok, d.str()};
}

std::vector<std::string> stable_lines(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find("timestamp") == std::string::npos) out.push_back(line);
    }
    return out;
}

Verdict criterion10(const Runner& r, const fs::path& dir) {
    const fs::path a = dir / "a", b = dir / "b";
    std::size_t files = 0, differing = 0;
    std::string first_diff;
    for (int n = 1; n <= 9; ++n) {
        const fs::path da = a / ("criterion_" + std::to_string(n)), db = b / ("criterion_" + std::to_string(n));
        fs::remove_all(da);
        fs::remove_all(db);
        r.run(n, da);
        r.run(n, db);
        std::vector<fs::path> names;
        for (const auto& e : fs::directory_iterator(da)) names.push_back(e.path().filename());
        std::sort(names.begin(), names.end());
        for (const auto& name : names) {
            ++files;
            if (!fs::exists(db / name) || stable_lines(da / name) != stable_lines(db / name)) {
                ++differing;
                if (first_diff.empty()) first_diff = (da / name).string();
            }
        }
    }
    std::ostringstream d;
    d << files << " artifacts compared, " << differing << " differ";
    if (!first_diff.empty()) d << " (first: " << first_diff << ")";
    return {files > 0 && differing == 0, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance suite"};
    std::vector<int> criteria;
    std::string out = "acceptance_artifacts";
    std::string source = BEURLING_SOURCE_DIR;
    int jobs = 1;
    app.add_option("--criterion", criteria, "criterion numbers (default: all)")->check(CLI::Range(1, 10));
    app.add_option("--out", out, "artifact directory");
    app.add_option("--source", source, "source tree holding configs/acceptance");
    app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);
    if (criteria.empty()) {
        for (int i = 1; i <= 10; ++i) criteria.push_back(i);
    }

    const Runner runner{source, out, jobs};
    bool all = true;
    for (int n : criteria) {
        const fs::path dir = fs::path(out) / ("criterion_" + std::to_string(n));
        fs::remove_all(dir);
        fs::create_directories(dir);
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            switch (n) {
                case 1: v = criterion1(runner, dir); break;
                case 2: v = criterion2(runner, dir); break;
                case 3: v = criterion3(runner, dir); break;
                case 4: v = criterion4(runner, dir); break;
                case 5: v = criterion5(runner, dir); break;
                case 6: v = criterion6(runner, dir); break;
                case 7: v = criterion7(runner, dir); break;
                case 8: v = criterion8(runner, dir); break;
                case 9: v = criterion9(runner, dir); break;
                default: v = criterion10(runner, dir); break;
            }
        } catch (const std::exception& e) {
            v = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const double limit = kRuntime.at(n);
        if (secs > limit) {
            v.pass = false;
            v.detail += "; runtime over " + fmt(limit) + " s";
        }
        std::ostringstream t;
        t.precision(3);
        t << std::fixed << secs;
        std::cout << "criterion " << n << ": " << (v.pass ? "PASS" : "FAIL") << " - " << v.detail << " [" << t.str() << " s]" << std::endl;
        all = all && v.pass;
    }
    return all ? 0 : 1;
}

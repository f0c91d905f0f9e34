#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "bvlab/errors.hpp"
#include "bvlab/format.hpp"
#include "bvlab/oracle.hpp"
#include "bvlab/probe.hpp"
#include "bvlab/report_json.hpp"
#include "bvlab/viscosity.hpp"

namespace bvlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

Command parse_command(const std::string& name) {
    if (name == "solve") return Command::solve;
    if (name == "oracle") return Command::oracle;
    if (name == "sweep") return Command::sweep;
    if (name == "probe") return Command::probe;
    if (name == "figure1") return Command::figure1;
    if (name == "verify") return Command::verify;
    throw ConfigError("command", "unknown command '" + name + "'");
}

std::string to_string(Command c) {
    switch (c) {
        case Command::solve: return "solve";
        case Command::oracle: return "oracle";
        case Command::sweep: return "sweep";
        case Command::probe: return "probe";
        case Command::figure1: return "figure1";
        case Command::verify: return "verify";
    }
    return "unknown";
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key, "expected a real number, got '" + v + "'");
    }
}

long long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long d = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key, "expected an integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key, "expected true/false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_real(key, trim(item)));
    if (out.empty()) throw ConfigError(key, "empty list");
    return out;
}

void check(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError(key, what);
}

}  // namespace

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (key == "command") cfg.command = parse_command(v);
    else if (key == "mu") cfg.mu = to_real(key, v);
    else if (key == "alpha") cfg.alpha = to_real(key, v);
    else if (key == "M") cfg.M = to_real(key, v);
    else if (key == "grid_exp") cfg.grid_exp = static_cast<int>(to_int(key, v));
    else if (key == "k_max") cfg.k_max = static_cast<int>(to_int(key, v));
    else if (key == "out_dir") cfg.out_dir = v;
    else if (key == "tag") cfg.tag = v;
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(key, v));
    else if (key == "jobs") cfg.jobs = static_cast<int>(to_int(key, v));
    else if (key == "newton_tol") cfg.newton_tol = to_real(key, v);
    else if (key == "shooting_tol") cfg.shooting_tol = to_real(key, v);
    else if (key == "verify_newton") cfg.verify_newton = to_bool(key, v);
    else if (key == "window_lo") cfg.window_lo = to_real(key, v);
    else if (key == "window_hi") cfg.window_hi = to_real(key, v);
    else if (key == "sweep_mu") cfg.sweep_mu = to_list(key, v);
    else if (key == "sweep_alpha") cfg.sweep_alpha = to_list(key, v);
    else if (key == "sweep_M") cfg.sweep_M = to_list(key, v);
    else if (key == "accept_jump_rel") cfg.accept_jump_rel = to_real(key, v);
    else if (key == "accept_l1_rel") cfg.accept_l1_rel = to_real(key, v);
    else if (key == "accept_lp_growth") cfg.accept_lp_growth = to_real(key, v);
    else if (key == "accept_lp_ratio") cfg.accept_lp_ratio = to_real(key, v);
    else throw ConfigError(key, "unknown key");
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot read '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(line, "expected key=value");
        apply_key(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
}

void RunConfig::validate() const {
    check(mu > 1.0 && mu < 2.0, "mu", "must lie in (1,2)");
    check(alpha > 0.0 && alpha < 1.0, "alpha", "must lie in (0,1)");
    check(std::isfinite(M) && M >= 0.0, "M", "must be finite and >= 0");
    check(grid_exp >= 3 && grid_exp <= 22, "grid_exp", "must lie in [3,22]");
    check(k_max >= 1, "k_max", "must be >= 1");
    check(!out_dir.empty(), "out_dir", "must not be empty");
    check(!tag.empty() && tag.find('/') == std::string::npos, "tag", "must be a non-empty file name");
    check(jobs >= 0, "jobs", "must be >= 0");
    check(newton_tol > 0.0, "newton_tol", "must be > 0");
    check(shooting_tol > 0.0, "shooting_tol", "must be > 0");
    check(window_lo > -1.0 && window_lo < window_hi, "window_lo", "must satisfy -1 < window_lo < window_hi");
    check(window_hi < 1.0, "window_hi", "must be < 1");
    for (double v : sweep_mu) check(v > 1.0 && v < 2.0, "sweep_mu", "entries must lie in (1,2)");
    for (double v : sweep_alpha) check(v > 0.0 && v < 1.0, "sweep_alpha", "entries must lie in (0,1)");
    for (double v : sweep_M) check(std::isfinite(v) && v >= 0.0, "sweep_M", "entries must be finite and >= 0");
    check(accept_jump_rel > 0.0, "accept_jump_rel", "must be > 0");
    check(accept_l1_rel > 0.0, "accept_l1_rel", "must be > 0");
    check(accept_lp_growth > 0.0, "accept_lp_growth", "must be > 0");
    check(accept_lp_ratio > 0.0, "accept_lp_ratio", "must be > 0");
}

namespace {

json config_echo(const RunConfig& c) {
    return {{"command", to_string(c.command)},
            {"mu", json_number(c.mu)},
            {"alpha", json_number(c.alpha)},
            {"M", json_number(c.M)},
            {"grid_exp", c.grid_exp},
            {"k_max", c.k_max},
            {"out_dir", c.out_dir},
            {"tag", c.tag},
            {"seed", c.seed},
            {"newton_tol", json_number(c.newton_tol)},
            {"shooting_tol", json_number(c.shooting_tol)},
            {"verify_newton", c.verify_newton},
            {"window", {json_number(c.window_lo), json_number(c.window_hi)}},
            {"sweep_mu", c.sweep_mu},
            {"sweep_alpha", c.sweep_alpha},
            {"sweep_M", c.sweep_M},
            {"accept_jump_rel", json_number(c.accept_jump_rel)},
            {"accept_l1_rel", json_number(c.accept_l1_rel)},
            {"accept_lp_growth", json_number(c.accept_lp_growth)},
            {"accept_lp_ratio", json_number(c.accept_lp_ratio)}};
}

struct Point {
    double mu, alpha, M;
};

NonAutonomousIntegrand integrand_of(const Point& p) { return {MuEllipticProfile(p.mu), HoelderWeight(p.alpha)}; }

Grid1D grid_of(const RunConfig& c) { return Grid1D(-1.0, 1.0, 1 << c.grid_exp); }

ViscosityConfig viscosity_config(const RunConfig& c, const Point& p) {
    ViscosityConfig v;
    v.grid = grid_of(c);
    v.bc = {0.0, p.M};
    v.k_max = c.k_max;
    v.newton_tol = c.newton_tol;
    v.shooting_tol = c.shooting_tol;
    v.verify_with_newton = c.verify_newton;
    return v;
}

class Checks {
public:
    void add(const std::string& name, double value, double limit, bool pass) {
        list_.push_back({{"name", name}, {"value", json_number(value)}, {"limit", json_number(limit)}, {"pass", pass}});
        ok_ = ok_ && pass;
    }
    bool ok() const { return ok_; }
    const json& list() const { return list_; }

private:
    json list_ = json::array();
    bool ok_ = true;
};

struct OracleOutcome {
    M0Result m0;
    OracleKind kind = OracleKind::sobolev;
    std::optional<OracleSolution> solution;
};

OracleOutcome run_oracle(const Point& p, const Grid1D& grid, const fs::path& dir) {
    OracleOutcome o;
    o.m0 = compute_M0(p.mu, p.alpha);
    o.kind = classify(p.mu, p.alpha, p.M);
    json j;
    if (o.kind == OracleKind::degenerate) {
        j = {{"mu", json_number(p.mu)}, {"alpha", json_number(p.alpha)}, {"M", json_number(p.M)},
             {"M0", json_number(o.m0.value)}, {"kind", "degenerate"}};
    } else {
        o.solution = solve_oracle(p.mu, p.alpha, grid, p.M);
        j = to_json(*o.solution);
        j["discrete_energy"] = to_json(oracle_energy(*o.solution, integrand_of(p)));
        write_bv_csv((dir / "oracle_minimizer.csv").string(), o.solution->minimizer);
    }
    j["quadrature"] = to_json(o.m0);
    write_json((dir / "oracle.json").string(), j);
    return o;
}

std::vector<ViscosityState> run_solve(const RunConfig& c, const Point& p, const fs::path& dir) {
    auto states = run_sequence(integrand_of(p), viscosity_config(c, p));
    const fs::path run = dir / ("run_" + c.tag);
    fs::create_directories(run);
    json seq = json::array();
    for (const auto& s : states) {
        const std::string stem = "k" + std::to_string(s.k);
        write_state_csv((run / (stem + ".csv")).string(), s);
        write_json((run / (stem + ".json")).string(), to_json(s));
        seq.push_back(to_json(s));
    }
    write_json((run / "sequence.json").string(), seq);
    return states;
}

const ViscosityState* state_at(const std::vector<ViscosityState>& states, int k) {
    for (const auto& s : states) {
        if (s.k == k) return &s;
    }
    return nullptr;
}

// Probe artifacts and acceptance checks for one parameter point.
json run_probe(const RunConfig& c, const Point& p, const std::vector<ViscosityState>& states,
               const OracleOutcome& orc, const fs::path& dir, Checks& checks) {
    const Grid1D g = grid_of(c);
    const Interval dom{g.a(), g.b()};
    const Interval K{c.window_lo, c.window_hi};
    const auto th = thresholds(p.mu, p.alpha, 1);
    json out;
    out["thresholds"] = to_json(th);

    const std::vector<double> ps{1.0, 1.05, 1.2, 2.0};
    const auto lp = lp_sweep(states, ps, dom);
    write_lp_sweep_csv((dir / "lp_sweep.csv").string(), lp);
    out["lp_sweep"] = to_json(lp);

    const auto hs = default_h_range(g, K);
    std::vector<NikolskiiReport> nik;
    for (const auto& s : states) {
        const CellField d{g, s.cell_slopes};
        nik.push_back(th.kappa_empty ? nikolskii_seminorm(d, 0.5 * p.alpha, K, hs)
                                     : nikolskii_with_weight(d, 0.5 * p.alpha, th.kappa_mid(), p.mu, p.alpha, K, hs));
    }
    write_nikolskii_csv((dir / "nikolskii.csv").string(), lp.ks, nik);
    json nj = json::array();
    for (std::size_t i = 0; i < nik.size(); ++i) {
        auto e = to_json(nik[i]);
        e["k"] = lp.ks[i];
        nj.push_back(e);
    }
    out["nikolskii"] = nj;

    if (states.size() >= 3) {
        const auto jr = jump_detect(states);
        out["jump"] = to_json(jr);
        if (orc.kind == OracleKind::jump) {
            const double target = p.M - orc.m0.value;
            checks.add("jump_detected", jr.no_jump ? 0.0 : 1.0, 1.0, !jr.no_jump);
            checks.add("jump_location", std::abs(jr.location), g.dx(), std::abs(jr.location) <= g.dx());
            const double rel = std::abs(jr.size - target) / target;
            checks.add("jump_size_rel", rel, c.accept_jump_rel, rel <= c.accept_jump_rel);
        } else if (orc.kind == OracleKind::sobolev) {
            checks.add("no_jump", jr.no_jump ? 1.0 : 0.0, 1.0, jr.no_jump);
        }
    }

    if (orc.solution) {
        const double l1 = l1_distance(states.back().u_k, orc.solution->minimizer);
        const double lim = c.accept_l1_rel * std::max(p.M, 1e-300) * (g.b() - g.a());
        checks.add("l1_distance", l1, lim, l1 <= lim);
    }

    // integral of |u'|^p: growth for the jump branch, stability below p_max otherwise
    const ViscosityState* s64 = state_at(states, 64);
    if (orc.kind == OracleKind::jump && s64 && c.k_max > 64) {
        const std::size_t i64 = static_cast<std::size_t>(s64 - states.data());
        const double growth = lp.integral(lp.ks.size() - 1, 2) / lp.integral(i64, 2);
        checks.add("lp_growth_p1.2", growth, c.accept_lp_growth, growth >= c.accept_lp_growth);
    } else if (orc.kind == OracleKind::sobolev && states.size() >= 2) {
        const std::size_t n = lp.ks.size();
        const double ratio = lp.integral(n - 1, 1) / lp.integral(n - 2, 1);
        checks.add("lp_ratio_p1.05", ratio, c.accept_lp_ratio, ratio <= c.accept_lp_ratio);
    }
    return out;
}

int finish(const fs::path& dir, json summary, const Checks& checks, std::ostream& log) {
    summary["checks"] = checks.list();
    summary["pass"] = checks.ok();
    write_json((dir / "summary.json").string(), summary);
    for (const auto& ch : checks.list()) {
        log << (ch["pass"].get<bool>() ? "PASS " : "FAIL ") << ch["name"].get<std::string>() << " value="
            << ch["value"].dump() << " limit=" << ch["limit"].dump() << '\n';
    }
    return checks.ok() ? 0 : 3;
}

int pipeline(const RunConfig& c, const Point& p, const fs::path& dir, bool probe, std::ostream& log) {
    const auto orc = run_oracle(p, grid_of(c), dir);
    const auto states = run_solve(c, p, dir);
    Checks checks;
    json summary = {{"mu", json_number(p.mu)}, {"alpha", json_number(p.alpha)}, {"M", json_number(p.M)},
                    {"M0", json_number(orc.m0.value)}, {"kind", to_string(orc.kind)}};
    if (probe) summary["probe"] = run_probe(c, p, states, orc, dir, checks);
    write_json((dir / "probe.json").string(), summary);
    return finish(dir, summary, checks, log);
}

int run_sweep(const RunConfig& c, const fs::path& dir, std::ostream& log) {
    std::vector<Point> pts;
    for (double mu : c.sweep_mu) {
        for (double a : c.sweep_alpha) {
            for (double M : c.sweep_M) pts.push_back({mu, a, M});
        }
    }
    const int jobs = c.jobs > 0 ? c.jobs : std::max(1u, std::thread::hardware_concurrency());
    std::vector<int> codes(pts.size(), 0);
    std::vector<std::string> logs(pts.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < pts.size(); i = next++) {
            std::ostringstream os;
            const fs::path pd = dir / ("point_" + std::to_string(i));
            try {
                fs::create_directories(pd);
                codes[i] = pipeline(c, pts[i], pd, true, os);
            } catch (const Error& e) {
                os << "solver failure (mu=" << fmt17(pts[i].mu) << ", alpha=" << fmt17(pts[i].alpha)
                   << ", M=" << fmt17(pts[i].M) << "): " << e.what() << '\n';
                codes[i] = 1;
            }
            logs[i] = os.str();
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min<int>(jobs, static_cast<int>(pts.size())); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::ofstream csv(dir / "sweep.csv", std::ios::binary);
    csv << "point,mu,alpha,M,status\n";
    int worst = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        log << "point_" << i << ":\n" << logs[i];
        csv << i << ',' << fmt17(pts[i].mu) << ',' << fmt17(pts[i].alpha) << ',' << fmt17(pts[i].M) << ','
            << codes[i] << '\n';
        if (codes[i] == 1) worst = 1;
        else if (codes[i] != 0 && worst == 0) worst = codes[i];
    }
    return worst;
}

}  // namespace

int dispatch(const RunConfig& cfg, std::ostream& log) {
    RunConfig c = cfg;
    if (c.command == Command::figure1) {
        c.mu = 1.4;
        c.alpha = 0.25;
        c.M = 20.0;
        c.grid_exp = 14;
        c.k_max = 512;
    }
    c.validate();
    const fs::path dir(c.out_dir);
    fs::create_directories(dir);
    write_json((dir / ("config_" + to_string(c.command) + ".json")).string(), config_echo(c));
    const Point p{c.mu, c.alpha, c.M};

    try {
        switch (c.command) {
            case Command::verify: {
                SampleSpec zs;
                zs.seed = c.seed;
                PointSpec xs;
                xs.seed = c.seed;
                const auto r = verify_hypotheses(integrand_of(p), zs, xs);
                write_json((dir / "hypotheses.json").string(), to_json(r));
                log << "H1 " << (r.h1_pass ? "pass" : "fail") << ", H2 " << (r.h2_pass ? "pass" : "fail") << ", H3 "
                    << (r.h3_pass ? "pass" : "fail") << '\n';
                return r.all_pass() ? 0 : 3;
            }
            case Command::oracle: {
                const auto o = run_oracle(p, grid_of(c), dir);
                log << "kind=" << bvlab::to_string(o.kind) << " M0=" << fmt17(o.m0.value) << '\n';
                return 0;
            }
            case Command::solve: {
                const auto states = run_solve(c, p, dir);
                log << "solved " << states.size() << " states\n";
                return 0;
            }
            case Command::probe: return pipeline(c, p, dir, true, log);
            case Command::figure1: return pipeline(c, p, dir, true, log);
            case Command::sweep: return run_sweep(c, dir, log);
        }
    } catch (const SolverError& e) {
        log << "solver failure at k=" << e.k() << " (mu=" << fmt17(c.mu) << ", alpha=" << fmt17(c.alpha)
            << ", M=" << fmt17(c.M) << "): " << e.what() << '\n';
        return 1;
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        log << "solver failure (mu=" << fmt17(c.mu) << ", alpha=" << fmt17(c.alpha) << ", M=" << fmt17(c.M)
            << "): " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"bvlab: BV minimizers of weighted linear-growth functionals"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<double> mu, alpha, M;
    std::optional<int> grid_exp, k_max, jobs;
    std::optional<std::string> out_dir, config, tag;
    std::optional<std::uint64_t> seed;
    app.add_option("--mu", mu, "ellipticity exponent in (1,2)");
    app.add_option("--alpha", alpha, "Hoelder exponent in (0,1)");
    app.add_option("--M", M, "boundary datum at x = 1");
    app.add_option("--grid-exp", grid_exp, "log2 of the cell count");
    app.add_option("--k-max", k_max, "largest viscosity index");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--tag", tag, "run tag for run_<tag>/");
    app.add_option("--seed", seed, "sampling seed");
    app.add_option("--jobs", jobs, "sweep worker threads (0: logical cores)");
    app.add_option("--config", config, "key=value config file");

    for (const char* name : {"solve", "oracle", "sweep", "probe", "figure1", "verify"}) app.add_subcommand(name);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "config error: " << e.what() << '\n';
        return 2;
    }

    try {
        RunConfig cfg;
        if (config) apply_config_file(cfg, *config);
        cfg.command = parse_command(app.get_subcommands().front()->get_name());
        if (mu) cfg.mu = *mu;
        if (alpha) cfg.alpha = *alpha;
        if (M) cfg.M = *M;
        if (grid_exp) cfg.grid_exp = *grid_exp;
        if (k_max) cfg.k_max = *k_max;
        if (out_dir) cfg.out_dir = *out_dir;
        if (tag) cfg.tag = *tag;
        if (seed) cfg.seed = *seed;
        if (jobs) cfg.jobs = *jobs;
        return dispatch(cfg, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const fs::filesystem_error& e) {
        err << "config error: out_dir: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace bvlab::cli

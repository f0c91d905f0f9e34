#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bvlab::cli {

enum class Command { solve, oracle, sweep, probe, figure1, verify };

struct RunConfig {
    Command command = Command::solve;
    double mu = 1.4;
    double alpha = 0.25;
    double M = 20.0;
    int grid_exp = 14;
    int k_max = 512;
    std::string out_dir = "out";
    std::string tag = "default";
    std::uint64_t seed = 20240611;
    int jobs = 0;  // 0: logical cores
    double newton_tol = 1e-12;
    double shooting_tol = 1e-12;
    bool verify_newton = true;
    double window_lo = -0.5;
    double window_hi = 0.5;
    std::vector<double> sweep_mu{1.1, 1.4};
    std::vector<double> sweep_alpha{0.25};
    std::vector<double> sweep_M{20.0};
    double accept_jump_rel = 0.02;
    double accept_l1_rel = 0.01;
    double accept_lp_growth = 2.0;
    double accept_lp_ratio = 1.05;

    void validate() const;
};

Command parse_command(const std::string& name);
std::string to_string(Command c);

// key=value lines, '#' starts a comment. Throws ConfigError naming the key.
void apply_config_file(RunConfig& cfg, const std::string& path);
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value);

// Exit codes: 0 ok, 1 solver failure, 2 config error, 3 acceptance check failed.
int dispatch(const RunConfig& cfg, std::ostream& log);

// Full command line handling: argv parsing, config file, dispatch.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace bvlab::cli

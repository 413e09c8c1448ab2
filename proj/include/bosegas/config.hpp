#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bosegas/lattice.hpp"
#include "bosegas/model.hpp"
#include "bosegas/solver.hpp"
#include "bosegas/toml.hpp"

namespace bosegas {

// Fully validated run description. See configs/ for the file schema.
struct RunConfig {
    MomentumLattice lattice;
    Potential potential;
    Observable observable;

    std::vector<int> n_list;
    std::vector<double> lambda_grid;
    std::vector<double> x_grid;
    std::vector<double> s_grid;

    int cap = -1;      // -1 means "cap = N per run"
    int n_max = 8;     // per-mode cap for standalone quasi-free states

    SolverOptions solver;
    std::int64_t max_basis = 2000000;

    double rate_window_lo = 0.0;  // 0/0 selects the default window
    double rate_window_hi = 0.0;

    std::string output_dir = "out";
    std::string config_hash;  // FNV-1a of the config file bytes
};

RunConfig load_run_config(const std::string& path);
RunConfig run_config_from_table(const TomlTable& table);

// 64-bit FNV-1a, hex-encoded; stamps every report for reproducibility.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace bosegas

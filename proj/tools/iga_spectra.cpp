// Command-line front end: parameter sweeps over the collocation mass and
// stiffness matrices, single-configuration analyses, a manufactured-solution
// time-convergence check and the published reference bound curves.

#include "iga/newmark.hpp"
#include "iga/problems.hpp"
#include "iga/sweep.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

iga::KSelector k_selector_from_string(const std::string& s)
{
    if (s == "min") return {iga::KSelector::Kind::Min, 0};
    if (s == "max") return {iga::KSelector::Kind::Max, 0};
    return {iga::KSelector::Kind::Explicit, std::stoi(s)};
}

int run_sweep_command(const std::string& config_path, int threads)
{
    const iga::SweepSpec spec = iga::parse_config(config_path);
    const iga::RunLedger ledger = iga::run_sweep(spec, threads);
    std::cout << iga::emit_report(ledger, spec);
    for (const auto& e : ledger.entries)
        if (e.status.rfind("failed", 0) == 0)
            std::cerr << e.config.tag() << ": " << e.status << "\n";
    return 0;
}

int run_single(const iga::SweepSpec& spec, int threads, bool dump_matrix)
{
    const iga::RunLedger ledger = iga::run_sweep(spec, threads);
    const iga::LedgerEntry& e = ledger.entries.at(0);
    if (e.status.rfind("failed", 0) == 0) {
        std::cerr << e.status << "\n";
        return 1;
    }
    std::cout << iga::kResultsCsvHeader << "\n";
    std::ifstream results(std::filesystem::path(spec.out_dir) / "results.csv");
    std::string line;
    std::getline(results, line);
    while (std::getline(results, line)) std::cout << line << "\n";
    if (e.status == "skipped-too-large")
        std::cerr << "note: dense eigensolve skipped (dof above " << iga::kDenseEigenvalueCap << ")\n";

    if (dump_matrix) {
        const iga::SweepConfig& cfg = e.config;
        const iga::SplineBasis1D basis(iga::make_knot_vector(cfg.p, cfg.h_den, cfg.k));
        const auto grid = iga::build_grid(basis, basis, iga::BoundaryConfig::uniform(cfg.bc));
        const auto colloc = iga::assemble_collocation(grid, basis, basis);
        const auto path = std::filesystem::path(spec.out_dir) / ("matrix_" + cfg.tag() + ".txt");
        std::ofstream os(path, std::ios::binary);
        if (cfg.target == iga::MatrixTarget::Mass) {
            iga::write_coordinate_format(os, colloc.d0);
        } else {
            const auto params = iga::spectral_newmark_params(cfg.dt, cfg.beta, cfg.gamma, cfg.c0);
            iga::write_coordinate_format(os, iga::assemble_stiffness(colloc, grid, params).matrix);
        }
        std::cout << "matrix written to " << path.string() << "\n";
    }
    return 0;
}

int run_converge(int p, int h_den, const std::string& k_str, const std::vector<double>& dt_seq, double T,
                 double beta, double gamma, double c0, const std::string& out_file,
                 const std::string& trajectory_prefix)
{
    const int k = k_selector_from_string(k_str).resolve(p);
    const iga::SplineBasis1D basis(iga::make_knot_vector(p, h_den, k));
    const auto grid = iga::build_grid(basis, basis, iga::BoundaryConfig::uniform(iga::BoundaryCondition::Dirichlet));
    const auto colloc = iga::assemble_collocation(grid, basis, basis);
    const iga::StandingWave wave(c0);

    std::ostringstream table;
    table << "dt,n_steps,max_err,observed_order\n";
    char b[40];
    double prev_err = 0.0, prev_dt = 0.0;
    for (double dt : dt_seq) {
        const auto params = iga::make_newmark_params(dt, T, beta, gamma, c0);
        iga::StepObserver observer;
        std::ofstream traj;
        if (!trajectory_prefix.empty()) {
            char db[40];
            traj.open(trajectory_prefix + "_dt" + iga::format_double_short(dt, db) + ".csv",
                      std::ios::binary);
            traj << "n,t,max_u,residual\n";
            observer = [&traj](const iga::TimeState& ts, const iga::StepStats& st) {
                char tb[40];
                traj << ts.n << ',' << iga::format_double17(ts.t, tb);
                traj << ',' << iga::format_double17(ts.u.lpNorm<Eigen::Infinity>(), tb);
                traj << ',' << iga::format_double17(st.residual_inf, tb) << '\n';
            };
        }
        const auto result = iga::run(wave.data(), grid, colloc, basis, basis, params, observer);
        if (result.stats.diverged) {
            std::cerr << "diverged at step " << result.stats.diverged_step << " for dt=" << dt << "\n";
            return 1;
        }
        const Eigen::VectorXd vals = colloc.d0 * result.state.u;
        double err = 0.0;
        for (int q = 0; q < grid.size(); ++q)
            err = std::max(err, std::abs(vals[q] - wave.value(grid.points[q][0], grid.points[q][1],
                                                              result.state.t)));
        table << iga::format_double17(dt, b) << ',' << params.n_steps << ',';
        table << iga::format_double17(err, b) << ',';
        if (prev_err > 0.0)
            table << iga::format_double17(std::log(prev_err / err) / std::log(prev_dt / dt), b);
        table << "\n";
        prev_err = err;
        prev_dt = dt;
    }
    std::cout << table.str();
    if (!out_file.empty()) std::ofstream(out_file, std::ios::binary) << table.str();
    return 0;
}

int run_bounds(const std::string& estimate, const std::vector<int>& ps, const std::vector<int>& h_dens)
{
    const iga::GalerkinBound bound = iga::parse_bound_id(estimate);
    char b[40];
    std::cout << "estimate,p,h_den,value\n";
    for (int p : ps)
        for (int h_den : h_dens)
            std::cout << estimate << ',' << p << ',' << h_den << ','
                      << iga::format_double17(iga::galerkin_bound(bound, p, 1.0 / h_den), b) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"IGA collocation spectra for the 2D acoustic wave equation"};
    app.require_subcommand(1);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run the experiment matrix of a JSON sweep file");
    std::string config_path;
    int threads = 0;
    sweep->add_option("config", config_path, "sweep description (JSON)")->required();
    sweep->add_option("--threads", threads, "worker count (default: cores; IGA_SPECTRA_THREADS overrides)");

    // single
    auto* single = app.add_subcommand("single", "analyze one configuration");
    std::string target_str = "stiffness", bc_str = "dirichlet", k_str = "min", analyses_str = "cond";
    std::string out_dir = ".";
    int p = 2, h_den = 3;
    double dt = 0.1, beta = 0.0, gamma = 0.5, c0 = 1.0;
    bool dump_matrix = false;
    int threads_single = 0;
    single->add_option("--target", target_str, "mass|stiffness")->capture_default_str();
    single->add_option("--bc", bc_str, "dirichlet|neumann|abc")->capture_default_str();
    single->add_option("--p", p, "degree")->required();
    single->add_option("--h-den", h_den, "1/h")->required();
    single->add_option("--k", k_str, "min|max|INT")->capture_default_str();
    single->add_option("--dt", dt, "time step")->capture_default_str();
    single->add_option("--beta", beta, "Newmark beta")->capture_default_str();
    single->add_option("--gamma", gamma, "Newmark gamma")->capture_default_str();
    single->add_option("--c0", c0, "squared wave speed")->capture_default_str();
    single->add_option("--analyses", analyses_str, "comma list of cond,eig,spy")->capture_default_str();
    single->add_option("--out", out_dir, "output directory")->capture_default_str();
    single->add_option("--threads", threads_single, "worker count");
    single->add_flag("--dump-matrix", dump_matrix, "write the matrix in coordinate text format");

    // converge
    auto* converge = app.add_subcommand("converge", "manufactured-solution time convergence study");
    int cp = 6, ch = 7;
    std::string ck = "max";
    std::vector<double> dt_seq;
    double T = 1.0, cbeta = 0.5, cgamma = 0.5, cc0 = 1.0;
    std::string conv_out, conv_traj;
    converge->add_option("--p", cp, "degree")->required();
    converge->add_option("--h-den", ch, "1/h")->required();
    converge->add_option("--k", ck, "min|max|INT")->capture_default_str();
    converge->add_option("--dt-seq", dt_seq, "comma list of time steps")->required()->delimiter(',');
    converge->add_option("--T", T, "final time")->capture_default_str();
    converge->add_option("--beta", cbeta, "Newmark beta")->capture_default_str();
    converge->add_option("--gamma", cgamma, "Newmark gamma")->capture_default_str();
    converge->add_option("--c0", cc0, "squared wave speed")->capture_default_str();
    converge->add_option("--out", conv_out, "also write the table to this file");
    converge->add_option("--trajectory", conv_traj,
                         "dump per-step (n, t, max|u|, residual) to <prefix>_dt<dt>.csv");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "evaluate published reference bound curves");
    std::string estimate;
    std::vector<int> bp{2, 4, 6, 8, 10}, bh{3, 5, 7, 9};
    bounds->add_option("--estimate", estimate, "M-k0|M-kmax|K-k0|K-kmax|M-16p|K-16p")->required();
    bounds->add_option("--p", bp, "comma list of degrees")->delimiter(',');
    bounds->add_option("--h-den", bh, "comma list of 1/h")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sweep) return run_sweep_command(config_path, threads);
        if (*single) {
            iga::SweepSpec spec;
            spec.p = {p};
            spec.h_den = {h_den};
            spec.k = {k_selector_from_string(k_str)};
            spec.dt = {dt};
            spec.beta = {beta};
            spec.gamma = gamma;
            spec.c0 = c0;
            spec.bc = {iga::parse_bc(bc_str)};
            spec.targets = {iga::parse_target(target_str)};
            std::vector<std::string> names;
            std::stringstream ss(analyses_str);
            std::string item;
            while (std::getline(ss, item, ',')) names.push_back(item);
            spec.analyses = iga::parse_analyses(names);
            spec.out_dir = out_dir;
            // validate the (p, k) pair the same way sweep files are checked
            const int kk = spec.k[0].resolve(p);
            if (kk < 0 || kk > p - 1)
                throw std::invalid_argument("invalid regularity k=" + std::to_string(kk) + " for p=" +
                                            std::to_string(p));
            return run_single(spec, threads_single, dump_matrix);
        }
        if (*converge)
            return run_converge(cp, ch, ck, dt_seq, T, cbeta, cgamma, cc0, conv_out, conv_traj);
        if (*bounds) return run_bounds(estimate, bp, bh);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#pragma once

#include "iga/assembly.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <utility>

namespace iga {

/// Two consecutive displacement coefficient vectors; the recurrence never
/// stores velocity or acceleration.
struct TimeState {
    long n = 0;
    double t = 0.0;
    Eigen::VectorXd u;       // u_n
    Eigen::VectorXd u_prev;  // u_{n-1}
};

struct StepStats {
    double residual_inf = 0.0;
    double rhs_inf = 0.0;
    double wall_ms = 0.0;
};

struct SolveStats {
    long factorizations = 0;
    long solves = 0;
    long factorization_reuses = 0;
    double max_rel_residual = 0.0;
    double total_ms = 0.0;
    bool diverged = false;
    long diverged_step = -1;
};

struct RunResult {
    TimeState state;
    SolveStats stats;
};

using StepObserver = std::function<void(const TimeState&, const StepStats&)>;

/// threshold on ||u||_inf that marks a run as diverged (a reporting device,
/// not a stability bound)
inline constexpr double kDivergenceThreshold = 1e6;

namespace detail {

inline double eval_tt(const WaveData::TimeField& analytic, const WaveData::TimeField& base, double x,
                      double y, double t)
{
    if (analytic) return analytic(x, y, t);
    return time_deriv2(base, x, y, t);
}

}  // namespace detail

/// Startup: u_0 interpolates the initial pressure (D0 u_0 = u0(P)), the
/// initial acceleration solves the collocated PDE at t = 0 with boundary rows
/// given by the time-differentiated boundary conditions, and
/// u_1 = u_0 + dt v_0 + dt^2/2 a_0 (one-step second-order method).
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> startup(const WaveData& data,
                                                           const CollocationGrid& grid,
                                                           const CollocationMatrices& colloc,
                                                           const SplineBasis1D& basis_x,
                                                           const SplineBasis1D& basis_y,
                                                           const NewmarkParams& params)
{
    const int n = grid.size();
    const double dt = params.dt;
    const double sqrt_c0 = std::sqrt(params.c0);

    Eigen::VectorXd u0_pts(n), u1_pts(n);
    for (int k = 0; k < n; ++k) {
        u0_pts[k] = data.u0(grid.points[k][0], grid.points[k][1]);
        u1_pts[k] = data.u1(grid.points[k][0], grid.points[k][1]);
    }
    const SparseLuSolver d0_solver(colloc.d0);
    if (d0_solver.singular())
        throw std::runtime_error("startup: D0 is singular, Greville collocation failed");
    const Eigen::VectorXd u0c = d0_solver.solve(u0_pts);
    const Eigen::VectorXd v0c = d0_solver.solve(u1_pts);

    // acceleration system: PDE rows inside, differentiated BC rows on the
    // boundary (absorbing rows tie a_0 to the known v_0)
    const auto ex = evaluate_along(basis_x, grid.greville_x);
    const auto ey = evaluate_along(basis_y, grid.greville_y);
    std::vector<Eigen::Triplet<double>> ta;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    const Eigen::VectorXd lap_u0 = colloc.d2 * u0c;

    auto add_row = [&ta](const SparseRowMatrix& m, int row, double s) {
        for (SparseRowMatrix::InnerIterator it(m, row); it; ++it)
            ta.emplace_back(row, it.col(), s * it.value());
    };

    for (int k = 0; k < n; ++k) {
        const double x = grid.points[k][0], y = grid.points[k][1];
        switch (grid.kind[k]) {
            case PointKind::Interior:
                add_row(colloc.d0, k, 1.0);
                rhs[k] = params.c0 * lap_u0[k] + data.source(x, y, 0.0);
                break;
            case PointKind::Dirichlet:
                add_row(colloc.d0, k, 1.0);
                rhs[k] = detail::eval_tt(data.dirichlet_tt, data.dirichlet, x, y, 0.0);
                break;
            default: {
                const double wgt = 1.0 / grid.touches[k].size();
                for (const EdgeTouch& touch : grid.touches[k]) {
                    if (touch.bc == BoundaryCondition::Neumann) {
                        for (const auto& [col, v] : normal_derivative_row(grid, ex, ey, k, touch))
                            ta.emplace_back(k, col, wgt * v);
                        rhs[k] += wgt * detail::eval_tt(data.neumann_tt, data.neumann, x, y, 0.0);
                    } else {
                        add_row(colloc.d0, k, wgt / sqrt_c0);
                        double dn_v0 = 0.0;
                        for (const auto& [col, v] : normal_derivative_row(grid, ex, ey, k, touch))
                            dn_v0 += v * v0c[col];
                        rhs[k] -= wgt * dn_v0;
                    }
                }
            }
        }
    }

    SparseRowMatrix acc(n, n);
    acc.setFromTriplets(ta.begin(), ta.end());
    acc.makeCompressed();
    const SparseLuSolver acc_solver(acc);
    if (acc_solver.singular())
        throw std::runtime_error("startup: acceleration system is singular");
    const Eigen::VectorXd a0 = acc_solver.solve(rhs);

    Eigen::VectorXd u1c = u0c + dt * v0c + 0.5 * dt * dt * a0;
    return {u0c, std::move(u1c)};
}

/// One Newmark step: solve K u_{n+1} = rhs(t_{n+1}) and shift the state.
/// A residual above 1e-8 ||rhs||_inf triggers one refinement pass.
inline TimeState step(const TimeState& state, const SystemMatrix& sys, const WaveData& data,
                      const std::vector<Eigen::Vector2d>& points, const CollocationMatrices& colloc,
                      StepStats* stats = nullptr)
{
    const auto t0 = std::chrono::steady_clock::now();
    const NewmarkParams& params = sys.params;
    const double t_np1 = state.t + params.dt;
    const Eigen::VectorXd rhs =
        build_rhs(data, points, sys.rows, colloc, params, state.u, state.u_prev, t_np1);

    const SparseLuSolver& lu = sys.solver();
    Eigen::VectorXd u_next = lu.solve(rhs);
    const double rhs_inf = rhs.lpNorm<Eigen::Infinity>();
    double res = (sys.matrix * u_next - rhs).lpNorm<Eigen::Infinity>();
    if (res > 1e-8 * rhs_inf) {
        u_next += lu.solve(rhs - sys.matrix * u_next);
        res = (sys.matrix * u_next - rhs).lpNorm<Eigen::Infinity>();
    }

    if (stats) {
        stats->residual_inf = res;
        stats->rhs_inf = rhs_inf;
        stats->wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }

    TimeState next;
    next.n = state.n + 1;
    next.t = t_np1;
    next.u = std::move(u_next);
    next.u_prev = state.u;
    return next;
}

inline TimeState step(const TimeState& state, const SystemMatrix& sys, const WaveData& data,
                      const CollocationGrid& grid, const CollocationMatrices& colloc,
                      StepStats* stats = nullptr)
{
    return step(state, sys, data, grid.points, colloc, stats);
}

/// Advance from the startup pair to t = T. The observer sees every state
/// (including the startup pair). Divergence beyond the reporting threshold
/// stops the run and is flagged in the stats.
inline RunResult run(const WaveData& data, const CollocationGrid& grid,
                     const CollocationMatrices& colloc, const SplineBasis1D& basis_x,
                     const SplineBasis1D& basis_y, const NewmarkParams& params,
                     const StepObserver& observer = {})
{
    const auto t0 = std::chrono::steady_clock::now();
    auto [u0c, u1c] = startup(data, grid, colloc, basis_x, basis_y, params);

    RunResult out;
    out.state.n = 1;
    out.state.t = params.dt;
    out.state.u = std::move(u1c);
    out.state.u_prev = std::move(u0c);
    out.stats.factorizations = 2;  // D0 and the acceleration system

    if (observer) {
        TimeState s0{0, 0.0, out.state.u_prev, Eigen::VectorXd()};
        observer(s0, StepStats{});
        observer(out.state, StepStats{});
    }

    SystemMatrix sys = assemble_stiffness(colloc, grid.classification(), params);
    if (params.n_steps >= 2) {
        sys.solver();  // factorize once, reused by every step
        out.stats.factorizations += 1;
    }
    for (long n = 1; n < params.n_steps; ++n) {
        StepStats st;
        try {
            out.state = step(out.state, sys, data, grid.points, colloc, &st);
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << e.what() << " [dof=" << grid.size() << " dt=" << params.dt << " beta=" << params.beta
                << " gamma=" << params.gamma << " c0=" << params.c0 << "]";
            throw std::runtime_error(msg.str());
        }
        out.stats.solves += 1;
        out.stats.factorization_reuses += 1;
        if (st.rhs_inf > 0.0)
            out.stats.max_rel_residual = std::max(out.stats.max_rel_residual, st.residual_inf / st.rhs_inf);
        if (observer) observer(out.state, st);
        if (out.state.u.lpNorm<Eigen::Infinity>() > kDivergenceThreshold) {
            out.stats.diverged = true;
            out.stats.diverged_step = out.state.n;
            break;
        }
    }
    out.stats.total_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace iga

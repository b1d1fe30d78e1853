#pragma once

#include "iga/assembly.hpp"
#include "iga/condest.hpp"
#include "iga/dense_eig.hpp"

#include <algorithm>
#include <complex>
#include <map>
#include <string>
#include <vector>

namespace iga {

/// dense eigensolves are limited to desk scale; larger cases report cond and
/// sparsity only
inline constexpr int kDenseEigenvalueCap = 2500;

enum class MatrixTarget { Mass, Stiffness };

struct SparsityStats {
    long dof = 0;
    long nz = 0;
    std::map<int, long> row_nnz_histogram;
};

inline SparsityStats sparsity_stats(const SparseRowMatrix& m)
{
    SparsityStats s;
    s.dof = m.rows();
    s.nz = m.nonZeros();
    for (int r = 0; r < m.outerSize(); ++r) {
        int c = 0;
        for (SparseRowMatrix::InnerIterator it(m, r); it; ++it) ++c;
        ++s.row_nnz_histogram[c];
    }
    return s;
}

/// deterministic dump order: descending |lambda|, ties by descending real part
inline void sort_eigenvalues(std::vector<std::complex<double>>& v)
{
    std::sort(v.begin(), v.end(), [](const std::complex<double>& a, const std::complex<double>& b) {
        const double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma > mb;
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
}

/// Spectral summary of one assembled matrix in one configuration.
struct SpectralReport {
    MatrixTarget target = MatrixTarget::Mass;
    BoundaryCondition bc = BoundaryCondition::Dirichlet;
    int p = 0, k = 0, h_den = 0;
    double dt = 0.0, beta = 0.0, gamma = 0.5, c0 = 1.0;
    long dof = 0, nz = 0;
    double cond_est = 0.0;
    bool eig_computed = false;
    std::vector<std::complex<double>> eigenvalues;
    double max_re = 0.0, min_re = 0.0, max_abs_im = 0.0;
    SparsityStats spy;
    double assembly_ms = 0.0, analysis_ms = 0.0;

    void summarize_eigenvalues()
    {
        if (eigenvalues.empty()) return;
        max_re = eigenvalues[0].real();
        min_re = max_re;
        max_abs_im = 0.0;
        for (const auto& z : eigenvalues) {
            max_re = std::max(max_re, z.real());
            min_re = std::min(min_re, z.real());
            max_abs_im = std::max(max_abs_im, std::abs(z.imag()));
        }
        eig_computed = true;
    }
};

/// 1D collocation matrix of basis values at the Greville points
inline Eigen::MatrixXd collocation_matrix_1d(const SplineBasis1D& basis)
{
    const int nu = basis.size();
    const auto pts = greville_points(basis.kv);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nu, nu);
    for (int r = 0; r < nu; ++r) {
        const BasisEval ev = eval_basis(basis, pts[r], 0);
        for (std::size_t j = 0; j < ev.values.size(); ++j) m(r, ev.first_index + j) = ev.values[j];
    }
    return m;
}

/// Mass-matrix spectrum through its exact tensor structure: the 2D matrix is
/// the Kronecker product of the two 1D collocation matrices, so its
/// eigenvalues are all pairwise products of the 1D spectra. This stays cheap
/// far beyond the dense cap.
inline EigenvalueResult mass_eigenvalues_tensor(const SplineBasis1D& basis_x, const SplineBasis1D& basis_y)
{
    const EigenvalueResult ex = eigenvalues_dense(collocation_matrix_1d(basis_x));
    const EigenvalueResult ey = eigenvalues_dense(collocation_matrix_1d(basis_y));
    EigenvalueResult out;
    if (!ex.converged || !ey.converged) {
        out.converged = false;
        out.unconverged = ex.unconverged * basis_y.size() + ey.unconverged * basis_x.size();
        return out;
    }
    out.values.reserve(ex.values.size() * ey.values.size());
    for (const auto& ly : ey.values)
        for (const auto& lx : ex.values) out.values.push_back(lx * ly);
    return out;
}

/// Stiffness matrix in the row scaling the time-stepping code works with:
/// interior rows multiplied by dt^2 (so their D0 coefficient is 1), boundary
/// rows unchanged. Spectral studies of the per-step system use this form;
/// the literal 1/dt^2 scaling only offsets every condition number by the
/// row-scale mismatch.
inline SparseRowMatrix spectral_form(const SystemMatrix& sys)
{
    SparseRowMatrix m = sys.matrix;
    const double dt2 = sys.params.dt * sys.params.dt;
    for (int r = 0; r < m.outerSize(); ++r) {
        if (sys.rows.kind[r] != PointKind::Interior) continue;
        for (SparseRowMatrix::InnerIterator it(m, r); it; ++it) it.valueRef() *= dt2;
    }
    return m;
}

struct AnalysisRequest {
    bool cond = true;
    bool eig = false;
    bool spy = false;
};

namespace detail {

inline void analyze_matrix(SpectralReport& rep, const SparseRowMatrix& m, const AnalysisRequest& req,
                           const EigenvalueResult* precomputed_eig)
{
    rep.dof = m.rows();
    rep.nz = m.nonZeros();
    if (req.cond) rep.cond_est = cond_estimate_1norm(m);
    if (req.spy) rep.spy = sparsity_stats(m);
    if (req.eig) {
        EigenvalueResult er;
        if (precomputed_eig) {
            er = *precomputed_eig;
        } else if (m.rows() <= kDenseEigenvalueCap) {
            er = eigenvalues_dense(Eigen::MatrixXd(m));
        } else {
            return;  // caller reports skipped-too-large
        }
        if (er.converged) {
            rep.eigenvalues = std::move(er.values);
            sort_eigenvalues(rep.eigenvalues);
            rep.summarize_eigenvalues();
        }
    }
}

}  // namespace detail

/// Analysis of the mass matrix (D0 as assembled, all rows). Eigenvalues use
/// the exact tensor factorization.
inline SpectralReport analyze_mass(const CollocationMatrices& colloc, const SplineBasis1D& basis_x,
                                   const SplineBasis1D& basis_y, const AnalysisRequest& req)
{
    SpectralReport rep;
    rep.target = MatrixTarget::Mass;
    EigenvalueResult er;
    const EigenvalueResult* pre = nullptr;
    if (req.eig) {
        er = mass_eigenvalues_tensor(basis_x, basis_y);
        pre = &er;
    }
    detail::analyze_matrix(rep, colloc.d0, req, pre);
    return rep;
}

/// Analysis of the per-step stiffness matrix in its normalized row scaling.
/// Dense eigensolves above the cap are skipped (eig_computed stays false).
inline SpectralReport analyze_stiffness(const SystemMatrix& sys, const AnalysisRequest& req)
{
    SpectralReport rep;
    rep.target = MatrixTarget::Stiffness;
    rep.dt = sys.params.dt;
    rep.beta = sys.params.beta;
    rep.gamma = sys.params.gamma;
    rep.c0 = sys.params.c0;
    const SparseRowMatrix m = spectral_form(sys);
    detail::analyze_matrix(rep, m, req, nullptr);
    return rep;
}

}  // namespace iga

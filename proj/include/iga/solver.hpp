#pragma once

#include "iga/sparse.hpp"

#include <Eigen/SparseLU>

#include <stdexcept>

namespace iga {

/// Direct sparse LU (COLAMD ordering) with solves against A and A^T from one
/// factorization. Immutable after construction; concurrent solves are safe.
class SparseLuSolver {
public:
    explicit SparseLuSolver(const SparseRowMatrix& a) : acol_(a)
    {
        acol_.makeCompressed();
        lu_.isSymmetric(false);
        lu_.compute(acol_);
        singular_ = lu_.info() != Eigen::Success;
    }

    bool singular() const { return singular_; }
    int size() const { return static_cast<int>(acol_.rows()); }

    Eigen::VectorXd solve(const Eigen::VectorXd& b) const
    {
        ensure_ok();
        return lu_.solve(b);
    }

    Eigen::VectorXd solve_transpose(const Eigen::VectorXd& b) const
    {
        ensure_ok();
        return lu_.transpose().solve(b);
    }

private:
    void ensure_ok() const
    {
        if (singular_)
            throw std::runtime_error("SparseLuSolver: matrix is singular (factorization failed)");
    }

    SparseColMatrix acol_;
    // transpose() is a non-const accessor in Eigen's SparseLU; solves do not
    // mutate the factorization
    mutable Eigen::SparseLU<SparseColMatrix, Eigen::COLAMDOrdering<int>> lu_;
    bool singular_ = false;
};

}  // namespace iga

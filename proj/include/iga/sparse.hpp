#pragma once

#include <Eigen/Sparse>

#include <cstdio>
#include <ostream>

namespace iga {

/// Row-compressed sparse matrix with sorted column indices. Exact zeros are
/// dropped at assembly; small entries are kept (no drop tolerance), so
/// nonZeros() reports the structural count the assembly produced.
using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using SparseColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

inline const char* format_double17(double v, char (&buf)[40])
{
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// short form for tags and file names
inline const char* format_double_short(double v, char (&buf)[40])
{
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

/// Coordinate text export: one "row col value" triple per line, 1-based
/// indices, 17 significant digits.
inline void write_coordinate_format(std::ostream& os, const SparseRowMatrix& m)
{
    char buf[40];
    for (int r = 0; r < m.outerSize(); ++r)
        for (SparseRowMatrix::InnerIterator it(m, r); it; ++it)
            os << (r + 1) << ' ' << (it.col() + 1) << ' ' << format_double17(it.value(), buf) << '\n';
}

inline double one_norm(const SparseRowMatrix& m)
{
    Eigen::VectorXd colsum = Eigen::VectorXd::Zero(m.cols());
    for (int r = 0; r < m.outerSize(); ++r)
        for (SparseRowMatrix::InnerIterator it(m, r); it; ++it)
            colsum[it.col()] += std::abs(it.value());
    return m.cols() == 0 ? 0.0 : colsum.maxCoeff();
}

}  // namespace iga

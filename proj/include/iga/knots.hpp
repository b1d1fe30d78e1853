#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace iga {

/// Open (clamped) knot vector on [0,1] with uniform breakpoints and a
/// uniform interior multiplicity controlled by the global regularity k.
///
/// For degree p, n uniform elements and regularity 0 <= k <= p-1 the interior
/// breakpoints j/n carry multiplicity p-k, giving
///   num_basis = (n-1)*(p-k) + p + 1
/// basis functions of smoothness C^k across breakpoints.
struct KnotVector {
    int degree = 0;
    int regularity = 0;
    int n_elements = 0;
    int num_basis = 0;
    std::vector<double> knots;  // size num_basis + degree + 1
};

inline KnotVector make_knot_vector(int p, int n_elements, int k)
{
    if (p < 1)
        throw std::invalid_argument("make_knot_vector: degree must be >= 1, got " + std::to_string(p));
    if (n_elements < 1)
        throw std::invalid_argument("make_knot_vector: need at least one element, got " + std::to_string(n_elements));
    if (k < 0 || k > p - 1)
        throw std::invalid_argument("make_knot_vector: regularity k=" + std::to_string(k) +
                                    " out of range [0," + std::to_string(p - 1) + "] for degree " + std::to_string(p));

    KnotVector kv;
    kv.degree = p;
    kv.regularity = k;
    kv.n_elements = n_elements;
    kv.num_basis = (n_elements - 1) * (p - k) + p + 1;
    kv.knots.reserve(kv.num_basis + p + 1);
    kv.knots.insert(kv.knots.end(), p + 1, 0.0);
    for (int j = 1; j < n_elements; ++j) {
        // breakpoint rounded once to nearest double, copies identical
        const double b = static_cast<double>(j) / static_cast<double>(n_elements);
        kv.knots.insert(kv.knots.end(), p - k, b);
    }
    kv.knots.insert(kv.knots.end(), p + 1, 1.0);
    return kv;
}

/// Greville abscissae: averages of p consecutive interior knots.
/// First point is 0, last is 1, the sequence is strictly increasing.
inline std::vector<double> greville_points(const KnotVector& kv)
{
    const int p = kv.degree;
    std::vector<double> pts(kv.num_basis);
    for (int i = 0; i < kv.num_basis; ++i) {
        double s = 0.0;
        for (int j = 1; j <= p; ++j)
            s += kv.knots[i + j];
        pts[i] = s / p;
    }
    pts.front() = 0.0;
    pts.back() = 1.0;
    return pts;
}

}  // namespace iga

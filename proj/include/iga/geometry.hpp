#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace iga {

/// Identity or affine map from the parametric square to the physical domain.
/// Exposes the pullback factors needed to express physical derivatives in
/// terms of parametric ones: grad_x = A^{-T} grad_xi and
/// lap_x = c11 Hxx + 2 c12 Hxy + c22 Hyy with C = A^{-1} A^{-T}.
class GeometryMap {
public:
    GeometryMap() : GeometryMap(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero(), true) {}

    static GeometryMap identity() { return GeometryMap(); }

    static GeometryMap affine(const Eigen::Matrix2d& a, const Eigen::Vector2d& b)
    {
        if (std::abs(a.determinant()) <= 1e-14)
            throw std::invalid_argument("GeometryMap::affine: matrix is singular");
        return GeometryMap(a, b, a.isIdentity(0.0) && b.isZero(0.0));
    }

    bool is_identity() const { return identity_; }
    const Eigen::Matrix2d& matrix() const { return a_; }
    const Eigen::Vector2d& shift() const { return b_; }

    Eigen::Vector2d map_point(const Eigen::Vector2d& xi) const
    {
        return identity_ ? xi : Eigen::Vector2d(a_ * xi + b_);
    }

    /// coefficients (c11, c12, c22) of the physical Laplacian in parametric
    /// second derivatives
    Eigen::Vector3d laplacian_coeffs() const
    {
        if (identity_) return {1.0, 0.0, 1.0};
        const Eigen::Matrix2d c = a_inv_ * a_inv_.transpose();
        return {c(0, 0), c(0, 1), c(1, 1)};
    }

    /// unit outward normal in physical space for a reference outward normal
    Eigen::Vector2d physical_normal(const Eigen::Vector2d& n_ref) const
    {
        if (identity_) return n_ref;
        return (a_inv_.transpose() * n_ref).normalized();
    }

    /// weights (w1, w2) so that d/dn_phys = w1 d/dxi + w2 d/deta
    Eigen::Vector2d normal_derivative_weights(const Eigen::Vector2d& n_ref) const
    {
        if (identity_) return n_ref;
        return a_inv_ * physical_normal(n_ref);
    }

private:
    GeometryMap(const Eigen::Matrix2d& a, const Eigen::Vector2d& b, bool ident)
        : a_(a), b_(b), identity_(ident)
    {
        a_inv_ = identity_ ? Eigen::Matrix2d::Identity() : a_.inverse().eval();
    }

    Eigen::Matrix2d a_;
    Eigen::Vector2d b_;
    Eigen::Matrix2d a_inv_;
    bool identity_;
};

inline Eigen::Vector2d map_point(const GeometryMap& map, const Eigen::Vector2d& xi)
{
    return map.map_point(xi);
}

}  // namespace iga

#pragma once

#include "iga/basis.hpp"
#include "iga/geometry.hpp"

#include <Eigen/Dense>

#include <vector>

namespace iga {

enum class BoundaryCondition { Dirichlet, Neumann, Absorbing };

enum class EdgeId { Left, Right, Bottom, Top };

/// Per-edge boundary condition on the parametric square.
struct BoundaryConfig {
    BoundaryCondition left = BoundaryCondition::Dirichlet;
    BoundaryCondition right = BoundaryCondition::Dirichlet;
    BoundaryCondition bottom = BoundaryCondition::Dirichlet;
    BoundaryCondition top = BoundaryCondition::Dirichlet;

    static BoundaryConfig uniform(BoundaryCondition bc) { return {bc, bc, bc, bc}; }

    BoundaryCondition on(EdgeId e) const
    {
        switch (e) {
            case EdgeId::Left: return left;
            case EdgeId::Right: return right;
            case EdgeId::Bottom: return bottom;
            default: return top;
        }
    }
};

enum class PointKind { Interior, Dirichlet, Neumann, Absorbing };

/// One edge a boundary point lies on, with its outward normal data.
struct EdgeTouch {
    EdgeId edge;
    BoundaryCondition bc;
    Eigen::Vector2d normal;         // unit outward, physical space
    Eigen::Vector2d deriv_weights;  // d/dn = w1 d/dxi + w2 d/deta
};

/// Row classification consumed by assembly: point kinds plus the fraction of
/// absorbing contributions per row (1 on absorbing edges, 1/2 at a corner
/// shared with a Neumann edge, 0 elsewhere).
struct RowClassification {
    std::vector<PointKind> kind;
    std::vector<double> abc_weight;
};

/// Tensor-product Greville grid with boundary classification. Points are
/// flattened x-fastest: k = j*nu_x + i.
struct CollocationGrid {
    int nu_x = 0;
    int nu_y = 0;
    std::vector<double> greville_x;
    std::vector<double> greville_y;
    GeometryMap map;
    std::vector<Eigen::Vector2d> points;        // physical coordinates
    std::vector<PointKind> kind;
    std::vector<std::vector<EdgeTouch>> touches;  // empty at interior points
    std::vector<int> interior_set, dirichlet_set, neumann_set, absorbing_set;

    int size() const { return nu_x * nu_y; }
    int flatten(int i, int j) const { return j * nu_x + i; }
    std::pair<int, int> unflatten(int k) const { return {k % nu_x, k / nu_x}; }

    double abc_weight(int k) const
    {
        if (touches[k].empty() || kind[k] == PointKind::Dirichlet) return 0.0;
        int nab = 0;
        for (const auto& t : touches[k])
            if (t.bc == BoundaryCondition::Absorbing) ++nab;
        return static_cast<double>(nab) / touches[k].size();
    }

    RowClassification classification() const
    {
        RowClassification rc;
        rc.kind = kind;
        rc.abc_weight.resize(size());
        for (int k = 0; k < size(); ++k)
            rc.abc_weight[k] = abc_weight(k);
        return rc;
    }
};

inline CollocationGrid build_grid(const SplineBasis1D& basis_x, const SplineBasis1D& basis_y,
                                  const BoundaryConfig& bc, const GeometryMap& map = GeometryMap::identity())
{
    CollocationGrid g;
    g.nu_x = basis_x.size();
    g.nu_y = basis_y.size();
    g.greville_x = greville_points(basis_x.kv);
    g.greville_y = greville_points(basis_y.kv);
    g.map = map;

    const int n = g.size();
    g.points.resize(n);
    g.kind.assign(n, PointKind::Interior);
    g.touches.resize(n);

    for (int j = 0; j < g.nu_y; ++j) {
        for (int i = 0; i < g.nu_x; ++i) {
            const int k = g.flatten(i, j);
            g.points[k] = map.map_point({g.greville_x[i], g.greville_y[j]});

            auto touch = [&](EdgeId e, double nx, double ny) {
                const Eigen::Vector2d nref(nx, ny);
                g.touches[k].push_back({e, bc.on(e), map.physical_normal(nref),
                                        map.normal_derivative_weights(nref)});
            };
            if (i == 0) touch(EdgeId::Left, -1.0, 0.0);
            if (i == g.nu_x - 1) touch(EdgeId::Right, 1.0, 0.0);
            if (j == 0) touch(EdgeId::Bottom, 0.0, -1.0);
            if (j == g.nu_y - 1) touch(EdgeId::Top, 0.0, 1.0);

            if (g.touches[k].empty()) {
                g.interior_set.push_back(k);
                continue;
            }
            // Dirichlet wins at corners; otherwise absorbing is recorded when
            // any touching edge is absorbing (rows still average per touch).
            bool any_d = false, any_ab = false;
            for (const auto& t : g.touches[k]) {
                any_d |= t.bc == BoundaryCondition::Dirichlet;
                any_ab |= t.bc == BoundaryCondition::Absorbing;
            }
            if (any_d) {
                g.kind[k] = PointKind::Dirichlet;
                g.dirichlet_set.push_back(k);
            } else if (any_ab) {
                g.kind[k] = PointKind::Absorbing;
                g.absorbing_set.push_back(k);
            } else {
                g.kind[k] = PointKind::Neumann;
                g.neumann_set.push_back(k);
            }
        }
    }
    return g;
}

}  // namespace iga

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace iga {

/// Published Galerkin condition-number estimates for the Poisson problem,
/// evaluated as reference curves (d = 2 throughout). The first two carry an
/// unspecified constant (taken as 1) and are meaningful in trend only; the
/// k = 0 / k = p-1 forms are the sharper constant-free estimates with their
/// h-regime thresholds.
enum class GalerkinBound { MassP16, StiffP16, MassK0, MassKmax, StiffK0, StiffKmax };

inline GalerkinBound parse_bound_id(const std::string& id)
{
    if (id == "M-16p") return GalerkinBound::MassP16;
    if (id == "K-16p") return GalerkinBound::StiffP16;
    if (id == "M-k0") return GalerkinBound::MassK0;
    if (id == "M-kmax") return GalerkinBound::MassKmax;
    if (id == "K-k0") return GalerkinBound::StiffK0;
    if (id == "K-kmax") return GalerkinBound::StiffKmax;
    throw std::invalid_argument("unknown bound id: " + id +
                                " (expected M-16p, K-16p, M-k0, M-kmax, K-k0 or K-kmax)");
}

inline const char* bound_id_name(GalerkinBound b)
{
    switch (b) {
        case GalerkinBound::MassP16: return "M-16p";
        case GalerkinBound::StiffP16: return "K-16p";
        case GalerkinBound::MassK0: return "M-k0";
        case GalerkinBound::MassKmax: return "M-kmax";
        case GalerkinBound::StiffK0: return "K-k0";
        default: return "K-kmax";
    }
}

inline double galerkin_bound(GalerkinBound bound, int p, double h)
{
    if (p < 1) throw std::invalid_argument("galerkin_bound: p must be >= 1");
    if (!(h > 0.0) || h > 1.0) throw std::invalid_argument("galerkin_bound: h must be in (0,1]");
    const double d = 2.0;
    const double pd = static_cast<double>(p);
    switch (bound) {
        case GalerkinBound::MassP16:
            return pd * pd * std::pow(16.0, pd);
        case GalerkinBound::StiffP16:
            return std::pow(pd, 8.0) * std::pow(16.0, pd);
        case GalerkinBound::MassK0:
            return std::pow(pd, -d / 2) * std::pow(4.0, pd * d);
        case GalerkinBound::MassKmax:
            if (h <= 1.0 / pd) return std::exp(pd * d);
            return std::pow(std::exp(1.0) / 4.0, d / h) * std::pow(h * pd, -d / 2) * std::pow(4.0, pd * d);
        case GalerkinBound::StiffK0:
            if (h <= std::sqrt(std::pow(pd, 2.0 + d / 2) * std::pow(d, -d * pd)))
                return pd * pd / (h * h);
            return std::pow(pd, -d / 2) * std::pow(4.0, pd * d);
        default:  // StiffKmax
            if (h <= std::exp(-d * pd / 2)) return pd / (h * h);
            if (h <= 1.0 / pd) return pd * std::exp(pd * d);
            return std::pow(std::exp(1.0) / 4.0, d / h) * std::pow(pd, -d / 2) *
                   std::pow(h, -d / 2 - 1.0) * std::pow(4.0, pd * d);
    }
}

}  // namespace iga

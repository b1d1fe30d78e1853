#pragma once

#include "iga/assembly.hpp"

#include <cmath>

namespace iga {

/// Closed-form standing wave u = sin(pi x) sin(pi y) cos(omega t) with
/// omega = pi sqrt(2 c0); it solves the homogeneous wave equation with zero
/// Dirichlet data, so every data field except u0 vanishes.
struct StandingWave {
    double c0 = 1.0;
    double omega = 0.0;

    explicit StandingWave(double c0_in = 1.0) : c0(c0_in), omega(M_PI * std::sqrt(2.0 * c0_in)) {}

    double value(double x, double y, double t) const
    {
        return std::sin(M_PI * x) * std::sin(M_PI * y) * std::cos(omega * t);
    }

    WaveData data() const
    {
        WaveData d = WaveData::zero();
        d.u0 = [](double x, double y) { return std::sin(M_PI * x) * std::sin(M_PI * y); };
        d.dirichlet_tt = [](double, double, double) { return 0.0; };
        return d;
    }
};

/// Rightward-travelling Gaussian pulse u = g(x - sqrt(c0) t): exact data for
/// the reflection measurement against an absorbing right edge. The pulse is
/// constant in y, so homogeneous Neumann data is exact on the other edges.
struct TravellingPulse {
    double c0 = 1.0;
    double center = 0.3;
    double width = 0.08;

    double profile(double s) const
    {
        const double z = (s - center) / width;
        return std::exp(-z * z);
    }

    double profile_d1(double s) const
    {
        const double z = (s - center) / width;
        return -2.0 * z / width * std::exp(-z * z);
    }

    WaveData data() const
    {
        WaveData d = WaveData::zero();
        const double speed = std::sqrt(c0);
        d.u0 = [this](double x, double) { return profile(x); };
        d.u1 = [this, speed](double x, double) { return -speed * profile_d1(x); };
        d.neumann_tt = [](double, double, double) { return 0.0; };
        return d;
    }
};

}  // namespace iga

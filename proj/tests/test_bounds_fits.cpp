#include "iga/bounds.hpp"
#include "iga/fits.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using namespace iga;

TEST_CASE("galerkin reference bounds")
{
    SECTION("mass k=0 at p=2 is 128")
    {
        CHECK(galerkin_bound(GalerkinBound::MassK0, 2, 0.2) == Catch::Approx(128.0));
    }
    SECTION("mass kmax at p=4, h=1/5 sits in the e^{pd} regime")
    {
        CHECK(galerkin_bound(GalerkinBound::MassKmax, 4, 0.2) == Catch::Approx(std::exp(8.0)));
    }
    SECTION("stiffness k=0 small-h regime at p=2, h=1/9 is 324")
    {
        CHECK(galerkin_bound(GalerkinBound::StiffK0, 2, 1.0 / 9) == Catch::Approx(324.0));
    }
    SECTION("mass kmax switches regime at h = 1/p")
    {
        const double at = galerkin_bound(GalerkinBound::MassKmax, 4, 0.25);
        const double above = galerkin_bound(GalerkinBound::MassKmax, 4, 0.3);
        CHECK(at == Catch::Approx(std::exp(8.0)));
        CHECK(above > at);
    }
    SECTION("stiffness kmax has three regimes")
    {
        const int p = 3;
        const double h_small = std::exp(-3.0) * 0.5;
        CHECK(galerkin_bound(GalerkinBound::StiffKmax, p, h_small) ==
              Catch::Approx(p / (h_small * h_small)));
        CHECK(galerkin_bound(GalerkinBound::StiffKmax, p, 0.2) == Catch::Approx(3.0 * std::exp(6.0)));
        const double h_big = 0.5;
        CHECK(galerkin_bound(GalerkinBound::StiffKmax, p, h_big) ==
              Catch::Approx(std::pow(std::exp(1.0) / 4.0, 4.0) * std::pow(3.0, -1.0) *
                            std::pow(h_big, -2.0) * std::pow(4.0, 6.0)));
    }
    SECTION("16^p forms")
    {
        CHECK(galerkin_bound(GalerkinBound::MassP16, 2, 0.2) == Catch::Approx(4.0 * 256.0));
        CHECK(galerkin_bound(GalerkinBound::StiffP16, 2, 0.2) == Catch::Approx(256.0 * 256.0));
    }
    SECTION("id parsing round-trips")
    {
        for (const char* id : {"M-16p", "K-16p", "M-k0", "M-kmax", "K-k0", "K-kmax"})
            CHECK(bound_id_name(parse_bound_id(id)) == std::string(id));
        CHECK_THROWS_AS(parse_bound_id("M-k2"), std::invalid_argument);
    }
}

TEST_CASE("scaling fits")
{
    SECTION("exact h^2 data fits slope 2")
    {
        std::vector<double> inv_h{3, 5, 7, 9};
        std::vector<double> cond;
        for (double x : inv_h) cond.push_back(x * x);
        CHECK(fit_h_slope(inv_h, cond) == Catch::Approx(2.0));
    }
    SECTION("exact p^-1 4^{1.5p} data fits alpha 1.5")
    {
        std::vector<int> ps{2, 3, 4, 5, 6, 7, 8, 9, 10};
        std::vector<double> cond;
        for (int p : ps) cond.push_back(std::pow(4.0, 1.5 * p) / p);
        CHECK(fit_p_alpha(ps, cond) == Catch::Approx(1.5));
    }
    SECTION("too few points rejected")
    {
        std::vector<double> x{3, 5}, y{1, 1};
        CHECK_THROWS_AS(fit_h_slope(x, y), std::invalid_argument);
        std::vector<int> p{2, 3};
        CHECK_THROWS_AS(fit_p_alpha(p, y), std::invalid_argument);
    }
}

#include <doctest.h>

#include "afc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace afc;
using std::numbers::pi;

namespace {

// Periodic Hilbert transform of the indicator of [-a, a] on a grid of period S,
// times -(D/2): the dispersion phase of an absorbing block of depth D.
double block_phase(double f, double a, double depth, double span) {
    const double num = std::sin(pi * (f + a) / span);
    const double den = std::sin(pi * (f - a) / span);
    return -0.5 * depth / pi * std::log(std::abs(num / den));
}

} // namespace

TEST_SUITE("spectrum") {

TEST_CASE("frequency grid layout") {
    const FrequencyGrid g(1024, 1.024e6);
    CHECK(g.resolution() == doctest::Approx(1000.0));
    CHECK(g.frequency(g.center_index()) == 0.0);
    CHECK(g.frequency(0) == doctest::Approx(-512e3));
    CHECK(g.index_of(2999.0) == 515);
    CHECK(g.index_of(1e9) == 1023);
    CHECK_THROWS_AS(FrequencyGrid(1000, 1e6), DomainError);
    CHECK_THROWS_AS(FrequencyGrid(512, 1e6), DomainError);
    CHECK_THROWS_AS(FrequencyGrid(1024, 0.0), DomainError);
}

TEST_CASE("square comb: mean depth equals d/F") {
    const FrequencyGrid g(1 << 18, 80e6);
    for (double f : {2.0, 5.0, 7.3}) {
        CombParams c{0.8, 250e3, f, ToothShape::Square, 5e6, 0.0};
        const auto p = square_comb(c, g);
        CHECK(p.mean_depth(-2.5e6, 2.5e6) == doctest::Approx(0.8 / f).epsilon(1e-3));
        CHECK(*std::max_element(p.depth.begin(), p.depth.end()) == doctest::Approx(0.8));
        CHECK(p.has_guard_band());
    }
}

TEST_CASE("comb teeth are symmetric about the center") {
    const FrequencyGrid g(1 << 16, 80e6);
    CombParams c{1.0, 500e3, 5.0, ToothShape::Square, 5e6, 0.0};
    const auto p = square_comb(c, g);
    const std::size_t m = g.center_index();
    for (std::size_t k = 1; k < 6000; ++k) REQUIRE(p.depth[m + k] == doctest::Approx(p.depth[m - k]).epsilon(1e-12));
}

TEST_CASE("background depth fills between teeth") {
    const FrequencyGrid g(1 << 16, 80e6);
    CombParams c{1.0, 500e3, 5.0, ToothShape::Square, 5e6, 0.1};
    const auto p = square_comb(c, g);
    CHECK(p.mean_depth(-2.5e6, 2.5e6) == doctest::Approx(c.average_depth()).epsilon(2e-3));
    CHECK(c.average_depth() == doctest::Approx(0.1 + 0.9 / 5.0));
}

TEST_CASE("gaussian teeth keep the tooth area") {
    const FrequencyGrid g(1 << 18, 80e6);
    CombParams c{0.8, 250e3, 5.0, ToothShape::Gaussian, 5e6, 0.0};
    const auto p = make_comb(c, g);
    CHECK(p.mean_depth(-2.5e6, 2.5e6) == doctest::Approx(c.average_depth()).epsilon(0.01));
}

TEST_CASE("comb must fit the grid") {
    const FrequencyGrid g(1 << 14, 80e6);
    CombParams narrow{0.8, 100e3, 10.0, ToothShape::Square, 5e6, 0.0};
    try {
        square_comb(narrow, g);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(e.field() == "grid_points");
    }
    CombParams wide{0.8, 1e6, 5.0, ToothShape::Square, 70e6, 0.0};
    CHECK_THROWS_AS(square_comb(wide, g), DomainError);
}

TEST_CASE("flat absorption: uniform attenuation, no phase") {
    const FrequencyGrid g(4096, 80e6);
    const auto h = kramers_kronig_response(transparency_window(1.0, 0.0, g, 0.0));
    // Inside the band the phase is the periodic Hilbert transform of the band edges only.
    const double a = 0.5 * 0.8 * g.span();
    const std::size_t c = g.center_index();
    CHECK(std::abs(h.h[c]) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(std::arg(h.h[c]) == doctest::Approx(block_phase(0.0, a, 1.0, g.span())).epsilon(1e-9));
    const auto e = kramers_kronig_response(empty_profile(g));
    for (const auto& z : e.h) REQUIRE(std::abs(z - cplx{1.0, 0.0}) < 1e-14);
}

TEST_CASE("dispersion of an absorbing block matches the closed-form Hilbert transform") {
    const FrequencyGrid g(1 << 14, 80e6);
    const double a = 2.5e6, depth = 1.5;
    AbsorptionProfile p{g, std::vector<double>(g.size(), 0.0)};
    for (std::size_t i = 0; i < g.size(); ++i)
        if (std::abs(g.frequency(i)) < a) p.depth[i] = depth;
    // a falls on a bin, which is excluded; the block ends half a bin past the last absorbing sample.
    const double edge = a - 0.5 * g.resolution();
    const auto h = kramers_kronig_response(p);
    for (double f : {-10e6, -4e6, -1.25e6, 0.0, 0.7e6, 1.25e6, 3.5e6, 20e6}) {
        const std::size_t i = g.index_of(f);
        CAPTURE(f);
        CHECK(std::arg(h.h[i]) == doctest::Approx(block_phase(g.frequency(i), edge, depth, g.span())).epsilon(2e-3));
    }
}

TEST_CASE("transparency window slows light by the closed-form group delay") {
    const FrequencyGrid g(1 << 16, 400e6);
    const double d = 1.2, w = 15e6, band = 0.8 * g.span();
    const auto h = kramers_kronig_response(transparency_window(d, w, g));
    const auto gd = group_delay(h);
    CHECK(gd.unwrap_ok);
    // Slope at 0 of the periodic phase: window edges minus band edges.
    const double slope = (d / 2.0) * (2.0 / g.span()) * (1.0 / std::tan(pi * 0.5 * w / g.span()) - 1.0 / std::tan(pi * 0.5 * band / g.span()));
    CHECK(gd.center_s == doctest::Approx(slope / (2.0 * pi)).epsilon(5e-3));
    CHECK(gd.center_s > 0.0);
}

TEST_CASE("group delay of a pure delay") {
    const FrequencyGrid g(2048, 10e6);
    ComplexResponse r{g, std::vector<cplx>(g.size())};
    const double tau = 3e-7;
    for (std::size_t i = 0; i < g.size(); ++i) r.h[i] = std::polar(1.0, 2.0 * pi * g.frequency(i) * tau);
    const auto gd = group_delay(r);
    CHECK(gd.unwrap_ok);
    CHECK(gd.center_s == doctest::Approx(tau).epsilon(1e-9));
    ComplexResponse flat{g, std::vector<cplx>(g.size(), cplx{0.5, 0.0})};
    CHECK(group_delay(flat).center_s == 0.0);
}

TEST_CASE("too-fast phase is flagged") {
    const FrequencyGrid g(2048, 10e6);
    ComplexResponse r{g, std::vector<cplx>(g.size())};
    for (std::size_t i = 0; i < g.size(); ++i) r.h[i] = std::polar(1.0, 2.0 * static_cast<double>(i));
    CHECK_FALSE(group_delay(r).unwrap_ok);
}

TEST_CASE("response requires an empty guard band") {
    const FrequencyGrid g(4096, 80e6);
    AbsorptionProfile p{g, std::vector<double>(g.size(), 0.1)};
    CHECK_FALSE(p.has_guard_band());
    CHECK_THROWS_AS(kramers_kronig_response(p), DomainError);
}

TEST_CASE("comb response is causal and passive") {
    const FrequencyGrid g(1 << 16, 80e6);
    CombParams c{0.8, 500e3, 5.0, ToothShape::Square, 5e6, 0.0};
    const auto h = kramers_kronig_response(make_comb(c, g));
    CHECK(acausal_energy_fraction(h) < 1e-6);
    for (const auto& z : h.h) REQUIRE(std::abs(z) <= 1.0 + 1e-15);
    const auto hh = compose(h, h);
    CHECK(std::abs(hh.h[100]) == doctest::Approx(std::norm(h.h[100])));
}

TEST_CASE("transparency window arguments are checked") {
    const FrequencyGrid g(4096, 80e6);
    CHECK_THROWS_AS(transparency_window(-1.0, 1e6, g), DomainError);
    CHECK_THROWS_AS(transparency_window(1.0, 70e6, g), DomainError);
    CHECK_THROWS_AS(transparency_window(1.0, 10e6, g, 5e6), DomainError);
}

} // TEST_SUITE

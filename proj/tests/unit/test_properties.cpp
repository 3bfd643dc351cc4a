#include <doctest.h>

#include "afc/csv.hpp"
#include "afc/runner.hpp"
#include "afc/scenario.hpp"

#include <cmath>
#include <future>
#include <random>

using namespace afc;

namespace {

CombParams random_comb(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> depth(0.1, 5.0), fin(1.5, 10.0), spacing(100e3, 1e6), bw(1e6, 10e6), u(0.0, 1.0);
    CombParams c;
    c.peak_depth = depth(rng);
    c.finesse = fin(rng);
    c.spacing_hz = spacing(rng);
    c.bandwidth_hz = std::max(bw(rng), 2.0 * c.spacing_hz);
    c.shape = u(rng) < 0.3 ? ToothShape::Gaussian : ToothShape::Square;
    c.background_depth = u(rng) < 0.3 ? 0.05 * c.peak_depth : 0.0;
    return c;
}

} // namespace

TEST_SUITE("properties") {

TEST_CASE("random combs: no output before the input arrives, passive responses") {
    std::mt19937_64 rng(7001);
    // Default grid: deep square combs ring for long enough that a shorter record
    // wraps their (causal) tail around into the pre-pulse window.
    const FrequencyGrid g(1 << 18, 80e6);
    const TimeGrid t(g);
    for (int i = 0; i < 25; ++i) {
        const auto c = random_comb(rng);
        CAPTURE(c.peak_depth);
        CAPTURE(c.finesse);
        CAPTURE(c.spacing_hz);
        const auto h = kramers_kronig_response(make_comb(c, g));
        for (double fwhm : {0.3e-6, 1e-6}) {
            const auto in = gaussian_pulse(fwhm, 10e-6, 0.0, t);
            CHECK(pre_pulse_energy_fraction(propagate(in, h), in.energy(), 10e-6, fwhm) < 1e-6);
        }
        double worst = 0.0;
        for (const auto& z : h.h) worst = std::max(worst, std::abs(z));
        CHECK(worst <= 1.0 + 1e-15);
    }
}

TEST_CASE("smooth combs: impulse response vanishes at negative time") {
    std::mt19937_64 rng(7005);
    const FrequencyGrid g(1 << 16, 80e6);
    for (int i = 0; i < 10; ++i) {
        auto c = random_comb(rng);
        c.shape = ToothShape::Gaussian;
        CHECK(acausal_energy_fraction(kramers_kronig_response(make_comb(c, g))) < 1e-6);
    }
}

TEST_CASE("a time-reversed response is caught") {
    const FrequencyGrid g(1 << 16, 80e6);
    const TimeGrid t(g);
    auto h = kramers_kronig_response(make_comb(CombParams{2.0, 125e3, 4.0, ToothShape::Square, 5e6, 0.0}, g));
    for (auto& z : h.h) z = std::conj(z);
    const auto in = gaussian_pulse(1e-6, 10e-6, 0.0, t);
    CHECK(pre_pulse_energy_fraction(propagate(in, h), in.energy(), 10e-6, 1e-6) > 1e-3);
}

TEST_CASE("random cavities: reflection is passive") {
    std::mt19937_64 rng(7002);
    std::uniform_real_distribution<double> refl(0.05, 1.0), eps(0.0, 0.2), det(-5e6, 5e6);
    const FrequencyGrid g(1 << 17, 80e6);
    for (int i = 0; i < 25; ++i) {
        const auto c = random_comb(rng);
        const CavityParams cav{refl(rng), refl(rng), eps(rng), 50e6, det(rng)};
        const auto r = reflection_response(cav, kramers_kronig_response(make_comb(c, g)));
        double worst = 0.0;
        for (const auto& z : r.h) worst = std::max(worst, std::abs(z));
        CHECK(worst <= 1.0 + 1e-12);
    }
}

TEST_CASE("propagation is linear") {
    std::mt19937_64 rng(7003);
    const FrequencyGrid g(1 << 15, 80e6);
    const TimeGrid t(g);
    const auto h = kramers_kronig_response(make_comb(random_comb(rng), g));
    const auto p1 = gaussian_pulse(500e-9, 10e-6, 0.0, t);
    const auto p2 = gaussian_pulse(800e-9, 20e-6, 2e5, t);
    const cplx a{0.3, -1.2}, b{2.0, 0.5};
    PulseWaveform mix = p1;
    for (std::size_t j = 0; j < mix.field.size(); ++j) mix.field[j] = a * p1.field[j] + b * p2.field[j];
    const auto o1 = propagate(p1, h), o2 = propagate(p2, h), om = propagate(mix, h);
    double err = 0.0;
    for (std::size_t j = 0; j < om.field.size(); ++j) err = std::max(err, std::abs(om.field[j] - a * o1.field[j] - b * o2.field[j]));
    CHECK(err < 1e-12);
}

TEST_CASE("efficiency is invariant to input amplitude and phase") {
    std::mt19937_64 rng(7004);
    std::uniform_real_distribution<double> amp(0.01, 100.0), phase(-3.14, 3.14);
    const FrequencyGrid g(1 << 16, 80e6);
    CombParams c{1.5, 250e3, 4.0, ToothShape::Square, 5e6, 0.0};
    const auto h = kramers_kronig_response(make_comb(c, g));
    const auto gate = default_echo_gate(10e-6, 1e-6, c.echo_delay_s());
    auto in = gaussian_pulse(1e-6, 10e-6, 0.0, TimeGrid(g));
    const double ref = echo_efficiency(propagate(in, h), in.energy(), gate);
    for (int i = 0; i < 5; ++i) {
        const cplx k = std::polar(amp(rng), phase(rng));
        auto scaled = in;
        for (auto& z : scaled.field) z *= k;
        CHECK(echo_efficiency(propagate(scaled, h), scaled.energy(), gate) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("efficiencies are stable under grid refinement") {
    CombParams c{0.8, 100e3, 5.0, ToothShape::Square, 5e6, 0.0};
    const PulseSpec pulse{1.5e-6, 10e-6, 0.0};
    const CavityParams cav{std::exp(-0.32), 1.0, 0.03, 500e6, 0.0};
    for (const std::optional<CavityParams>& cv : {std::optional<CavityParams>{}, std::optional<CavityParams>{cav}}) {
        CAPTURE(cv.has_value());
        const double base = run_two_level(c, pulse, cv, GridSpec{1 << 17, 80e6}).efficiency;
        // Doubling the points halves the frequency step; doubling both halves the time step.
        const double finer_f = run_two_level(c, pulse, cv, GridSpec{1 << 18, 80e6}).efficiency;
        const double finer_t = run_two_level(c, pulse, cv, GridSpec{1 << 18, 160e6}).efficiency;
        CHECK(std::abs(finer_f / base - 1.0) < 5e-3);
        CHECK(std::abs(finer_t / base - 1.0) < 5e-3);
    }
}

TEST_CASE("concurrent runs are bit-identical to sequential ones") {
    auto cfg = parse_config_text("[run]\nkind = echo\n[grid]\npoints = 65536\n[comb]\ndepth = 2\nfinesse = 4\n"
                                 "spacing_hz = 250e3\nbandwidth_hz = 5e6\n[pulse]\nfwhm_s = 1e-6\n");
    const auto serial = execute(cfg);
    auto job = [&] { return execute(cfg); };
    auto f1 = std::async(std::launch::async, job);
    auto f2 = std::async(std::launch::async, job);
    const auto r1 = f1.get(), r2 = f2.get();
    for (const auto* r : {&r1, &r2}) {
        REQUIRE(r->files.size() == serial.files.size());
        for (std::size_t i = 0; i < serial.files.size(); ++i) CHECK(r->files[i].content == serial.files[i].content);
        CHECK(report_text(cfg, *r) == report_text(cfg, serial));
    }
}

TEST_CASE("csv numbers: 12 significant digits, '.' separator") {
    CHECK(csv::number(0.1) == "1.00000000000e-01");
    CHECK(csv::number(-123456.789) == "-1.23456789000e+05");
    CHECK(csv::number(0.0) == "0.00000000000e+00");
    CHECK(csv::number(std::nan("")) == "nan");
    csv::Table t({"a", "b"});
    t.add_row({1.0, 2.0});
    CHECK(t.str() == "a,b\n1.00000000000e+00,2.00000000000e+00\n");
    CHECK_THROWS(t.add_row({1.0}));
}

} // TEST_SUITE

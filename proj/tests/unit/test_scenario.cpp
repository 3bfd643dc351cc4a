#include <doctest.h>

#include "afc/scenario.hpp"

#include <algorithm>
#include <cmath>

using namespace afc;

TEST_SUITE("scenario") {

TEST_CASE("single-pass run reports simulation next to the analytic value") {
    CombParams c{0.8, 500e3, optimal_finesse(0.8), ToothShape::Square, 5e6, 0.0};
    const auto r = run_two_level(c, PulseSpec{450e-9, 5e-6, 0.0}, std::nullopt, GridSpec{1 << 17, 80e6});
    CHECK_FALSE(r.cavity);
    CHECK(r.analytic == doctest::Approx(0.044176).epsilon(1e-4));
    CHECK(r.efficiency == doctest::Approx(r.analytic).epsilon(0.03));
    CHECK(r.relative_deviation == doctest::Approx(r.efficiency / r.analytic - 1.0));
    CHECK(std::abs(r.echo_peak_s - 2e-6) <= r.input.grid.dt());
    CHECK(r.validity.valid);
}

TEST_CASE("cavity run: ceiling at the experimental parameters") {
    CombParams c{0.8, 500e3, 5.0, ToothShape::Square, 5e6, 0.0};
    const CavityParams cav{0.73, 1.0, 0.03, 500e6, 0.0};
    const auto r = run_two_level(c, PulseSpec{450e-9, 5e-6, 0.0}, cav, GridSpec{1 << 17, 80e6});
    CHECK(r.cavity);
    CHECK(r.analytic == doctest::Approx(0.73).epsilon(0.01 / 0.73));
    CHECK(r.efficiency == doctest::Approx(r.analytic).epsilon(0.05));
    CHECK(r.reflection_center_abs2 < 1.0);
}

TEST_CASE("narrowband-limit flags") {
    CombParams c{0.8, 500e3, 5.0, ToothShape::Square, 2e6, 0.0};
    const auto r = run_two_level(c, PulseSpec{450e-9, 5e-6, 0.0}, std::nullopt, GridSpec{1 << 16, 80e6});
    CHECK_FALSE(r.validity.valid);
    CHECK(r.validity.note.find("comb bandwidth") != std::string::npos);
}

TEST_CASE("spin-wave timeline identities") {
    SpinWaveTimeline tl{1e-6, 5e-6, 10.3e-6, 10e-6};
    CHECK(tl.storage_time_s() == doctest::Approx(5.3e-6));
    CHECK(tl.output_time_s() == tl.input_center_s + tl.afc_delay_s + tl.storage_time_s());
    CHECK_THROWS_AS((SpinWaveTimeline{1e-6, 12e-6, 13e-6, 10e-6}.validate()), DomainError);
    CHECK_THROWS_AS((SpinWaveTimeline{1e-6, 5e-6, 4e-6, 10e-6}.validate()), DomainError);
}

TEST_CASE("spin-wave budget from measured efficiencies") {
    SpinWaveInputs in;
    in.comb = {0.8, 100e3, 5.0, ToothShape::Square, 5e6, 0.0};
    in.input = {1.5e-6, 1e-6, 0.0};
    in.control.pulse.truncation_s = 4e-6;
    in.spin.gamma_hz = 26.5e3;
    in.measured_eta_2l = 0.28;
    in.eta_t_override = 0.70;
    const auto r = run_spin_wave(in);
    CHECK(r.budget.eta_total == doctest::Approx(0.119).epsilon(0.002 / 0.119));
    CHECK(r.budget.eta_total == doctest::Approx(r.budget.eta_2l * r.budget.eta_t * r.budget.eta_t * r.budget.eta_sw).epsilon(1e-12));
    CHECK(r.budget.eta_total / r.budget.eta_sw == doctest::Approx(0.137).epsilon(0.003 / 0.137));
    CHECK(r.eta_t_bloch == doctest::Approx(0.91).epsilon(0.03 / 0.91));
    CHECK_FALSE(r.eta_2l_simulated);
    CHECK(r.output_time_s == doctest::Approx(16.3e-6));

    // Output area is eta_total times the input area, its width stretched.
    const auto& tr = r.trace;
    double in_area = 0.0, out_area = 0.0, peak_t = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < tr.time_s.size(); ++i) {
        in_area += tr.input[i];
        out_area += tr.output[i];
        if (tr.output[i] > peak) {
            peak = tr.output[i];
            peak_t = tr.time_s[i];
        }
    }
    CHECK(out_area / in_area == doctest::Approx(r.budget.eta_total).epsilon(1e-3));
    CHECK(peak_t == doctest::Approx(16.3e-6).epsilon(1e-2));
    CHECK(peak == doctest::Approx(r.budget.eta_total / 1.2).epsilon(1e-3));
}

TEST_CASE("design scan trades dephasing against loss") {
    const auto r = optimize_cavity_design(0.8, 0.03, 20.0);
    CHECK_FALSE(r.boundary);
    CHECK(r.best.finesse > 5.0);
    CHECK(r.best.finesse < 7.0);
    CHECK(r.best.eta == doctest::Approx(0.728).epsilon(2e-3));
    const auto at5 = std::find_if(r.table.begin(), r.table.end(), [](const DesignRow& x) { return std::abs(x.finesse - 5.0) < 1e-9; });
    REQUIRE(at5 != r.table.end());
    CHECK(at5->eta == doctest::Approx(0.73).epsilon(0.01 / 0.73));
    CHECK(at5->r1 == doctest::Approx(std::exp(-0.32)));
}

TEST_CASE("lossless design is a boundary solution") {
    const auto r = optimize_cavity_design(0.8, 0.0, 20.0);
    CHECK(r.boundary);
    CHECK(r.best.finesse == doctest::Approx(20.0));
    for (std::size_t i = 1; i < r.table.size(); ++i) REQUIRE(r.table[i].eta >= r.table[i - 1].eta);
}

TEST_CASE("single-pass design recovers the closed-form optimum") {
    const auto r = optimize_cavity_design(12.0, 0.0, 20.0, DesignMode::SinglePass);
    CHECK(r.best.finesse == doctest::Approx(6.5).epsilon(0.1 / 6.5));
    CHECK(r.best.finesse == doctest::Approx(optimal_finesse(12.0)).epsilon(1e-3));
    CHECK(r.best.eta == doctest::Approx(0.50).epsilon(0.01 / 0.5));
}

TEST_CASE("design arguments are validated") {
    CHECK_THROWS_AS(optimize_cavity_design(0.0, 0.0, 20.0), DomainError);
    CHECK_THROWS_AS(optimize_cavity_design(0.8, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(optimize_cavity_design(0.8, 0.0, 20.0, DesignMode::Cavity, 1), DomainError);
}

} // TEST_SUITE

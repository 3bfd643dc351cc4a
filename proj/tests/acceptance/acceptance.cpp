// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.
#include "afc/analytic.hpp"
#include "afc/bloch.hpp"
#include "afc/cavity.hpp"
#include "afc/presets.hpp"
#include "afc/runner.hpp"
#include "afc/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace afc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) ok = false;
        detail << (detail.tellp() > 0 ? "; " : "") << what << (cond ? "" : " [miss]");
    }
    void near(const std::string& what, double value, double target, double tol) {
        std::ostringstream s;
        s.precision(6);
        s << what << " = " << value << " (want " << target << " +- " << tol << ")";
        expect(std::abs(value - target) <= tol, s.str());
    }
    void rel(const std::string& what, double value, double target, double tol) {
        std::ostringstream s;
        s.precision(6);
        s << what << " = " << value << " vs " << target << " (rel " << std::abs(value / target - 1.0) << " <= " << tol << ")";
        expect(std::abs(value / target - 1.0) <= tol, s.str());
    }
    void runtime(double s, double limit) {
        std::ostringstream o;
        o.precision(3);
        o << "runtime " << s << " s < " << limit << " s";
        expect(s < limit, o.str());
    }
};

int failures = 0;

void criterion(int n, const std::function<void(Check&)>& body) {
    Check c;
    try {
        body(c);
    } catch (const std::exception& e) {
        c.expect(false, std::string("exception: ") + e.what());
    }
    if (!c.ok) ++failures;
    std::printf("criterion %d: %s  %s\n", n, c.ok ? "PASS" : "FAIL", c.detail.str().c_str());
    std::fflush(stdout);
}

const GridSpec kDefaultGrid{};

} // namespace

int main() {
    criterion(1, [](Check& c) {
        const int reps = 1000;
        double f = 0.0, eta = 0.0;
        const auto t0 = Clock::now();
        for (int i = 0; i < reps; ++i) {
            f = optimal_finesse(12.0);
            eta = eta_single_pass(12.0 / 6.5, 6.5);
        }
        const double per_call = seconds_since(t0) / reps;
        c.near("F_opt(12)", f, 6.5, 0.1);
        c.near("eta(12/6.5, 6.5)", eta, 0.50, 0.01);
        c.runtime(per_call, 1e-3);
    });

    criterion(2, [](Check& c) {
        const double fopt = optimal_finesse(0.8);
        const CombParams comb{0.8, 100e3, fopt, ToothShape::Square, 5e6, 0.0};
        const auto t0 = Clock::now();
        const auto r = run_two_level(comb, PulseSpec{1.5e-6, 10e-6, 0.0}, std::nullopt, kDefaultGrid);
        const double t = seconds_since(t0);
        c.near("analytic", r.analytic, 0.044, 0.003);
        c.near("simulated", r.efficiency, 0.044, 0.003);
        c.rel("simulated vs analytic", r.efficiency, r.analytic, 0.03);
        c.runtime(t, 10.0);
    });

    criterion(3, [](Check& c) {
        const CavityParams cav{0.73, 1.0, 0.0, 500e6, 0.0};
        auto refl = [&](double d) { return std::norm(reflection_coefficient(cav, cplx{std::exp(-0.5 * d), 0.0}, 0.0)); };
        // Golden-section search for the reflection minimum over d~ in [0, 0.4].
        double lo = 0.0, hi = 0.4;
        const double g = (std::sqrt(5.0) - 1.0) / 2.0;
        for (int i = 0; i < 200; ++i) {
            const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
            if (refl(a) < refl(b)) hi = b;
            else lo = a;
        }
        const double match = 0.5 * (lo + hi);
        c.near("matching d~", match, 0.157, 0.005);
        std::ostringstream s;
        s << "|r|^2 at match = " << refl(match) << " < 1e-3";
        c.expect(refl(match) < 1e-3, s.str());
    });

    criterion(4, [](Check& c) {
        c.near("sinc^2(pi/5)", eta_deph_square(5.0), 0.875, 0.001);
        c.near("depth factor(0.2)", eta_cavity_finite_depth(0.2), 0.99, 0.005);
        c.near("loss factor(0.1, 0.02)", eta_cavity_loss(0.1, 0.02).value, 0.82, 0.005);
        c.near("loss factor(0.16, 0.03)", eta_cavity_loss(0.16, 0.03).value, 0.83, 0.005);
        c.near("ceiling", eta_deph_square(5.0) * eta_cavity_loss(0.16, 0.03).value, 0.73, 0.01);
    });

    criterion(5, [](Check& c) {
        const CombParams comb{0.8, 100e3, 5.0, ToothShape::Square, 5e6, 0.0};
        const double d = comb.average_depth();
        const auto t0 = Clock::now();
        for (double eps : {0.0, 0.03}) {
            const CavityParams cav{impedance_match_reflectivity(d), 1.0, eps, 500e6, 0.0};
            const auto r = run_two_level(comb, PulseSpec{1.5e-6, 10e-6, 0.0}, cav, kDefaultGrid);
            c.rel("eps=" + std::to_string(eps).substr(0, 4) + " simulated vs product", r.efficiency,
                  eta_cavity(d, 5.0, eps).value, 0.05);
        }
        c.runtime(seconds_since(t0), 60.0);
    });

    criterion(6, [](Check& c) {
        for (double spacing : {500e3, 100e3, 40e3}) {
            const double fwhm = std::min(1.5e-6, 0.225 / spacing);
            const CombParams comb{0.8, spacing, optimal_finesse(0.8), ToothShape::Square, 5e6, 0.0};
            const auto r = run_two_level(comb, PulseSpec{fwhm, 10e-6, 0.0}, std::nullopt, kDefaultGrid);
            const double dt = r.input.grid.dt();
            std::ostringstream s;
            s << "delay " << 1.0 / spacing << " s: peak offset " << (r.echo_peak_s - 1.0 / spacing) / dt << " dt";
            c.expect(std::abs(r.echo_peak_s - 1.0 / spacing) <= dt, s.str());
        }
    });

    criterion(7, [](Check& c) {
        ControlSettings s;
        s.pulse = SechPulseParams{250e3, 5e-6, 1.2e6, 4e-6, 0.0};
        PulseSpec input;
        input.fwhm_s = 1.5e-6;
        c.near("eta_T", control_transfer_efficiency(s, input), 0.91, 0.03);
        const double rabi = 100e3;
        const auto pi = integrate_bloch(0.0, ControlPulse::constant(rabi, 0.5 / rabi));
        c.near("pi-pulse p", pi.transfer_probability(), 1.0, 1e-6);
        double worst = 0.0;
        for (double det : {0.0, 2e5, 7e5}) worst = std::max(worst, std::abs(integrate_bloch(det, ControlPulse::sech(s.pulse)).norm() - 1.0));
        c.near("Bloch norm drift", worst, 0.0, 1e-6);
    });

    criterion(8, [](Check& c) {
        const double gamma = 26.5e3, t = 5.3e-6;
        const double eta = eta_spin_dephasing(SpinParams{gamma}, t);
        c.near("eta_sw", eta, 0.87, 0.005);
        // Ensemble oracle: echo intensity |mean of exp(i 2 pi delta t)|^2 over a Gaussian line of FWHM gamma (Simpson rule).
        const double sigma = gamma / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
        const int n = 20000;
        const double lo = -8.0 * sigma, h = 16.0 * sigma / n;
        double re = 0.0, im = 0.0, norm = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double x = lo + i * h;
            const double w = (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0)) * std::exp(-0.5 * x * x / (sigma * sigma));
            re += w * std::cos(2.0 * std::numbers::pi * x * t);
            im += w * std::sin(2.0 * std::numbers::pi * x * t);
            norm += w;
        }
        c.near("eta_sw vs ensemble", eta, std::pow(std::hypot(re, im) / norm, 2), 1e-4);
    });

    criterion(9, [](Check& c) {
        c.near("eta_total", total_budget(0.28, 0.70, 0.87).eta_total, 0.119, 0.002);
        c.near("T_sw -> 0", total_budget(0.28, 0.70, 1.0).eta_total, 0.137, 0.003);
    });

    criterion(10, [](Check& c) {
        const FrequencyGrid g(1 << 16, 400e6);
        const CavityParams cav{0.73, 0.995, 0.0, 500e6, 0.0};
        c.near("FSR/finesse", cav.empty_linewidth_hz() / 1e6, 25.0, 1.0);
        const auto empty = cavity_linewidth(cav, kramers_kronig_response(empty_profile(g)), 100e6);
        c.near("empty linewidth (MHz)", empty.fwhm_hz / 1e6, 25.0, 1.0);
        const auto narrow = cavity_linewidth(cav, kramers_kronig_response(transparency_window(1.2, 15e6, g)), 100e6);
        c.near("window linewidth (MHz)", narrow.fwhm_hz / 1e6, 3.0, 2.0);
    });

    criterion(11, [](Check& c) {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> depth(0.1, 5.0), fin(1.5, 10.0), spacing(100e3, 1e6), u(0.0, 1.0);
        const FrequencyGrid g(kDefaultGrid.points, kDefaultGrid.span_hz);
        const TimeGrid t(g);
        double pre = 0.0, h_max = 0.0, r_max = 0.0;
        for (int i = 0; i < 10; ++i) {
            const CombParams comb{depth(rng), spacing(rng), fin(rng), u(rng) < 0.5 ? ToothShape::Square : ToothShape::Gaussian, 5e6, 0.0};
            const auto h = kramers_kronig_response(make_comb(comb, g));
            for (double fwhm : {0.3e-6, 1e-6}) {
                const auto in = gaussian_pulse(fwhm, 10e-6, 0.0, t);
                pre = std::max(pre, pre_pulse_energy_fraction(propagate(in, h), in.energy(), 10e-6, fwhm));
            }
            for (const auto& z : h.h) h_max = std::max(h_max, std::abs(z));
            const CavityParams cav{0.05 + 0.9 * u(rng), 0.5 + 0.5 * u(rng), 0.1 * u(rng), 50e6, 0.0};
            for (const auto& z : reflection_response(cav, h).h) r_max = std::max(r_max, std::abs(z));
        }
        c.near("max pre-pulse energy", pre, 0.0, 1e-6);
        c.expect(h_max <= 1.0 + 1e-15 && r_max <= 1.0 + 1e-12, "max |H| = " + std::to_string(h_max) + ", max |r| = " + std::to_string(r_max));

        const CombParams comb{0.8, 100e3, 5.0, ToothShape::Square, 5e6, 0.0};
        const auto h = kramers_kronig_response(make_comb(comb, g));
        const auto in = gaussian_pulse(1.5e-6, 10e-6, 0.0, t);
        const auto gate = default_echo_gate(10e-6, 1.5e-6, comb.echo_delay_s());
        const double base = echo_efficiency(propagate(in, h), in.energy(), gate);
        auto scaled = in;
        for (auto& z : scaled.field) z *= cplx{-3.0, 4.0};
        c.rel("amplitude invariance", echo_efficiency(propagate(scaled, h), scaled.energy(), gate), base, 1e-12);

        const PulseSpec pulse{1.5e-6, 10e-6, 0.0};
        const double coarse = run_two_level(comb, pulse, std::nullopt, GridSpec{1 << 17, 80e6}).efficiency;
        const double fine = run_two_level(comb, pulse, std::nullopt, GridSpec{1 << 18, 80e6}).efficiency;
        c.rel("grid doubling", fine, coarse, 5e-3);

        const auto cfg = parse_config_text(std::string(find_preset("fig2a")->text), "fig2a");
        const auto a = execute(cfg), b = execute(cfg);
        bool same = a.files.size() == b.files.size() && report_text(cfg, a) == report_text(cfg, b);
        for (std::size_t i = 0; same && i < a.files.size(); ++i) same = a.files[i].content == b.files[i].content;
        c.expect(same, "byte-identical outputs across runs");
    });

    return failures == 0 ? 0 : 1;
}

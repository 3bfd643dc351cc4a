#include "afc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace afc {
namespace {

[[noreturn]] void domain(const std::string& field, const std::string& constraint, double got) {
    std::ostringstream os;
    os << field << ": " << constraint << " required, got " << got;
    throw DomainError(field, os.str());
}

double gaussian_intensity(double t, double center, double fwhm) {
    const double x = (t - center) / fwhm;
    return std::exp(-4.0 * std::numbers::ln2 * x * x);
}

} // namespace

void PulseSpec::validate() const {
    if (!(fwhm_s > 0.0)) domain("fwhm", "fwhm > 0", fwhm_s);
    if (!(center_s > 0.0)) domain("center", "center > 0", center_s);
    if (!std::isfinite(detuning_hz)) domain("detuning", "finite detuning", detuning_hz);
}

TwoLevelReport run_two_level(const CombParams& comb, const PulseSpec& pulse,
                             const std::optional<CavityParams>& cavity, const GridSpec& grid_spec) {
    comb.validate();
    pulse.validate();
    const auto fgrid = grid_spec.frequency_grid();
    const TimeGrid tgrid(fgrid);

    TwoLevelReport rep;
    rep.cavity = cavity.has_value();
    rep.delay_s = comb.echo_delay_s();
    rep.average_depth = comb.average_depth();

    const auto profile = make_comb(comb, fgrid);
    const auto medium = kramers_kronig_response(profile);
    rep.input = gaussian_pulse(pulse.fwhm_s, pulse.center_s, pulse.detuning_hz, tgrid);
    rep.gate = default_echo_gate(pulse.center_s, pulse.fwhm_s, rep.delay_s);
    if (rep.gate.stop() > tgrid.duration()) domain("delay", "echo window inside the time grid", rep.delay_s);

    const double bandwidth_ratio = gaussian_spectral_fwhm(pulse.fwhm_s) / comb.bandwidth_hz;
    if (bandwidth_ratio > 0.2) rep.validity.flag("pulse bandwidth exceeds comb bandwidth / 5");
    if (gaussian_spectral_fwhm(pulse.fwhm_s) < comb.spacing_hz)
        rep.validity.flag("pulse bandwidth narrower than the tooth spacing");

    const double deph = eta_deph(comb);
    const double dt = rep.average_depth;
    if (cavity) {
        auto echo = cavity_echo_efficiency(*cavity, medium, rep.input, pulse.fwhm_s, rep.gate);
        rep.efficiency = echo.efficiency;
        rep.output = std::move(echo.output);
        if (!echo.validity.valid) rep.validity.flag(echo.validity.note);
        auto ceiling = eta_cavity_loss(dt, cavity->epsilon);
        rep.analytic = deph * eta_cavity_finite_depth(dt) * ceiling.value;
        if (!ceiling.validity.valid) rep.validity.flag(ceiling.validity.note);
        rep.analytic_general = eta_cavity_general(dt, deph, cavity->r1, cavity->r2, cavity->epsilon);
        const std::size_t c = fgrid.index_of(cavity->detuning_hz);
        rep.reflection_center_abs2 = std::norm(reflection_coefficient(*cavity, medium.h[c], fgrid.frequency(c)));
    } else {
        rep.output = propagate(rep.input, medium);
        rep.efficiency = echo_efficiency(rep.output, rep.input.energy(), rep.gate);
        rep.analytic = dt * dt * std::exp(-dt) * deph;
        rep.analytic_general = rep.analytic;
    }
    rep.relative_deviation = rep.analytic > 0.0 ? rep.efficiency / rep.analytic - 1.0 : 0.0;
    try {
        rep.echo_peak_s = first_echo_peak_time(rep.output, pulse.center_s, rep.gate.guard_s) - pulse.center_s;
    } catch (const NumericalError&) {
        rep.echo_peak_s = std::nan("");
        rep.validity.flag("no echo found");
    }
    return rep;
}

void SpinWaveTimeline::validate() const {
    if (!(afc_delay_s > 0.0)) domain("delay", "AFC delay > 0", afc_delay_s);
    if (!(input_center_s < control1_s && control1_s < input_center_s + afc_delay_s))
        domain("control1", "input_center < control1 < input_center + AFC delay", control1_s);
    if (!(control2_s > control1_s)) domain("control2", "control2 > control1", control2_s);
}

double control_transfer_efficiency(const ControlSettings& control, const PulseSpec& input,
                                   const CombParams* comb, const GridSpec* grid) {
    auto pulse_params = control.pulse;
    pulse_params.center_s = 0.0;
    const auto pulse = ControlPulse::sech(pulse_params);
    const double spectral = gaussian_spectral_fwhm(input.fwhm_s);
    switch (control.weighting) {
    case Weighting::Uniform:
        return transfer_efficiency(pulse, uniform_weights(control.uniform_bandwidth_hz, control.samples), control.tolerance);
    case Weighting::Comb: {
        if (!comb || !grid) throw DomainError("weighting", "comb weighting needs a comb and a grid");
        const auto profile = make_comb(*comb, grid->frequency_grid());
        return transfer_efficiency(pulse, comb_weights(profile, spectral), control.tolerance, spectral / 100.0);
    }
    case Weighting::PulseSpectrum:
    default:
        return transfer_efficiency(pulse, spectral_weights(spectral, control.samples), control.tolerance);
    }
}

SpinWaveReport run_spin_wave(const SpinWaveInputs& in) {
    in.timeline.validate();
    in.spin.validate();
    if (!(in.output_stretch >= 1.0)) domain("stretch", "stretch >= 1", in.output_stretch);

    SpinWaveReport rep;
    rep.storage_time_s = in.timeline.storage_time_s();
    rep.output_time_s = in.timeline.output_time_s();
    rep.eta_t_bloch = control_transfer_efficiency(in.control, in.input, &in.comb, &in.grid);

    double eta_2l = 0.0;
    if (in.measured_eta_2l) {
        eta_2l = *in.measured_eta_2l;
    } else {
        eta_2l = run_two_level(in.comb, in.input, in.cavity, in.grid).efficiency;
        rep.eta_2l_simulated = true;
    }
    const double eta_t = in.eta_t_override.value_or(rep.eta_t_bloch);
    const double eta_sw = eta_spin_dephasing(in.spin, rep.storage_time_s);
    rep.budget = total_budget(eta_2l, eta_t, eta_sw, in.overlap);
    const double base = eta_2l * rep.eta_t_bloch * rep.eta_t_bloch * eta_sw;
    rep.implied_overlap = base > 0.0 ? rep.budget.eta_total / base : 0.0;

    // Presentation trace: placed envelopes, not a coupled field simulation.
    const auto& tl = in.timeline;
    const double fwhm = in.input.fwhm_s;
    const double out_fwhm = fwhm * in.output_stretch;
    // Starts early enough to hold the whole input envelope (t may be negative).
    const double t_begin = std::min(0.0, tl.input_center_s - 4.0 * fwhm);
    const double t_end = rep.output_time_s + 4.0 * out_fwhm;
    const double dt = fwhm / 50.0;
    const auto n = static_cast<std::size_t>(std::ceil((t_end - t_begin) / dt)) + 1;
    auto ctrl = in.control.pulse;
    const double half = std::isinf(ctrl.truncation_s) ? kUntruncatedSpanT * ctrl.duration_s : 0.5 * ctrl.truncation_s;
    const double k = kSechWidthFactor / ctrl.duration_s;
    auto marker = [&](double t, double center) {
        if (std::abs(t - center) > half) return 0.0;
        const double s = 1.0 / std::cosh(k * (t - center));
        return s * s;
    };
    auto& tr = rep.trace;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t_begin + static_cast<double>(i) * dt;
        tr.time_s.push_back(t);
        tr.input.push_back(gaussian_intensity(t, tl.input_center_s, fwhm));
        tr.control.push_back(std::max(marker(t, tl.control1_s), marker(t, tl.control2_s)));
        tr.output.push_back(rep.budget.eta_total / in.output_stretch * gaussian_intensity(t, rep.output_time_s, out_fwhm));
    }
    return rep;
}

DesignResult optimize_cavity_design(double peak_depth, double epsilon, double max_finesse,
                                    DesignMode mode, std::size_t steps) {
    if (!(peak_depth > 0.0)) domain("depth", "depth > 0", peak_depth);
    if (!(epsilon >= 0.0 && epsilon < 1.0)) domain("epsilon", "0 <= epsilon < 1", epsilon);
    if (!(max_finesse > 1.0)) domain("max_finesse", "max_finesse > 1", max_finesse);
    if (steps < 2) domain("steps", "steps >= 2", static_cast<double>(steps));

    DesignResult res;
    res.table.reserve(steps);
    std::size_t best = 0;
    for (std::size_t i = 0; i < steps; ++i) {
        DesignRow row;
        row.finesse = 1.0 + (max_finesse - 1.0) * static_cast<double>(i) / static_cast<double>(steps - 1);
        row.d_tilde = peak_depth / row.finesse;
        row.eta_deph = eta_deph_square(row.finesse);
        if (mode == DesignMode::Cavity) {
            row.r1 = impedance_match_reflectivity(row.d_tilde);
            row.depth_factor = eta_cavity_finite_depth(row.d_tilde);
            auto loss = eta_cavity_loss(row.d_tilde, epsilon);
            row.loss_factor = loss.value;
            row.valid = loss.validity.valid;
            row.eta = row.eta_deph * row.depth_factor * row.loss_factor;
        } else {
            row.r1 = 0.0;
            row.depth_factor = std::exp(-row.d_tilde) * row.d_tilde * row.d_tilde;
            row.eta = row.eta_deph * row.depth_factor;
        }
        res.table.push_back(row);
        if (res.table[i].eta > res.table[best].eta) best = i;
    }
    res.best = res.table[best];
    res.boundary = best + 1 == steps;
    return res;
}

} // namespace afc

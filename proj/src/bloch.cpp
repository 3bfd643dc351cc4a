#include "afc/bloch.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace afc {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

using State = std::array<double, 3>;

[[noreturn]] void domain(const std::string& field, const std::string& constraint, double got) {
    std::ostringstream os;
    os << field << ": " << constraint << " required, got " << got;
    throw DomainError(field, os.str());
}

} // namespace

void SechPulseParams::validate() const {
    if (!(rabi_max_hz >= 0.0)) domain("rabi_max", "rabi_max >= 0", rabi_max_hz);
    if (!(duration_s > 0.0)) domain("duration", "duration > 0", duration_s);
    if (!(chirp_hz >= 0.0)) domain("chirp", "chirp >= 0", chirp_hz);
    if (!(truncation_s > 0.0)) domain("truncation", "truncation > 0", truncation_s);
}

ControlPulse ControlPulse::sech(const SechPulseParams& p) {
    p.validate();
    const double k = kSechWidthFactor / p.duration_s;
    const double half = std::isinf(p.truncation_s) ? kUntruncatedSpanT * p.duration_s : 0.5 * p.truncation_s;
    ControlPulse c;
    c.rabi_hz = [=](double t) { return p.rabi_max_hz / std::cosh(k * (t - p.center_s)); };
    c.chirp_hz = [=](double t) { return 0.5 * p.chirp_hz * std::tanh(k * (t - p.center_s)); };
    c.start_s = p.center_s - half;
    c.stop_s = p.center_s + half;
    return c;
}

ControlPulse ControlPulse::constant(double rabi_hz, double duration_s) {
    if (!(duration_s > 0.0)) domain("duration", "duration > 0", duration_s);
    ControlPulse c;
    c.rabi_hz = [=](double) { return rabi_hz; };
    c.chirp_hz = [](double) { return 0.0; };
    c.start_s = 0.0;
    c.stop_s = duration_s;
    return c;
}

ControlWaveform sech_waveform(const SechPulseParams& p, double dt_s) {
    p.validate();
    const double fastest = std::max(p.rabi_max_hz, p.chirp_hz);
    if (!(dt_s > 0.0) || (fastest > 0.0 && dt_s > 1.0 / (20.0 * fastest))) {
        std::ostringstream os;
        os << "dt: time step must resolve 1/rabi_max and 1/chirp with >= 20 samples (dt <= "
           << 1.0 / (20.0 * fastest) << " s), got " << dt_s;
        throw DomainError("dt", os.str());
    }
    const auto pulse = ControlPulse::sech(p);
    ControlWaveform w;
    const auto n = static_cast<std::size_t>(std::floor((pulse.stop_s - pulse.start_s) / dt_s + 1e-9)) + 1;
    w.time_s.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = pulse.start_s + static_cast<double>(i) * dt_s;
        w.time_s.push_back(t);
        w.rabi_hz.push_back(pulse.rabi_hz(t));
        w.detuning_hz.push_back(pulse.chirp_hz(t));
    }
    return w;
}

double BlochState::norm() const { return std::sqrt(u * u + v * v + w * w); }

BlochState integrate_bloch(double detuning_hz, const ControlPulse& pulse, IntegratorTolerance tol) {
    namespace odeint = boost::numeric::odeint;
    State x{0.0, 0.0, -1.0};
    const auto rhs = [&](const State& s, State& dsdt, double t) {
        const double omega = two_pi * pulse.rabi_hz(t);
        const double delta = two_pi * (detuning_hz - pulse.chirp_hz(t));
        dsdt[0] = -delta * s[1];
        dsdt[1] = delta * s[0] + omega * s[2];
        dsdt[2] = -omega * s[1];
    };
    const double span = pulse.stop_s - pulse.start_s;
    if (!(span > 0.0)) domain("duration", "pulse duration > 0", span);
    try {
        auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(tol.absolute, tol.relative);
        odeint::integrate_adaptive(stepper, rhs, x, pulse.start_s, pulse.stop_s, span * 1e-4);
    } catch (const std::exception& e) {
        throw NumericalError(std::string("Bloch integration failed: ") + e.what());
    }
    BlochState s{x[0], x[1], x[2]};
    if (!std::isfinite(s.norm()) || std::abs(s.norm() - 1.0) > 1e-6)
        throw NumericalError("Bloch integration lost norm conservation");
    return s;
}

DetuningWeights uniform_weights(double bandwidth_hz, std::size_t n) {
    if (!(bandwidth_hz >= 0.0)) domain("bandwidth", "bandwidth >= 0", bandwidth_hz);
    if (n == 0) domain("samples", "samples >= 1", 0.0);
    DetuningWeights w;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = n == 1 ? 0.0 : -0.5 + static_cast<double>(i) / static_cast<double>(n - 1);
        w.detuning_hz.push_back(x * bandwidth_hz);
        w.weight.push_back(1.0);
    }
    return w;
}

DetuningWeights spectral_weights(double spectral_fwhm_hz, std::size_t n, double extent) {
    if (!(spectral_fwhm_hz > 0.0)) domain("bandwidth", "spectral FWHM > 0", spectral_fwhm_hz);
    if (n < 2) domain("samples", "samples >= 2", static_cast<double>(n));
    DetuningWeights w;
    const double a = 4.0 * std::numbers::ln2 / (spectral_fwhm_hz * spectral_fwhm_hz);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = extent * spectral_fwhm_hz * (-1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1));
        w.detuning_hz.push_back(d);
        w.weight.push_back(std::exp(-a * d * d));
    }
    return w;
}

DetuningWeights comb_weights(const AbsorptionProfile& comb, double spectral_fwhm_hz, double extent) {
    if (!(spectral_fwhm_hz > 0.0)) domain("bandwidth", "spectral FWHM > 0", spectral_fwhm_hz);
    DetuningWeights w;
    const double a = 4.0 * std::numbers::ln2 / (spectral_fwhm_hz * spectral_fwhm_hz);
    for (std::size_t i = 0; i < comb.depth.size(); ++i) {
        const double f = comb.grid.frequency(i);
        if (comb.depth[i] <= 0.0 || std::abs(f) > extent * spectral_fwhm_hz) continue;
        w.detuning_hz.push_back(f);
        w.weight.push_back(comb.depth[i] * std::exp(-a * f * f));
    }
    return w;
}

double transfer_efficiency(const ControlPulse& pulse, const DetuningWeights& weights,
                           IntegratorTolerance tol, double interp_step_hz) {
    double total = 0.0;
    for (double x : weights.weight) {
        if (!(x >= 0.0)) domain("weights", "non-negative weights", x);
        total += x;
    }
    if (weights.weight.size() != weights.detuning_hz.size())
        throw DomainError("weights", "weights and detunings differ in length");
    if (!(total > 0.0)) throw DomainError("weights", "detuning weights are empty or all zero");

    std::vector<double> p(weights.detuning_hz.size());
    if (interp_step_hz > 0.0) {
        const auto [lo_it, hi_it] = std::minmax_element(weights.detuning_hz.begin(), weights.detuning_hz.end());
        const double lo = *lo_it;
        const auto nodes = static_cast<std::size_t>(std::ceil((*hi_it - lo) / interp_step_hz)) + 1;
        std::vector<double> table(nodes + 1);
        for (std::size_t k = 0; k <= nodes; ++k)
            table[k] = integrate_bloch(lo + static_cast<double>(k) * interp_step_hz, pulse, tol).transfer_probability();
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double x = (weights.detuning_hz[i] - lo) / interp_step_hz;
            const auto k = std::min(static_cast<std::size_t>(x), nodes - 1);
            const double frac = x - static_cast<double>(k);
            p[i] = (1.0 - frac) * table[k] + frac * table[k + 1];
        }
    } else {
        for (std::size_t i = 0; i < p.size(); ++i)
            p[i] = integrate_bloch(weights.detuning_hz[i], pulse, tol).transfer_probability();
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += weights.weight[i] * p[i];
    return acc / total;
}

} // namespace afc

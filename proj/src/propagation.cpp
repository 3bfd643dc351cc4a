#include "afc/propagation.hpp"

#include "afc/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace afc {
namespace {

constexpr double ln2 = std::numbers::ln2;

std::size_t index_at_or_after(const TimeGrid& grid, double t) {
    const double x = std::ceil(t / grid.dt() - 1e-9);
    if (x <= 0.0) return 0;
    return std::min(grid.size(), static_cast<std::size_t>(x));
}

} // namespace

double PulseWaveform::energy() const {
    double e = 0.0;
    for (const auto& z : field) e += std::norm(z);
    return e * grid.dt();
}

double PulseWaveform::energy_between(double t0, double t1) const {
    double e = 0.0;
    const std::size_t last = std::min(field.size(), index_at_or_after(grid, t1 + 0.5 * grid.dt()));
    for (std::size_t j = index_at_or_after(grid, t0); j < last; ++j) {
        const double t = grid.time(j);
        if (t >= t0 && t <= t1) e += std::norm(field[j]);
    }
    return e * grid.dt();
}

double gaussian_spectral_fwhm(double fwhm_s) { return 2.0 * ln2 / (std::numbers::pi * fwhm_s); }

void validate_pulse_on_grid(double fwhm_s, double center_s, const TimeGrid& grid) {
    if (!(fwhm_s >= 10.0 * grid.dt())) {
        std::ostringstream os;
        os << "fwhm: pulse FWHM >= 10 dt (" << 10.0 * grid.dt() << " s) required, got " << fwhm_s;
        throw DomainError("fwhm", os.str());
    }
    // Intensity exp(-4 ln2 t^2/fwhm^2) drops below 1e-6 of peak at 2.23 fwhm;
    // 3 fwhm keeps the envelope itself below 1e-6 at the edges.
    const double margin = 3.0 * fwhm_s;
    if (center_s - margin < 0.0 || center_s + margin > grid.duration()) {
        std::ostringstream os;
        os << "center: pulse must sit >= 3 fwhm from both grid edges (duration " << grid.duration()
           << " s), got center " << center_s;
        throw DomainError("center", os.str());
    }
}

PulseWaveform gaussian_pulse(double fwhm_s, double center_s, double detuning_hz, const TimeGrid& grid) {
    validate_pulse_on_grid(fwhm_s, center_s, grid);
    PulseWaveform p{grid, std::vector<cplx>(grid.size()), detuning_hz};
    const double a = 2.0 * ln2 / (fwhm_s * fwhm_s);
    const double two_pi_det = 2.0 * std::numbers::pi * detuning_hz;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double t = grid.time(j) - center_s;
        p.field[j] = std::exp(-a * t * t) * std::polar(1.0, -two_pi_det * t);
    }
    const double scale = 1.0 / std::sqrt(p.energy());
    for (auto& z : p.field) z *= scale;
    return p;
}

PulseWaveform propagate(const PulseWaveform& pulse, const ComplexResponse& response) {
    if (!pulse.grid.conjugate_to(response.grid))
        throw DomainError("grid", "pulse time grid is not conjugate to the response frequency grid");
    // Spectrum in FFT order: E(f_k) = sum_j e_j exp(+2 pi i jk/n).
    auto spectrum = fft::backward(pulse.field);
    auto h = fft::ifftshift<cplx>(response.h);
    for (std::size_t k = 0; k < spectrum.size(); ++k) spectrum[k] *= h[k];
    auto field = fft::forward(spectrum);
    const double inv_n = 1.0 / static_cast<double>(field.size());
    for (auto& z : field) z *= inv_n;
    return PulseWaveform{pulse.grid, std::move(field), pulse.detuning_hz};
}

EchoGate default_echo_gate(double input_center_s, double fwhm_s, double delay_s) {
    EchoGate g;
    g.input_center_s = input_center_s;
    g.guard_s = std::min(3.0 * fwhm_s, 0.5 * delay_s);
    g.echo_time_s = input_center_s + delay_s;
    g.width_s = std::min(4.0 * fwhm_s, delay_s);
    return g;
}

double pre_pulse_energy_fraction(const PulseWaveform& out, double input_energy, double input_center_s,
                                 double input_fwhm_s) {
    if (!(input_energy > 0.0)) throw DomainError("input_energy", "input energy must be positive");
    const double arrival = input_center_s - 4.0 * input_fwhm_s;
    if (!(arrival > 0.0)) throw DomainError("center_s", "input pulse must start at least 4 fwhm into the record");
    return out.energy_between(0.0, arrival) / input_energy;
}

double echo_efficiency(const PulseWaveform& out, double input_energy, const EchoGate& gate) {
    if (!(input_energy > 0.0)) throw DomainError("input_energy", "input energy must be positive");
    if (!(gate.width_s > 0.0)) throw DomainError("window", "echo window width must be positive");
    if (gate.start() < gate.input_center_s + gate.guard_s - 1e-15) {
        std::ostringstream os;
        os << "window: echo window starts at " << gate.start() << " s, inside the transmitted-input guard ending at "
           << gate.input_center_s + gate.guard_s << " s";
        throw DomainError("window", os.str());
    }
    if (gate.start() < 0.0 || gate.stop() > out.grid.duration())
        throw DomainError("window", "echo window extends beyond the time grid");
    return out.energy_between(gate.start(), gate.stop()) / input_energy;
}

double first_echo_peak_time(const PulseWaveform& out, double input_center_s, double guard_s) {
    const std::size_t first = index_at_or_after(out.grid, input_center_s + guard_s);
    const std::size_t n = out.field.size();
    if (first + 2 >= n) throw NumericalError("no echo found: search region is empty");
    std::size_t best = first;
    double peak = 0.0, total = 0.0;
    for (std::size_t j = first; j < n; ++j) {
        const double a = std::norm(out.field[j]);
        total += a;
        if (a > peak) {
            peak = a;
            best = j;
        }
    }
    // Require a localized maximum clearly above the numerical floor.
    if (!(peak > 1e-20) || peak * static_cast<double>(n - first) < 1.0001 * total || best == first || best + 1 >= n)
        throw NumericalError("no echo found after the transmitted input");
    const double ym = std::abs(out.field[best - 1]);
    const double y0 = std::abs(out.field[best]);
    const double yp = std::abs(out.field[best + 1]);
    const double curvature = ym - 2.0 * y0 + yp;
    double offset = 0.0;
    if (curvature < 0.0) offset = std::clamp(0.5 * (ym - yp) / curvature, -0.5, 0.5);
    return out.grid.time(best) + offset * out.grid.dt();
}

} // namespace afc

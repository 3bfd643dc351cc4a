#pragma once

#include "afc/spectrum.hpp"

#include <complex>
#include <vector>

namespace afc {

// Time axis conjugate to a FrequencyGrid: t_j = j * dt, dt = 1/span,
// duration = n * dt = 1/resolution.
class TimeGrid {
public:
    TimeGrid() = default;
    explicit TimeGrid(const FrequencyGrid& freq) : n_(freq.size()), dt_(1.0 / freq.span()) {}

    std::size_t size() const { return n_; }
    double dt() const { return dt_; }
    double duration() const { return dt_ * static_cast<double>(n_); }
    double time(std::size_t j) const { return dt_ * static_cast<double>(j); }
    bool conjugate_to(const FrequencyGrid& freq) const {
        return n_ == freq.size() && std::abs(dt_ * freq.span() - 1.0) < 1e-12;
    }

    bool operator==(const TimeGrid&) const = default;

private:
    std::size_t n_ = 0;
    double dt_ = 0.0;
};

// Complex field envelope. The spectrum convention is E(f) = sum_t e(t) exp(+2 pi i f t),
// so a response H multiplies E(f) and a delay tau is H = exp(+2 pi i f tau).
struct PulseWaveform {
    TimeGrid grid;
    std::vector<cplx> field;
    double detuning_hz = 0.0;

    // integral of |e|^2 dt
    double energy() const;
    double energy_between(double t0, double t1) const;
};

// Spectral FWHM of the power spectrum of a Gaussian pulse with intensity FWHM `fwhm_s`.
double gaussian_spectral_fwhm(double fwhm_s);

// Throws DomainError unless fwhm >= 10 dt and the center sits >= 3 fwhm from both edges.
void validate_pulse_on_grid(double fwhm_s, double center_s, const TimeGrid& grid);

// Unit-energy Gaussian envelope with intensity FWHM `fwhm_s`, centered at `center_s`,
// carrier offset by `detuning_hz` from the grid center.
PulseWaveform gaussian_pulse(double fwhm_s, double center_s, double detuning_hz, const TimeGrid& grid);

// Output whose spectrum is H(f) times the input spectrum.
PulseWaveform propagate(const PulseWaveform& pulse, const ComplexResponse& response);

// Output energy recorded before the input arrives, t < center - 4 fwhm, over
// the input energy. Nonzero only for an acausal response.
double pre_pulse_energy_fraction(const PulseWaveform& out, double input_energy, double input_center_s,
                                 double input_fwhm_s);

// Where to look for the echo and what to exclude as transmitted input.
struct EchoGate {
    double input_center_s = 0.0;
    double guard_s = 0.0;   // [input_center, input_center + guard] belongs to the input
    double echo_time_s = 0.0;
    double width_s = 0.0;   // window [echo_time - width/2, echo_time + width/2]

    double start() const { return echo_time_s - 0.5 * width_s; }
    double stop() const { return echo_time_s + 0.5 * width_s; }
};

// Window min(4 fwhm, delay) centered on input_center + delay, guard min(3 fwhm, delay/2).
EchoGate default_echo_gate(double input_center_s, double fwhm_s, double delay_s);

// Energy inside the gate window over `input_energy`.
double echo_efficiency(const PulseWaveform& out, double input_energy, const EchoGate& gate);

// Time of the largest |field| after input_center + guard, refined by a parabola
// through the three samples around the maximum.
double first_echo_peak_time(const PulseWaveform& out, double input_center_s, double guard_s);

} // namespace afc

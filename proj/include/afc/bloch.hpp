#pragma once

#include "afc/errors.hpp"
#include "afc/spectrum.hpp"

#include <functional>
#include <limits>
#include <vector>

namespace afc {

// Truncated, tanh-chirped sech control pulse. All frequencies are ordinary (Hz):
//   Omega(t) = rabi_max * sech(1.76 (t - center)/T)
//   nu(t)    = chirp/2 * tanh(1.76 (t - center)/T)
// kept only for |t - center| <= truncation/2.
struct SechPulseParams {
    double rabi_max_hz = 250e3;
    double duration_s = 5e-6; // T, intensity FWHM
    double chirp_hz = 1.2e6;  // total chirp range
    double truncation_s = std::numeric_limits<double>::infinity();
    double center_s = 0.0;

    void validate() const;
    bool operator==(const SechPulseParams&) const = default;
};

inline constexpr double kSechWidthFactor = 1.76;

// A control field as continuous functions of time on [start, stop].
struct ControlPulse {
    std::function<double(double)> rabi_hz;  // Rabi frequency, Hz
    std::function<double(double)> chirp_hz; // instantaneous carrier offset, Hz
    double start_s = 0.0;
    double stop_s = 0.0;

    static ControlPulse sech(const SechPulseParams& p);
    // Constant-amplitude unchirped pulse of the given duration starting at 0.
    static ControlPulse constant(double rabi_hz, double duration_s);
};

// Untruncated sech pulses are integrated over +-this many T.
inline constexpr double kUntruncatedSpanT = 8.0;

struct ControlWaveform {
    std::vector<double> time_s;
    std::vector<double> rabi_hz;
    std::vector<double> detuning_hz;
};

// Samples the pulse at spacing dt from start to stop. dt must resolve both
// 1/rabi_max and 1/chirp with at least 20 samples.
ControlWaveform sech_waveform(const SechPulseParams& p, double dt_s);

struct BlochState {
    double u = 0.0;
    double v = 0.0;
    double w = -1.0;

    double norm() const;
    // Excited-state population (1 + w)/2.
    double transfer_probability() const { return 0.5 * (1.0 + w); }
};

struct IntegratorTolerance {
    double relative = 1e-9;
    double absolute = 1e-12;

    bool operator==(const IntegratorTolerance&) const = default;
};

// Undamped Bloch equations from the ground state, Delta'(t) = 2 pi (detuning - nu(t)):
//   du/dt = -Delta' v,  dv/dt = Delta' u + Omega w,  dw/dt = -Omega v.
BlochState integrate_bloch(double detuning_hz, const ControlPulse& pulse, IntegratorTolerance tol = {});

struct DetuningWeights {
    std::vector<double> detuning_hz;
    std::vector<double> weight;
};

// Uniform over [-bandwidth/2, bandwidth/2] with n samples.
DetuningWeights uniform_weights(double bandwidth_hz, std::size_t n);
// Gaussian power spectrum of FWHM `spectral_fwhm_hz`, n samples over +-extent FWHM.
DetuningWeights spectral_weights(double spectral_fwhm_hz, std::size_t n = 241, double extent = 3.0);
// Pulse spectrum times the comb absorption: every absorbing bin within +-extent FWHM.
DetuningWeights comb_weights(const AbsorptionProfile& comb, double spectral_fwhm_hz, double extent = 3.0);

// Weighted mean transfer probability. Samples closer than `interp_step_hz` share
// a tabulated p(detuning) with linear interpolation; 0 integrates every sample.
double transfer_efficiency(const ControlPulse& pulse, const DetuningWeights& weights,
                           IntegratorTolerance tol = {}, double interp_step_hz = 0.0);

} // namespace afc

#pragma once

#include "afc/propagation.hpp"
#include "afc/spectrum.hpp"

namespace afc {

// Asymmetric Fabry-Perot around the crystal. R1 is the input/output mirror.
struct CavityParams {
    double r1 = 0.73;            // front mirror power reflectivity
    double r2 = 1.0;             // back mirror power reflectivity
    double epsilon = 0.0;        // lumped round-trip power loss, excluding the comb
    double fsr_hz = 500e6;
    double detuning_hz = 0.0;    // cavity resonance relative to the comb center

    void validate() const;

    // Empty-cavity finesse pi (R1 R2 (1-eps))^{1/4} / (1 - sqrt(R1 R2 (1-eps))).
    double empty_finesse() const;
    // Empty-cavity Airy FWHM; fsr when the resonance is too broad to define one.
    double empty_linewidth_hz() const;

    bool operator==(const CavityParams&) const = default;
};

// r(f) = [sqrt(R1) - a H^2 e^{i theta}] / [1 - sqrt(R1) a H^2 e^{i theta}],
// a = sqrt(R2 (1 - eps)), theta = 2 pi (f - detuning) / fsr.
// Resonance (theta = 0) sits at the cavity detuning; |r| -> 0 at impedance match.
cplx reflection_coefficient(const CavityParams& cav, cplx single_pass, double f_hz);
ComplexResponse reflection_response(const CavityParams& cav, const ComplexResponse& medium);

struct CavityEcho {
    double efficiency = 0.0;
    PulseWaveform output;
    // Spectral FWHM of the pulse over the cavity linewidth; the closed-form
    // cavity efficiency assumes this is << 1.
    double bandwidth_ratio = 0.0;
    Validity validity;
};

CavityEcho cavity_echo_efficiency(const CavityParams& cav, const ComplexResponse& medium,
                                  const PulseWaveform& pulse, double pulse_fwhm_s, const EchoGate& gate);

struct Linewidth {
    double fwhm_hz = 0.0;
    double resonance_hz = 0.0;
    double contrast = 0.0; // max |r|^2 in the probe span minus |r|^2 at resonance
};

// FWHM of the peak of 1 - |r(f)|^2 at the resonance nearest the cavity detuning,
// searched within +-probe_span/2. Throws NumericalError when the resonance is not
// resolved or its contrast is below 5%.
Linewidth cavity_linewidth(const CavityParams& cav, const ComplexResponse& medium, double probe_span_hz);

} // namespace afc

#include "afc/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace afc {
namespace {

constexpr double pi = std::numbers::pi;

[[noreturn]] void domain(const std::string& field, const std::string& constraint, double got) {
    std::ostringstream os;
    os << field << ": " << constraint << " required, got " << got;
    throw DomainError(field, os.str());
}

} // namespace

void CavityParams::validate() const {
    if (!(r1 > 0.0 && r1 <= 1.0)) domain("r1", "0 < r1 <= 1", r1);
    if (!(r2 > 0.0 && r2 <= 1.0)) domain("r2", "0 < r2 <= 1", r2);
    if (!(epsilon >= 0.0 && epsilon < 1.0)) domain("epsilon", "0 <= epsilon < 1", epsilon);
    if (!(fsr_hz > 0.0)) domain("fsr", "fsr > 0", fsr_hz);
    if (!std::isfinite(detuning_hz)) domain("detuning", "finite detuning", detuning_hz);
}

double CavityParams::empty_finesse() const {
    const double g = std::sqrt(r1 * r2 * (1.0 - epsilon));
    return pi * std::sqrt(g) / (1.0 - g);
}

double CavityParams::empty_linewidth_hz() const {
    const double g = std::sqrt(r1 * r2 * (1.0 - epsilon));
    const double x = (1.0 - g) / (2.0 * std::sqrt(g));
    if (!(x < 1.0)) return fsr_hz;
    return fsr_hz * 2.0 * std::asin(x) / pi;
}

cplx reflection_coefficient(const CavityParams& cav, cplx single_pass, double f_hz) {
    const double x = std::sqrt(cav.r1);
    const double a = std::sqrt(cav.r2 * (1.0 - cav.epsilon));
    const cplx round_trip = a * single_pass * single_pass * std::polar(1.0, 2.0 * pi * (f_hz - cav.detuning_hz) / cav.fsr_hz);
    return (x - round_trip) / (1.0 - x * round_trip);
}

ComplexResponse reflection_response(const CavityParams& cav, const ComplexResponse& medium) {
    cav.validate();
    const double lw = cav.empty_linewidth_hz();
    if (lw < cav.fsr_hz && medium.grid.span() < lw) {
        std::ostringstream os;
        os << "span: grid span " << medium.grid.span() << " Hz is narrower than the cavity linewidth " << lw << " Hz";
        throw DomainError("span", os.str());
    }
    ComplexResponse r{medium.grid, std::vector<cplx>(medium.h.size())};
    for (std::size_t i = 0; i < r.h.size(); ++i)
        r.h[i] = reflection_coefficient(cav, medium.h[i], medium.grid.frequency(i));
    return r;
}

CavityEcho cavity_echo_efficiency(const CavityParams& cav, const ComplexResponse& medium,
                                  const PulseWaveform& pulse, double pulse_fwhm_s, const EchoGate& gate) {
    CavityEcho out;
    const auto refl = reflection_response(cav, medium);
    out.output = propagate(pulse, refl);
    out.efficiency = echo_efficiency(out.output, pulse.energy(), gate);
    out.bandwidth_ratio = gaussian_spectral_fwhm(pulse_fwhm_s) / cav.empty_linewidth_hz();
    if (out.bandwidth_ratio > 0.1) out.validity.flag("pulse bandwidth not << cavity linewidth");
    return out;
}

Linewidth cavity_linewidth(const CavityParams& cav, const ComplexResponse& medium, double probe_span_hz) {
    cav.validate();
    const auto& grid = medium.grid;
    const std::size_t n = grid.size();
    const std::size_t lo = grid.index_of(cav.detuning_hz - 0.5 * probe_span_hz);
    const std::size_t hi = grid.index_of(cav.detuning_hz + 0.5 * probe_span_hz);
    if (hi <= lo + 2) throw NumericalError("resonance not found: probe span covers fewer than three bins");

    std::vector<double> loss(n, 0.0); // 1 - |r|^2 inside [lo, hi]
    double max_refl = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) {
        const double r2 = std::norm(reflection_coefficient(cav, medium.h[i], grid.frequency(i)));
        loss[i] = 1.0 - r2;
        max_refl = std::max(max_refl, r2);
    }

    // Climb to the local maximum of the loss nearest the nominal resonance.
    std::size_t peak = std::clamp(grid.index_of(cav.detuning_hz), lo + 1, hi - 1);
    for (;;) {
        if (peak + 1 < hi && loss[peak + 1] > loss[peak]) ++peak;
        else if (peak > lo + 1 && loss[peak - 1] > loss[peak]) --peak;
        else break;
    }
    if (peak <= lo || peak >= hi) throw NumericalError("resonance not found within the probe span");

    Linewidth lw;
    lw.resonance_hz = grid.frequency(peak);
    lw.contrast = max_refl - (1.0 - loss[peak]);
    if (lw.contrast < 0.05) {
        std::ostringstream os;
        os << "resonance contrast " << lw.contrast << " below 5%; linewidth not reported";
        throw NumericalError(os.str());
    }

    const double half = 0.5 * loss[peak];
    const double res = grid.resolution();
    // Walk outwards until the loss falls below half; a rising loss first means
    // the resonance merges into something else.
    auto crossing = [&](int dir) -> double {
        std::size_t i = peak;
        for (;;) {
            const std::size_t next = dir > 0 ? i + 1 : i - 1;
            if ((dir > 0 && next > hi) || (dir < 0 && (i == lo)))
                throw NumericalError("resonance not resolved: half maximum outside the probe span");
            if (loss[next] <= half) {
                const double frac = (loss[i] - half) / (loss[i] - loss[next]);
                return grid.frequency(i) + dir * frac * res;
            }
            if (loss[next] > loss[i]) throw NumericalError("resonance not resolved: loss rises before half maximum");
            i = next;
        }
    };
    lw.fwhm_hz = crossing(+1) - crossing(-1);
    return lw;
}

} // namespace afc

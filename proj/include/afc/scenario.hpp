#pragma once

#include "afc/analytic.hpp"
#include "afc/bloch.hpp"
#include "afc/cavity.hpp"
#include "afc/propagation.hpp"
#include "afc/spectrum.hpp"

#include <optional>
#include <string>
#include <vector>

namespace afc {

struct GridSpec {
    std::size_t points = std::size_t{1} << 18;
    double span_hz = 80e6;

    FrequencyGrid frequency_grid() const { return FrequencyGrid(points, span_hz); }
    bool operator==(const GridSpec&) const = default;
};

struct PulseSpec {
    double fwhm_s = 1.5e-6;
    double center_s = 10e-6;
    double detuning_hz = 0.0;

    void validate() const;
    bool operator==(const PulseSpec&) const = default;
};

struct TwoLevelReport {
    bool cavity = false;
    double efficiency = 0.0;         // simulated echo energy over input energy
    double analytic = 0.0;           // closed-form prediction (ceiling for the cavity)
    double analytic_general = 0.0;   // first-order cavity formula at the actual mirrors
    double relative_deviation = 0.0; // efficiency / analytic - 1
    double average_depth = 0.0;
    double delay_s = 0.0;            // 1/spacing
    double echo_peak_s = 0.0;        // first echo peak, relative to the input center
    double reflection_center_abs2 = 0.0;
    EchoGate gate;
    PulseWaveform input;
    PulseWaveform output;
    Validity validity;
};

// comb -> (cavity) -> propagation, with the matching analytic prediction.
TwoLevelReport run_two_level(const CombParams& comb, const PulseSpec& pulse,
                             const std::optional<CavityParams>& cavity, const GridSpec& grid = {});

struct SpinWaveTimeline {
    double input_center_s = 1e-6;
    double control1_s = 5e-6;
    double control2_s = 10.3e-6;
    double afc_delay_s = 10e-6;

    void validate() const;
    double storage_time_s() const { return control2_s - control1_s; }
    double output_time_s() const { return input_center_s + afc_delay_s + storage_time_s(); }
};

enum class Weighting { PulseSpectrum, Uniform, Comb };

struct ControlSettings {
    SechPulseParams pulse;
    Weighting weighting = Weighting::PulseSpectrum;
    double uniform_bandwidth_hz = 1.0e6;
    std::size_t samples = 241;
    IntegratorTolerance tolerance;

    bool operator==(const ControlSettings&) const = default;
};

struct SpinWaveInputs {
    SpinWaveTimeline timeline;
    CombParams comb;
    PulseSpec input;
    ControlSettings control;
    SpinParams spin;
    std::optional<CavityParams> cavity;
    std::optional<double> measured_eta_2l;
    std::optional<double> eta_t_override;
    double overlap = 1.0;
    double output_stretch = 1.2;
    GridSpec grid;
};

struct SyntheticTrace {
    std::vector<double> time_s;
    std::vector<double> input;   // reference input intensity, unit peak
    std::vector<double> control; // control pulse markers, unit peak
    std::vector<double> output;  // recalled signal, area eta_total x input area
};

struct SpinWaveReport {
    EfficiencyBudget budget;
    double eta_t_bloch = 0.0;    // detuning-averaged Bloch transfer
    double implied_overlap = 0.0; // overlap that reconciles eta_t_bloch with eta_total
    bool eta_2l_simulated = false;
    double storage_time_s = 0.0;
    double output_time_s = 0.0;
    SyntheticTrace trace;
};

// Detuning-averaged transfer efficiency of the configured control pulse.
double control_transfer_efficiency(const ControlSettings& control, const PulseSpec& input,
                                   const CombParams* comb = nullptr, const GridSpec* grid = nullptr);

SpinWaveReport run_spin_wave(const SpinWaveInputs& in);

enum class DesignMode { Cavity, SinglePass };

struct DesignRow {
    double finesse = 0.0;
    double d_tilde = 0.0;
    double r1 = 0.0; // impedance-matched front mirror (cavity mode)
    double eta_deph = 0.0;
    double depth_factor = 1.0;
    double loss_factor = 1.0;
    double eta = 0.0;
    bool valid = true;
};

struct DesignResult {
    DesignRow best;
    bool boundary = false; // optimum sits at the largest scanned finesse
    std::vector<DesignRow> table;
};

// Scans F in [1, max_finesse] with `steps` points; the cavity mode places R1 at
// the impedance match for each F and multiplies dephasing, depth and loss factors.
DesignResult optimize_cavity_design(double peak_depth, double epsilon, double max_finesse,
                                    DesignMode mode = DesignMode::Cavity, std::size_t steps = 1901);

} // namespace afc

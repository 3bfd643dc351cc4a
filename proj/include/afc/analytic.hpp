#pragma once

#include "afc/errors.hpp"

namespace afc {

enum class ToothShape { Square, Gaussian };

// A prepared atomic frequency comb. Frequencies are ordinary (Hz).
struct CombParams {
    double peak_depth = 0.0;      // d, optical depth at a tooth peak
    double spacing_hz = 0.0;      // tooth period
    double finesse = 1.0;         // spacing / tooth width
    ToothShape shape = ToothShape::Square;
    double bandwidth_hz = 0.0;    // total comb extent
    double background_depth = 0.0; // residual depth between teeth

    void validate() const;

    double tooth_width_hz() const { return spacing_hz / finesse; }
    double echo_delay_s() const { return 1.0 / spacing_hz; }
    std::size_t tooth_count() const;
    // Depth averaged over one period (d/F for square teeth on zero background).
    double average_depth() const;

    bool operator==(const CombParams&) const = default;
};

struct SpinParams {
    double gamma_hz = 0.0; // FWHM of the Gaussian inhomogeneous spin line

    void validate() const;
    bool operator==(const SpinParams&) const = default;
};

// Crystal constants; defaults are the 153Eu:Y2SiO5 values used throughout.
struct MaterialParams {
    double alpha_per_cm = 1.2;
    double length_cm = 1.0;
    double inhom_broadening_hz = 650e6;
    double homog_linewidth_hz = 0.0; // not modeled; kept for bookkeeping
    double f_plus_offset_hz = 90.0e6;
    double f_minus_offset_hz = -51e6;

    double peak_depth() const { return alpha_per_cm * length_cm; }
    void validate() const;
};

// sinc^2(pi/F) with the unnormalized sinc(x) = sin(x)/x.
double eta_deph_square(double finesse);
// exp(-pi^2 / (2 ln2 F^2)) for Gaussian teeth of FWHM spacing/F.
double eta_deph_gaussian(double finesse);
double eta_deph(const CombParams& comb);

// d~^2 exp(-d~) sinc^2(pi/F): forward single-pass echo efficiency.
double eta_single_pass(double d_tilde, double finesse);
// Same, for an arbitrary comb (uses the comb's own average depth and tooth shape).
double eta_single_pass(const CombParams& comb);

// Finesse maximizing eta_single_pass(d/F, F) for square teeth: pi / atan(2 pi / d).
double optimal_finesse(double peak_depth);

// Front-mirror reflectivity giving total absorption: R = exp(-2 d~), and its inverse.
double impedance_match_reflectivity(double d_tilde);
double impedance_match_depth(double reflectivity);

// d~^2 / sinh^2(d~); equals 1 at d~ = 0.
double eta_cavity_finite_depth(double d_tilde);

// (1 + eps/(4 d~))^-4. Flagged invalid outside eps << d~ << 1.
Flagged<double> eta_cavity_loss(double d_tilde, double epsilon);

// Product of the three cavity factors at impedance match:
// eta_deph(F) * d~^2/sinh^2(d~) * (1 + eps/4d~)^-4.
Flagged<double> eta_cavity(double d_tilde, double finesse, double epsilon);

// First-order echo efficiency of a comb in an asymmetric cavity with arbitrary
// mirrors: [2 a (1 - R1) e^{-d~} / (1 - sqrt(R1) a e^{-d~})^2]^2 d~^2 eta_deph,
// with a = sqrt(R2 (1 - eps)). Reduces to eta_cavity_finite_depth at the match.
double eta_cavity_general(double d_tilde, double dephasing, double r1, double r2, double epsilon);

// Gaussian spin-line dephasing after storage time t_sw.
double eta_spin_dephasing(const SpinParams& spin, double t_sw);

struct EfficiencyBudget {
    double eta_2l = 0.0;
    double eta_t = 0.0;
    double eta_sw = 0.0;
    double overlap = 1.0;
    double eta_total = 0.0;
    Validity validity;
};

// eta = eta_2L * eta_T^2 * eta_sw * overlap.
EfficiencyBudget total_budget(double eta_2l, double eta_t, double eta_sw, double overlap = 1.0);

// Overlap factor that makes the budget reproduce a given total.
double overlap_for_total(double eta_total, double eta_2l, double eta_t, double eta_sw);

} // namespace afc

#include "afc/analytic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace afc {
namespace {

constexpr double pi = std::numbers::pi;
constexpr double ln2 = std::numbers::ln2;

[[noreturn]] void domain(const std::string& field, const std::string& constraint, double got) {
    std::ostringstream os;
    os << field << ": " << constraint << " required, got " << got;
    throw DomainError(field, os.str());
}

void require_unit_interval(const char* field, double x) {
    if (!(x >= 0.0 && x <= 1.0)) domain(field, std::string(field) + " in [0, 1]", x);
}

} // namespace

void CombParams::validate() const {
    if (!(peak_depth >= 0.0)) domain("depth", "depth >= 0", peak_depth);
    if (!(spacing_hz > 0.0)) domain("spacing", "spacing > 0", spacing_hz);
    if (!(finesse >= 1.0)) domain("finesse", "finesse >= 1", finesse);
    if (!(bandwidth_hz >= spacing_hz)) domain("bandwidth", "bandwidth >= spacing", bandwidth_hz);
    if (!(background_depth >= 0.0 && background_depth <= peak_depth))
        domain("background", "0 <= background <= depth", background_depth);
}

std::size_t CombParams::tooth_count() const {
    return static_cast<std::size_t>(std::floor(bandwidth_hz / spacing_hz + 1e-9));
}

double CombParams::average_depth() const {
    const double duty = shape == ToothShape::Square
                            ? 1.0 / finesse
                            : std::sqrt(pi / (4.0 * ln2)) / finesse;
    return background_depth + (peak_depth - background_depth) * duty;
}

void SpinParams::validate() const {
    if (!(gamma_hz >= 0.0)) domain("gamma", "gamma >= 0", gamma_hz);
}

void MaterialParams::validate() const {
    if (!(alpha_per_cm * length_cm >= 0.0)) domain("alpha", "alpha * L >= 0", alpha_per_cm * length_cm);
}

double eta_deph_square(double finesse) {
    if (!(finesse >= 1.0)) domain("finesse", "finesse >= 1", finesse);
    if (std::isinf(finesse)) return 1.0;
    const double x = pi / finesse;
    const double s = std::sin(x) / x;
    return s * s;
}

double eta_deph_gaussian(double finesse) {
    if (!(finesse >= 1.0)) domain("finesse", "finesse >= 1", finesse);
    return std::exp(-pi * pi / (2.0 * ln2 * finesse * finesse));
}

double eta_deph(const CombParams& comb) {
    return comb.shape == ToothShape::Square ? eta_deph_square(comb.finesse)
                                            : eta_deph_gaussian(comb.finesse);
}

double eta_single_pass(double d_tilde, double finesse) {
    if (!(d_tilde >= 0.0)) domain("d_tilde", "d_tilde >= 0", d_tilde);
    return d_tilde * d_tilde * std::exp(-d_tilde) * eta_deph_square(finesse);
}

double eta_single_pass(const CombParams& comb) {
    comb.validate();
    const double dt = comb.average_depth();
    return dt * dt * std::exp(-dt) * eta_deph(comb);
}

double optimal_finesse(double peak_depth) {
    if (!(peak_depth > 0.0)) domain("depth", "depth > 0", peak_depth);
    return pi / std::atan(2.0 * pi / peak_depth);
}

double impedance_match_reflectivity(double d_tilde) {
    if (!(d_tilde >= 0.0)) domain("d_tilde", "d_tilde >= 0", d_tilde);
    return std::exp(-2.0 * d_tilde);
}

double impedance_match_depth(double reflectivity) {
    if (!(reflectivity > 0.0 && reflectivity <= 1.0))
        domain("reflectivity", "0 < reflectivity <= 1", reflectivity);
    return -0.5 * std::log(reflectivity);
}

double eta_cavity_finite_depth(double d_tilde) {
    if (!(d_tilde >= 0.0)) domain("d_tilde", "d_tilde >= 0", d_tilde);
    if (d_tilde < 1e-4) {
        // series of x^2/sinh^2 x; avoids 0/0
        const double x2 = d_tilde * d_tilde;
        return 1.0 - x2 / 3.0 + x2 * x2 / 15.0;
    }
    const double r = d_tilde / std::sinh(d_tilde);
    return r * r;
}

Flagged<double> eta_cavity_loss(double d_tilde, double epsilon) {
    if (!(d_tilde >= 0.0)) domain("d_tilde", "d_tilde >= 0", d_tilde);
    if (!(epsilon >= 0.0 && epsilon < 1.0)) domain("epsilon", "0 <= epsilon < 1", epsilon);
    Flagged<double> out;
    if (epsilon == 0.0) {
        out.value = 1.0;
        return out;
    }
    if (d_tilde == 0.0) domain("d_tilde", "d_tilde > 0 when epsilon > 0", d_tilde);
    const double base = 1.0 + epsilon / (4.0 * d_tilde);
    out.value = 1.0 / (base * base * base * base);
    if (epsilon > 0.25 * d_tilde) out.validity.flag("loss formula assumes epsilon << d_tilde");
    if (d_tilde > 0.5) out.validity.flag("loss formula assumes d_tilde << 1");
    return out;
}

Flagged<double> eta_cavity(double d_tilde, double finesse, double epsilon) {
    auto loss = eta_cavity_loss(d_tilde, epsilon);
    loss.value *= eta_deph_square(finesse) * eta_cavity_finite_depth(d_tilde);
    return loss;
}

double eta_cavity_general(double d_tilde, double dephasing, double r1, double r2, double epsilon) {
    if (!(d_tilde >= 0.0)) domain("d_tilde", "d_tilde >= 0", d_tilde);
    if (!(r1 > 0.0 && r1 <= 1.0)) domain("r1", "0 < r1 <= 1", r1);
    if (!(r2 > 0.0 && r2 <= 1.0)) domain("r2", "0 < r2 <= 1", r2);
    if (!(epsilon >= 0.0 && epsilon < 1.0)) domain("epsilon", "0 <= epsilon < 1", epsilon);
    const double a = std::sqrt(r2 * (1.0 - epsilon));
    const double g = std::exp(-d_tilde);
    const double denom = 1.0 - std::sqrt(r1) * a * g;
    const double amp = 2.0 * a * (1.0 - r1) * g / (denom * denom);
    return amp * amp * d_tilde * d_tilde * dephasing;
}

double eta_spin_dephasing(const SpinParams& spin, double t_sw) {
    spin.validate();
    if (!(t_sw >= 0.0)) domain("t_sw", "t_sw >= 0", t_sw);
    const double x = spin.gamma_hz * t_sw;
    return std::exp(-x * x * pi * pi / (2.0 * ln2));
}

EfficiencyBudget total_budget(double eta_2l, double eta_t, double eta_sw, double overlap) {
    require_unit_interval("eta_2l", eta_2l);
    require_unit_interval("eta_t", eta_t);
    require_unit_interval("eta_sw", eta_sw);
    require_unit_interval("overlap", overlap);
    EfficiencyBudget b;
    b.eta_2l = eta_2l;
    b.eta_t = eta_t;
    b.eta_sw = eta_sw;
    b.overlap = overlap;
    b.eta_total = eta_2l * eta_t * eta_t * eta_sw * overlap;
    return b;
}

double overlap_for_total(double eta_total, double eta_2l, double eta_t, double eta_sw) {
    require_unit_interval("eta_total", eta_total);
    const double rest = eta_2l * eta_t * eta_t * eta_sw;
    if (!(rest > 0.0)) domain("eta_2l*eta_t^2*eta_sw", "product > 0", rest);
    return eta_total / rest;
}

} // namespace afc

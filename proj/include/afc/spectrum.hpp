#pragma once

#include "afc/analytic.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace afc {

using cplx = std::complex<double>;

// Uniform frequency axis symmetric about zero: f_i = (i - n/2) * resolution.
class FrequencyGrid {
public:
    FrequencyGrid() = default;
    // n must be a power of two, at least 1024.
    FrequencyGrid(std::size_t n_points, double span_hz);

    std::size_t size() const { return n_; }
    double span() const { return span_; }
    double resolution() const { return span_ / static_cast<double>(n_); }
    double frequency(std::size_t i) const {
        return (static_cast<double>(i) - static_cast<double>(n_ / 2)) * resolution();
    }
    std::size_t center_index() const { return n_ / 2; }
    // Nearest bin to f, clamped to the grid.
    std::size_t index_of(double f) const;

    bool operator==(const FrequencyGrid&) const = default;

private:
    std::size_t n_ = 0;
    double span_ = 0.0;
};

// Fraction of the span kept absorption-free at each edge.
inline constexpr double kGuardFraction = 0.1;

struct AbsorptionProfile {
    FrequencyGrid grid;
    std::vector<double> depth; // optical depth per bin, >= 0

    // Mean depth over [lo, hi] computed from the bin areas it covers.
    double mean_depth(double lo_hz, double hi_hz) const;
    // True when depth vanishes over the outer guard band on both sides.
    bool has_guard_band() const;
};

// Complex single-pass amplitude transfer H(f), ascending-frequency order.
struct ComplexResponse {
    FrequencyGrid grid;
    std::vector<cplx> h;
};

// Throws DomainError unless the comb fits inside the guard band and each tooth
// spans at least 8 bins.
void validate_comb_on_grid(const CombParams& comb, const FrequencyGrid& grid);

AbsorptionProfile square_comb(const CombParams& comb, const FrequencyGrid& grid);
AbsorptionProfile gaussian_comb(const CombParams& comb, const FrequencyGrid& grid);
// Dispatches on comb.shape.
AbsorptionProfile make_comb(const CombParams& comb, const FrequencyGrid& grid);

// Background depth over |f| <= band/2 with an empty square hole of `width` at the center.
// band = 0 selects the widest band that respects the guard (0.8 span).
AbsorptionProfile transparency_window(double background_depth, double width_hz,
                                      const FrequencyGrid& grid, double band_hz = 0.0);

// A profile of zero depth (empty medium).
AbsorptionProfile empty_profile(const FrequencyGrid& grid);

// H = exp(-d/2 + i phi) with phi the discrete Hilbert transform of d/2, built by
// zeroing the negative-time half of log H (analytic-signal construction).
// A pure delay tau gives phi = +2 pi f tau, so dphi/domega is the group delay.
ComplexResponse kramers_kronig_response(const AbsorptionProfile& profile);

// Element-wise product, e.g. H*H for a double pass.
ComplexResponse compose(const ComplexResponse& a, const ComplexResponse& b);

// Energy fraction of the impulse response h(t) = IDFT(H) in the second half of the
// periodic record (t < 0). Late tails of long causal responses (sharp tooth edges)
// wrap into this half too, so it bounds acausality only for smooth profiles.
double acausal_energy_fraction(const ComplexResponse& response);

struct GroupDelay {
    std::vector<double> delay_s; // dphi/domega per bin (edges one-sided)
    double center_s = 0.0;       // at the grid center
    bool unwrap_ok = true;       // false if a phase step between bins exceeded pi/2
};

GroupDelay group_delay(const ComplexResponse& response);

} // namespace afc

#include "afc/spectrum.hpp"

#include "afc/fft.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

namespace afc {
namespace {

constexpr double pi = std::numbers::pi;

void check_comb_fits(const CombParams& comb, const FrequencyGrid& grid, double tooth_scale) {
    comb.validate();
    if (comb.bandwidth_hz > (1.0 - 2.0 * kGuardFraction) * grid.span()) {
        std::ostringstream os;
        os << "bandwidth: comb bandwidth " << comb.bandwidth_hz << " Hz exceeds 0.8 x grid span "
           << grid.span() << " Hz";
        throw DomainError("bandwidth", os.str());
    }
    const double needed = tooth_scale / 8.0;
    if (grid.resolution() > needed) {
        std::ostringstream os;
        os << "grid resolution " << grid.resolution() << " Hz too coarse for teeth of "
           << tooth_scale << " Hz (need <= " << needed << " Hz, 8 samples per tooth)";
        throw DomainError("grid_points", os.str());
    }
}

// Tooth centers, symmetric about 0 and rounded to the nearest bin.
std::vector<double> tooth_centers(const CombParams& comb) {
    const std::size_t n = comb.tooth_count();
    std::vector<double> centers(n);
    // Not snapped to bins: area-weighted edges keep the period exact.
    for (std::size_t m = 0; m < n; ++m)
        centers[m] = (static_cast<double>(m) - 0.5 * static_cast<double>(n - 1)) * comb.spacing_hz;
    return centers;
}

// Adds `height` times the fraction of each bin covered by [lo, hi].
void add_block(std::vector<double>& depth, const FrequencyGrid& grid, double lo, double hi,
               double height) {
    const double res = grid.resolution();
    const std::size_t first = grid.index_of(lo);
    const std::size_t last = grid.index_of(hi);
    for (std::size_t i = first == 0 ? 0 : first - 1; i <= std::min(last + 1, grid.size() - 1); ++i) {
        const double f = grid.frequency(i);
        const double overlap = std::min(hi, f + 0.5 * res) - std::max(lo, f - 0.5 * res);
        if (overlap > 0.0) depth[i] += height * overlap / res;
    }
}

} // namespace

void validate_comb_on_grid(const CombParams& comb, const FrequencyGrid& grid) {
    check_comb_fits(comb, grid, comb.tooth_width_hz());
}

FrequencyGrid::FrequencyGrid(std::size_t n_points, double span_hz) : n_(n_points), span_(span_hz) {
    if (n_points < 1024 || !std::has_single_bit(n_points)) {
        std::ostringstream os;
        os << "grid_points: power of two >= 1024 required, got " << n_points;
        throw DomainError("grid_points", os.str());
    }
    if (!(span_hz > 0.0)) {
        std::ostringstream os;
        os << "span: span > 0 required, got " << span_hz;
        throw DomainError("span", os.str());
    }
}

std::size_t FrequencyGrid::index_of(double f) const {
    const double x = std::round(f / resolution()) + static_cast<double>(n_ / 2);
    if (x <= 0.0) return 0;
    if (x >= static_cast<double>(n_ - 1)) return n_ - 1;
    return static_cast<std::size_t>(x);
}

double AbsorptionProfile::mean_depth(double lo_hz, double hi_hz) const {
    const double res = grid.resolution();
    double area = 0.0;
    for (std::size_t i = 0; i < depth.size(); ++i) {
        const double f = grid.frequency(i);
        const double overlap = std::min(hi_hz, f + 0.5 * res) - std::max(lo_hz, f - 0.5 * res);
        if (overlap > 0.0) area += depth[i] * overlap;
    }
    return area / (hi_hz - lo_hz);
}

bool AbsorptionProfile::has_guard_band() const {
    const double edge = (0.5 - kGuardFraction) * grid.span();
    for (std::size_t i = 0; i < depth.size(); ++i)
        if (std::abs(grid.frequency(i)) > edge && depth[i] != 0.0) return false;
    return true;
}

AbsorptionProfile square_comb(const CombParams& comb, const FrequencyGrid& grid) {
    check_comb_fits(comb, grid, comb.tooth_width_hz());
    AbsorptionProfile p{grid, std::vector<double>(grid.size(), 0.0)};
    const double half_band = 0.5 * static_cast<double>(comb.tooth_count()) * comb.spacing_hz;
    if (comb.background_depth > 0.0) add_block(p.depth, grid, -half_band, half_band, comb.background_depth);
    const double half_tooth = 0.5 * comb.tooth_width_hz();
    const double height = comb.peak_depth - comb.background_depth;
    for (double c : tooth_centers(comb)) add_block(p.depth, grid, c - half_tooth, c + half_tooth, height);
    return p;
}

AbsorptionProfile gaussian_comb(const CombParams& comb, const FrequencyGrid& grid) {
    check_comb_fits(comb, grid, comb.tooth_width_hz());
    AbsorptionProfile p{grid, std::vector<double>(grid.size(), 0.0)};
    const double half_band = 0.5 * static_cast<double>(comb.tooth_count()) * comb.spacing_hz;
    if (comb.background_depth > 0.0) add_block(p.depth, grid, -half_band, half_band, comb.background_depth);
    const double sigma = comb.tooth_width_hz() / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
    const double reach = 8.0 * sigma;
    const double height = comb.peak_depth - comb.background_depth;
    // Tails beyond the guard edge are dropped to keep finite support.
    const double edge = (0.5 - kGuardFraction) * grid.span();
    for (double c : tooth_centers(comb)) {
        const std::size_t first = grid.index_of(c - reach), last = grid.index_of(c + reach);
        for (std::size_t i = first; i <= last; ++i) {
            const double f = grid.frequency(i);
            if (std::abs(f) > edge) continue;
            const double x = (f - c) / sigma;
            p.depth[i] += height * std::exp(-0.5 * x * x);
        }
    }
    return p;
}

AbsorptionProfile make_comb(const CombParams& comb, const FrequencyGrid& grid) {
    return comb.shape == ToothShape::Square ? square_comb(comb, grid) : gaussian_comb(comb, grid);
}

AbsorptionProfile transparency_window(double background_depth, double width_hz,
                                      const FrequencyGrid& grid, double band_hz) {
    const double max_band = (1.0 - 2.0 * kGuardFraction) * grid.span();
    if (band_hz == 0.0) band_hz = max_band;
    if (!(background_depth >= 0.0)) {
        std::ostringstream os;
        os << "background: background >= 0 required, got " << background_depth;
        throw DomainError("background", os.str());
    }
    if (!(width_hz >= 0.0 && width_hz < max_band)) {
        std::ostringstream os;
        os << "width: 0 <= width < 0.8 x span required, got " << width_hz;
        throw DomainError("width", os.str());
    }
    if (!(band_hz > width_hz && band_hz <= max_band * (1.0 + 1e-12))) {
        std::ostringstream os;
        os << "band: width < band <= 0.8 x span required, got " << band_hz;
        throw DomainError("band", os.str());
    }
    AbsorptionProfile p{grid, std::vector<double>(grid.size(), 0.0)};
    add_block(p.depth, grid, -0.5 * band_hz, 0.5 * band_hz, background_depth);
    if (width_hz > 0.0) add_block(p.depth, grid, -0.5 * width_hz, 0.5 * width_hz, -background_depth);
    for (double& d : p.depth) d = std::max(d, 0.0); // rounding residue at the hole edges
    return p;
}

AbsorptionProfile empty_profile(const FrequencyGrid& grid) {
    return AbsorptionProfile{grid, std::vector<double>(grid.size(), 0.0)};
}

ComplexResponse kramers_kronig_response(const AbsorptionProfile& profile) {
    if (!profile.has_guard_band())
        throw DomainError("profile", "absorption profile must vanish over the 10% guard band at both grid edges");
    const std::size_t n = profile.grid.size();
    std::vector<cplx> log_h(n);
    for (std::size_t i = 0; i < n; ++i) log_h[i] = -0.5 * profile.depth[i];

    // Time-domain coefficients c_j with G(f_k) = sum_j c_j exp(+2 pi i jk/n).
    auto shifted = fft::ifftshift<cplx>(log_h);
    auto coeff = fft::forward(shifted);
    const double inv_n = 1.0 / static_cast<double>(n);
    coeff[0] *= inv_n;
    for (std::size_t j = 1; j < n / 2; ++j) coeff[j] *= 2.0 * inv_n;
    coeff[n / 2] *= inv_n;
    for (std::size_t j = n / 2 + 1; j < n; ++j) coeff[j] = 0.0;

    auto analytic = fft::backward(coeff);
    auto natural = fft::fftshift<cplx>(analytic);
    ComplexResponse r{profile.grid, std::vector<cplx>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        // The real part is -d/2 up to rounding; pin it exactly so |H| = exp(-d/2).
        r.h[i] = std::exp(cplx(-0.5 * profile.depth[i], natural[i].imag()));
    }
    return r;
}

ComplexResponse compose(const ComplexResponse& a, const ComplexResponse& b) {
    if (!(a.grid == b.grid)) throw DomainError("grid", "responses live on different grids");
    ComplexResponse out{a.grid, std::vector<cplx>(a.h.size())};
    for (std::size_t i = 0; i < a.h.size(); ++i) out.h[i] = a.h[i] * b.h[i];
    return out;
}

double acausal_energy_fraction(const ComplexResponse& response) {
    const std::size_t n = response.h.size();
    auto impulse = fft::forward(fft::ifftshift<cplx>(response.h));
    double total = 0.0, before = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double e = std::norm(impulse[j]);
        total += e;
        if (j > n / 2) before += e;
    }
    return total > 0.0 ? before / total : 0.0;
}

GroupDelay group_delay(const ComplexResponse& response) {
    const std::size_t n = response.h.size();
    GroupDelay g;
    g.delay_s.assign(n, 0.0);
    if (n < 3) return g;
    // Unwrap by accumulating principal-value phase increments between bins.
    std::vector<double> phase(n);
    phase[0] = std::arg(response.h[0]);
    for (std::size_t i = 1; i < n; ++i) {
        const double step = std::arg(response.h[i] * std::conj(response.h[i - 1]));
        if (std::abs(step) > 0.5 * pi) g.unwrap_ok = false;
        phase[i] = phase[i - 1] + step;
    }
    const double domega = 2.0 * pi * response.grid.resolution();
    g.delay_s[0] = (phase[1] - phase[0]) / domega;
    g.delay_s[n - 1] = (phase[n - 1] - phase[n - 2]) / domega;
    for (std::size_t i = 1; i + 1 < n; ++i) g.delay_s[i] = (phase[i + 1] - phase[i - 1]) / (2.0 * domega);
    g.center_s = g.delay_s[response.grid.center_index()];
    return g;
}

} // namespace afc

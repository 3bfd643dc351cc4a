#include "afc/runner.hpp"

#include "afc/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

namespace afc {
namespace {

constexpr std::size_t kMaxCsvRows = 20000;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Builder {
    RunOutput out;
    bool artifacts = true;

    void put(std::string key, double v) { out.results.push_back({std::move(key), v}); }
    void merge(const Validity& v) {
        if (!v.valid) out.validity.flag(v.note);
    }
    void file(std::string name, const csv::Table& t) {
        if (artifacts) out.files.push_back({std::move(name), t.str()});
    }
};

CombParams resolved_comb(const RunConfig& c) {
    CombParams comb = c.comb;
    if (c.finesse_optimal) comb.finesse = optimal_finesse(comb.peak_depth);
    return comb;
}

// Indices [first, last] of the bins in [lo, hi], thinned to at most kMaxCsvRows.
template <typename Fn>
void for_bins(const FrequencyGrid& g, double lo, double hi, Fn&& fn) {
    const std::size_t first = g.index_of(lo);
    const std::size_t last = g.index_of(hi);
    const std::size_t count = last - first + 1;
    const std::size_t stride = (count + kMaxCsvRows - 1) / kMaxCsvRows;
    for (std::size_t i = first; i <= last; i += stride) fn(i);
}

csv::Table waveform_table(const PulseWaveform& w, double t0, double t1) {
    csv::Table t({"time_s", "re", "im", "abs2"});
    const double dt = w.grid.dt();
    const auto first = static_cast<std::size_t>(std::max(0.0, std::floor(t0 / dt)));
    const auto last = std::min(w.grid.size() - 1, static_cast<std::size_t>(std::ceil(t1 / dt)));
    const std::size_t stride = (last - first + kMaxCsvRows) / kMaxCsvRows;
    for (std::size_t j = first; j <= last; j += stride)
        t.add_row({w.grid.time(j), w.field[j].real(), w.field[j].imag(), std::norm(w.field[j])});
    return t;
}

csv::Table response_table(const ComplexResponse& r, double lo, double hi) {
    csv::Table t({"freq_hz", "re", "im", "abs2"});
    for_bins(r.grid, lo, hi, [&](std::size_t i) {
        t.add_row({r.grid.frequency(i), r.h[i].real(), r.h[i].imag(), std::norm(r.h[i])});
    });
    return t;
}

void run_comb(const RunConfig& c, Builder& b) {
    const auto grid = c.grid.frequency_grid();
    if (c.medium == MediumKind::Comb) {
        const CombParams comb = resolved_comb(c);
        const auto profile = make_comb(comb, grid);
        const double half = 0.5 * comb.bandwidth_hz;
        b.put("teeth", static_cast<double>(comb.tooth_count()));
        b.put("finesse", comb.finesse);
        b.put("tooth_width_hz", comb.tooth_width_hz());
        b.put("delay_s", comb.echo_delay_s());
        b.put("average_depth", comb.average_depth());
        b.put("mean_depth_profile", profile.mean_depth(-half, half));
        b.put("eta_deph", eta_deph(comb));
        b.put("eta_single_pass", eta_single_pass(comb));
        b.put("optimal_finesse", optimal_finesse(comb.peak_depth));
        if (b.artifacts) {
            csv::Table t({"freq_hz", "depth"});
            for_bins(grid, -0.6 * comb.bandwidth_hz, 0.6 * comb.bandwidth_hz,
                     [&](std::size_t i) { t.add_row({grid.frequency(i), profile.depth[i]}); });
            b.file("comb_profile.csv", t);
        }
        return;
    }
    const auto profile = c.medium == MediumKind::Window
                             ? transparency_window(c.window.background, c.window.width_hz, grid, c.window.band_hz)
                             : empty_profile(grid);
    const auto h = kramers_kronig_response(profile);
    const auto gd = group_delay(h);
    b.put("group_delay_center_s", gd.center_s);
    b.put("phase_unwrap_ok", gd.unwrap_ok ? 1.0 : 0.0);
    b.put("acausal_energy_fraction", acausal_energy_fraction(h));
    if (!gd.unwrap_ok) b.out.validity.flag("phase unwrap failed");
    if (b.artifacts) {
        csv::Table t({"freq_hz", "depth", "phase_rad", "group_delay_s"});
        const double half = 0.5 * grid.span() * (1.0 - 2.0 * kGuardFraction);
        for_bins(grid, -half, half, [&](std::size_t i) {
            t.add_row({grid.frequency(i), profile.depth[i], std::arg(h.h[i]), gd.delay_s[i]});
        });
        b.file("medium_profile.csv", t);
    }
}

void run_echo(const RunConfig& c, Builder& b, bool with_cavity) {
    const CombParams comb = resolved_comb(c);
    std::optional<CavityParams> cav;
    if (with_cavity) cav = c.cavity.value_or(CavityParams{});
    const auto rep = run_two_level(comb, c.pulse, cav, c.grid);
    const double dt = rep.input.grid.dt();
    b.put("efficiency", rep.efficiency);
    b.put(with_cavity ? "analytic_ceiling" : "analytic", rep.analytic);
    if (with_cavity) b.put("analytic_general", rep.analytic_general);
    b.put("relative_deviation", rep.relative_deviation);
    b.put("finesse", comb.finesse);
    b.put("average_depth", rep.average_depth);
    b.put("eta_deph", eta_deph(comb));
    b.put("delay_s", rep.delay_s);
    b.put("echo_peak_s", rep.echo_peak_s);
    b.put("echo_peak_error_steps", (rep.echo_peak_s - rep.delay_s) / dt);
    b.put("time_step_s", dt);
    if (with_cavity) {
        b.put("reflection_center_abs2", rep.reflection_center_abs2);
        b.put("impedance_match_r1", impedance_match_reflectivity(rep.average_depth));
        b.put("empty_finesse", cav->empty_finesse());
        b.put("empty_linewidth_hz", cav->empty_linewidth_hz());
    }
    b.merge(rep.validity);
    if (!b.artifacts) return;
    const double t0 = c.pulse.center_s - 4.0 * c.pulse.fwhm_s;
    const double t1 = rep.gate.stop() + c.pulse.fwhm_s;
    b.file("input_waveform.csv", waveform_table(rep.input, t0, t1));
    b.file("output_waveform.csv", waveform_table(rep.output, t0, t1));
    if (with_cavity) {
        const auto medium = kramers_kronig_response(make_comb(comb, c.grid.frequency_grid()));
        const auto r = reflection_response(*cav, medium);
        b.file("reflection.csv", response_table(r, -0.6 * comb.bandwidth_hz, 0.6 * comb.bandwidth_hz));
    }
}

void run_linewidth(const RunConfig& c, Builder& b) {
    const auto grid = c.grid.frequency_grid();
    const CavityParams cav = c.cavity.value_or(CavityParams{});
    const auto profile = c.medium == MediumKind::Window
                             ? transparency_window(c.window.background, c.window.width_hz, grid, c.window.band_hz)
                             : empty_profile(grid);
    const auto medium = kramers_kronig_response(profile);
    const auto empty = kramers_kronig_response(empty_profile(grid));
    const auto lw = cavity_linewidth(cav, medium, c.probe_span_hz);
    const auto lw0 = cavity_linewidth(cav, empty, c.probe_span_hz);
    const auto gd = group_delay(medium);
    const double tau = gd.delay_s[grid.index_of(lw.resonance_hz)];
    b.put("linewidth_hz", lw.fwhm_hz);
    b.put("resonance_hz", lw.resonance_hz);
    b.put("contrast", lw.contrast);
    b.put("empty_linewidth_hz", lw0.fwhm_hz);
    b.put("empty_linewidth_airy_hz", cav.empty_linewidth_hz());
    b.put("empty_finesse", cav.empty_finesse());
    b.put("narrowing", lw0.fwhm_hz / lw.fwhm_hz);
    b.put("group_delay_s", tau);
    // Round-trip time grows from 1/fsr by the double-pass group delay.
    b.put("predicted_linewidth_hz", lw0.fwhm_hz / (1.0 + 2.0 * tau * cav.fsr_hz));
    if (!gd.unwrap_ok) b.out.validity.flag("phase unwrap failed");
    if (b.artifacts) {
        const auto r = reflection_response(cav, medium);
        b.file("reflection.csv",
               response_table(r, cav.detuning_hz - 0.5 * c.probe_span_hz, cav.detuning_hz + 0.5 * c.probe_span_hz));
    }
}

void run_bloch(const RunConfig& c, Builder& b) {
    const auto pulse = ControlPulse::sech(c.control.pulse);
    const CombParams comb = resolved_comb(c);
    const double eta_t = control_transfer_efficiency(c.control, c.pulse, &comb, &c.grid);
    const auto s0 = integrate_bloch(0.0, pulse, c.control.tolerance);
    b.put("eta_t", eta_t);
    b.put("transfer_resonant", s0.transfer_probability());
    b.put("norm_error_resonant", std::abs(s0.norm() - 1.0));
    b.put("input_spectral_fwhm_hz", gaussian_spectral_fwhm(c.pulse.fwhm_s));
    if (!b.artifacts) return;
    csv::Table t({"detuning_hz", "transfer_prob"});
    const double span = std::max(2.0 * c.control.pulse.chirp_hz, 2.0e6);
    constexpr int n = 201;
    for (int i = 0; i < n; ++i) {
        const double d = span * (-0.5 + static_cast<double>(i) / (n - 1));
        t.add_row({d, integrate_bloch(d, pulse, c.control.tolerance).transfer_probability()});
    }
    b.file("bloch_transfer.csv", t);
}

void run_spinwave(const RunConfig& c, Builder& b) {
    SpinWaveInputs in;
    in.comb = resolved_comb(c);
    in.timeline = {c.pulse.center_s, c.spinwave.control1_s, c.spinwave.control2_s, in.comb.echo_delay_s()};
    in.input = c.pulse;
    in.control = c.control;
    in.spin = c.spin;
    in.cavity = c.cavity;
    in.measured_eta_2l = c.spinwave.eta_2l;
    in.eta_t_override = c.spinwave.eta_t;
    in.overlap = c.spinwave.overlap;
    in.output_stretch = c.spinwave.stretch;
    in.grid = c.grid;
    const auto rep = run_spin_wave(in);
    const auto& bud = rep.budget;
    b.put("eta_2l", bud.eta_2l);
    b.put("eta_t", bud.eta_t);
    b.put("eta_sw", bud.eta_sw);
    b.put("overlap", bud.overlap);
    b.put("eta_total", bud.eta_total);
    b.put("eta_total_no_spin_dephasing", bud.eta_sw > 0.0 ? bud.eta_total / bud.eta_sw : kNaN);
    b.put("eta_t_bloch", rep.eta_t_bloch);
    b.put("implied_overlap", rep.implied_overlap);
    b.put("eta_2l_simulated", rep.eta_2l_simulated ? 1.0 : 0.0);
    b.put("storage_time_s", rep.storage_time_s);
    b.put("output_time_s", rep.output_time_s);
    b.merge(bud.validity);
    if (!b.artifacts) return;
    csv::Table t({"time_s", "input", "control", "output"});
    const auto& tr = rep.trace;
    for (std::size_t i = 0; i < tr.time_s.size(); ++i) t.add_row({tr.time_s[i], tr.input[i], tr.control[i], tr.output[i]});
    b.file("spinwave_trace.csv", t);
}

void run_design(const RunConfig& c, Builder& b) {
    const auto& d = c.design;
    const auto res = optimize_cavity_design(d.depth, d.epsilon, d.max_finesse, d.mode, d.steps);
    b.put("best_finesse", res.best.finesse);
    b.put("best_eta", res.best.eta);
    b.put("d_tilde", res.best.d_tilde);
    if (d.mode == DesignMode::Cavity) b.put("r1", res.best.r1);
    b.put("eta_deph", res.best.eta_deph);
    b.put("depth_factor", res.best.depth_factor);
    b.put("loss_factor", res.best.loss_factor);
    b.put("boundary", res.boundary ? 1.0 : 0.0);
    if (d.mode == DesignMode::SinglePass) b.put("optimal_finesse_closed_form", optimal_finesse(d.depth));
    if (res.boundary) b.out.validity.flag("optimum at the largest scanned finesse");
    if (!res.best.valid) b.out.validity.flag("loss factor outside eps << d~ << 1 at the optimum");
    if (!b.artifacts) return;
    csv::Table t({"finesse", "d_tilde", "r1", "eta_deph", "depth_factor", "loss_factor", "eta", "valid"});
    for (const auto& r : res.table)
        t.add_row({r.finesse, r.d_tilde, r.r1, r.eta_deph, r.depth_factor, r.loss_factor, r.eta, r.valid ? 1.0 : 0.0});
    b.file("design_scan.csv", t);
}

void run_single(const RunConfig& c, Builder& b) {
    switch (c.kind) {
    case RunKind::Comb: run_comb(c, b); break;
    case RunKind::Echo: run_echo(c, b, false); break;
    case RunKind::Cavity:
        if (c.medium == MediumKind::Comb) run_echo(c, b, true);
        else run_linewidth(c, b);
        break;
    case RunKind::Bloch: run_bloch(c, b); break;
    case RunKind::SpinWave: run_spinwave(c, b); break;
    case RunKind::Design: run_design(c, b); break;
    case RunKind::Sweep: throw ConfigError("run.kind", 0, "run.kind: nested sweep");
    }
}

void run_sweep(const RunConfig& c, Builder& b) {
    const auto& sw = c.sweep;
    const std::size_t n2 = sw.axis2 ? sw.axis2->values.size() : 1;
    std::vector<std::string> header{sw.axis1.parameter};
    if (sw.axis2) header.push_back(sw.axis2->parameter);
    std::vector<std::string> keys;
    std::vector<std::vector<double>> rows;
    std::size_t flagged = 0, failed = 0;
    for (std::size_t i = 0; i < sw.axis1.values.size(); ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            RunConfig point = c;
            point.kind = sw.scenario;
            set_config_value(point, sw.axis1.parameter, sw.axis1.values[i]);
            if (sw.axis2) set_config_value(point, sw.axis2->parameter, sw.axis2->values[j]);
            Builder sub;
            sub.artifacts = false;
            std::vector<double> row{sw.axis1.values[i]};
            if (sw.axis2) row.push_back(sw.axis2->values[j]);
            try {
                run_single(point, sub);
            } catch (const NumericalError& e) {
                sub.out.validity.flag(e.what());
                ++failed;
            }
            if (keys.empty() && !sub.out.results.empty())
                for (const auto& r : sub.out.results) keys.push_back(r.key);
            if (!sub.out.validity.valid) ++flagged;
            // Keyed lookup keeps columns aligned when a failed point has no results.
            for (const auto& k : keys) row.push_back(sub.out.value(k));
            row.push_back(sub.out.validity.valid ? 1.0 : 0.0);
            rows.push_back(std::move(row));
        }
    }
    // Points that failed before the first success carry no result columns yet.
    const std::size_t width = header.size() + keys.size() + 1;
    for (auto& r : rows) {
        if (r.size() < width) {
            const double valid = r.back();
            r.pop_back();
            r.resize(width - 1, kNaN);
            r.push_back(valid);
        }
    }
    for (const auto& k : keys) header.push_back(k);
    header.push_back("valid");
    csv::Table t(header);
    for (const auto& r : rows) t.add_row(r);
    b.put("rows", static_cast<double>(rows.size()));
    b.put("flagged_rows", static_cast<double>(flagged));
    b.put("failed_rows", static_cast<double>(failed));
    if (failed) b.out.validity.flag(std::to_string(failed) + " sweep point(s) failed numerically");
    b.file("sweep.csv", t);
}

std::string valid_note(const Validity& v) { return v.valid ? "none" : v.note; }

} // namespace

double RunOutput::value(const std::string& key) const {
    for (const auto& r : results)
        if (r.key == key) return r.value;
    return kNaN;
}

RunOutput execute(const RunConfig& cfg) {
    Builder b;
    if (cfg.kind == RunKind::Sweep) run_sweep(cfg, b);
    else run_single(cfg, b);
    return std::move(b.out);
}

std::string report_text(const RunConfig& cfg, const RunOutput& out) {
    std::ostringstream os;
    os << "# afcsim report: configuration as run, then results\n";
    os << format_config(cfg);
    os << "\n[results]\n";
    for (const auto& r : out.results) os << r.key << " = " << csv::number(r.value) << '\n';
    os << "flags = " << valid_note(out.validity) << '\n';
    return os.str();
}

void write_outputs(const std::filesystem::path& dir, const RunConfig& cfg, const RunOutput& out) {
    namespace fs = std::filesystem;
    std::vector<Artifact> files = out.files;
    files.push_back({"report.txt", report_text(cfg, out)});

    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

    std::vector<fs::path> written;
    auto rollback = [&] {
        std::error_code ignore;
        for (const auto& p : written) fs::remove(p, ignore);
    };
    for (const auto& f : files) {
        const fs::path target = dir / f.filename;
        const fs::path tmp = dir / (f.filename + ".tmp");
        {
            std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
            if (o) o << f.content;
            if (!o || !o.flush()) {
                std::error_code ignore;
                fs::remove(tmp, ignore);
                rollback();
                throw IoError("cannot write '" + target.string() + "'");
            }
        }
        fs::rename(tmp, target, ec);
        if (ec) {
            std::error_code ignore;
            fs::remove(tmp, ignore);
            rollback();
            throw IoError("cannot rename into '" + target.string() + "': " + ec.message());
        }
        written.push_back(target);
    }
}

} // namespace afc

#include "afc/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace afc {
namespace {

namespace pt = boost::property_tree;

// Thrown by value setters; the caller attaches key and line.
struct BadValue {
    std::string reason;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& raw) {
    std::string s = trim(raw);
    if (!s.empty() && s.front() == '+') s.erase(0, 1);
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw BadValue{"number expected, got '" + trim(raw) + "'"};
    return x;
}

std::size_t to_count(const std::string& raw) {
    const std::string s = trim(raw);
    unsigned long long x = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw BadValue{"non-negative integer expected, got '" + s + "'"};
    return static_cast<std::size_t>(x);
}

std::vector<double> to_list(const std::string& raw) {
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (trim(item).empty()) continue;
        out.push_back(to_double(item));
    }
    return out;
}

std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += fmt(v[i]);
    }
    return s;
}

template <typename E>
E to_enum(const std::string& raw, std::initializer_list<std::pair<const char*, E>> names) {
    const std::string s = trim(raw);
    std::string allowed;
    for (const auto& [n, e] : names) {
        if (s == n) return e;
        allowed += allowed.empty() ? n : std::string(" | ") + n;
    }
    throw BadValue{"one of " + allowed + " expected, got '" + s + "'"};
}

RunKind to_kind(const std::string& s) {
    return to_enum<RunKind>(s, {{"comb", RunKind::Comb},
                                {"echo", RunKind::Echo},
                                {"cavity", RunKind::Cavity},
                                {"bloch", RunKind::Bloch},
                                {"spinwave", RunKind::SpinWave},
                                {"sweep", RunKind::Sweep},
                                {"design", RunKind::Design}});
}

const char* to_string(ToothShape s) { return s == ToothShape::Square ? "square" : "gaussian"; }
const char* to_string(DesignMode m) { return m == DesignMode::Cavity ? "cavity" : "single-pass"; }
const char* to_string(Weighting w) {
    switch (w) {
    case Weighting::Uniform: return "uniform";
    case Weighting::Comb: return "comb";
    default: return "spectrum";
    }
}

CavityParams& cavity_of(RunConfig& c) {
    if (!c.cavity) c.cavity.emplace();
    return *c.cavity;
}

// Pending range form of a sweep axis, resolved once the whole section is read.
struct Range {
    std::optional<double> start, stop;
    std::optional<std::size_t> steps;
};

struct Setter {
    bool numeric;
    std::function<void(RunConfig&, const std::string&)> apply;
};

using KeyTable = std::map<std::string, Setter>;

Setter num(std::function<void(RunConfig&, double)> f) {
    return {true, [f](RunConfig& c, const std::string& v) { f(c, to_double(v)); }};
}
Setter count(std::function<void(RunConfig&, std::size_t)> f) {
    return {true, [f](RunConfig& c, const std::string& v) { f(c, to_count(v)); }};
}
Setter text(std::function<void(RunConfig&, const std::string&)> f) {
    return {false, [f](RunConfig& c, const std::string& v) { f(c, trim(v)); }};
}

const KeyTable& keys() {
    static const KeyTable table = [] {
        KeyTable t;
        t["run.kind"] = text([](RunConfig& c, const std::string& v) { c.kind = to_kind(v); });
        t["run.medium"] = text([](RunConfig& c, const std::string& v) {
            c.medium = to_enum<MediumKind>(v, {{"comb", MediumKind::Comb},
                                               {"window", MediumKind::Window},
                                               {"empty", MediumKind::Empty}});
        });
        t["run.name"] = text([](RunConfig& c, const std::string& v) {
            if (v.empty() || v.find_first_of("/\\") != std::string::npos)
                throw BadValue{"non-empty name without path separators expected"};
            c.name = v;
        });

        t["grid.points"] = count([](RunConfig& c, std::size_t n) { c.grid.points = n; });
        t["grid.span_hz"] = num([](RunConfig& c, double x) { c.grid.span_hz = x; });

        t["comb.depth"] = num([](RunConfig& c, double x) { c.comb.peak_depth = x; });
        t["comb.spacing_hz"] = num([](RunConfig& c, double x) { c.comb.spacing_hz = x; });
        t["comb.delay_s"] = num([](RunConfig& c, double x) {
            if (!(x > 0.0)) throw BadValue{"delay_s > 0 required, got " + fmt(x)};
            c.comb.spacing_hz = 1.0 / x;
        });
        t["comb.finesse"] = {true, [](RunConfig& c, const std::string& v) {
                                 if (trim(v) == "optimal") {
                                     c.finesse_optimal = true;
                                 } else {
                                     c.finesse_optimal = false;
                                     c.comb.finesse = to_double(v);
                                 }
                             }};
        t["comb.shape"] = text([](RunConfig& c, const std::string& v) {
            c.comb.shape = to_enum<ToothShape>(v, {{"square", ToothShape::Square}, {"gaussian", ToothShape::Gaussian}});
        });
        t["comb.bandwidth_hz"] = num([](RunConfig& c, double x) { c.comb.bandwidth_hz = x; });
        t["comb.background"] = num([](RunConfig& c, double x) { c.comb.background_depth = x; });

        t["window.background"] = num([](RunConfig& c, double x) { c.window.background = x; });
        t["window.width_hz"] = num([](RunConfig& c, double x) { c.window.width_hz = x; });
        t["window.band_hz"] = num([](RunConfig& c, double x) { c.window.band_hz = x; });

        t["pulse.fwhm_s"] = num([](RunConfig& c, double x) { c.pulse.fwhm_s = x; });
        t["pulse.center_s"] = num([](RunConfig& c, double x) { c.pulse.center_s = x; });
        t["pulse.detuning_hz"] = num([](RunConfig& c, double x) { c.pulse.detuning_hz = x; });

        t["cavity.r1"] = num([](RunConfig& c, double x) { cavity_of(c).r1 = x; });
        t["cavity.r2"] = num([](RunConfig& c, double x) { cavity_of(c).r2 = x; });
        t["cavity.epsilon"] = num([](RunConfig& c, double x) { cavity_of(c).epsilon = x; });
        t["cavity.fsr_hz"] = num([](RunConfig& c, double x) { cavity_of(c).fsr_hz = x; });
        t["cavity.detuning_hz"] = num([](RunConfig& c, double x) { cavity_of(c).detuning_hz = x; });
        t["cavity.probe_span_hz"] = num([](RunConfig& c, double x) {
            cavity_of(c);
            c.probe_span_hz = x;
        });

        t["control.rabi_max_hz"] = num([](RunConfig& c, double x) { c.control.pulse.rabi_max_hz = x; });
        t["control.duration_s"] = num([](RunConfig& c, double x) { c.control.pulse.duration_s = x; });
        t["control.chirp_hz"] = num([](RunConfig& c, double x) { c.control.pulse.chirp_hz = x; });
        t["control.truncation_s"] = num([](RunConfig& c, double x) { c.control.pulse.truncation_s = x; });
        t["control.weighting"] = text([](RunConfig& c, const std::string& v) {
            c.control.weighting = to_enum<Weighting>(
                v, {{"spectrum", Weighting::PulseSpectrum}, {"uniform", Weighting::Uniform}, {"comb", Weighting::Comb}});
        });
        t["control.bandwidth_hz"] = num([](RunConfig& c, double x) { c.control.uniform_bandwidth_hz = x; });
        t["control.samples"] = count([](RunConfig& c, std::size_t n) { c.control.samples = n; });
        t["control.rtol"] = num([](RunConfig& c, double x) { c.control.tolerance.relative = x; });
        t["control.atol"] = num([](RunConfig& c, double x) { c.control.tolerance.absolute = x; });

        t["spin.gamma_hz"] = num([](RunConfig& c, double x) { c.spin.gamma_hz = x; });

        t["spinwave.control1_s"] = num([](RunConfig& c, double x) { c.spinwave.control1_s = x; });
        t["spinwave.control2_s"] = num([](RunConfig& c, double x) { c.spinwave.control2_s = x; });
        t["spinwave.eta_2l"] = num([](RunConfig& c, double x) { c.spinwave.eta_2l = x; });
        t["spinwave.eta_t"] = num([](RunConfig& c, double x) { c.spinwave.eta_t = x; });
        t["spinwave.overlap"] = num([](RunConfig& c, double x) { c.spinwave.overlap = x; });
        t["spinwave.stretch"] = num([](RunConfig& c, double x) { c.spinwave.stretch = x; });

        t["design.depth"] = num([](RunConfig& c, double x) { c.design.depth = x; });
        t["design.epsilon"] = num([](RunConfig& c, double x) { c.design.epsilon = x; });
        t["design.max_finesse"] = num([](RunConfig& c, double x) { c.design.max_finesse = x; });
        t["design.mode"] = text([](RunConfig& c, const std::string& v) {
            c.design.mode = to_enum<DesignMode>(v, {{"cavity", DesignMode::Cavity}, {"single-pass", DesignMode::SinglePass}});
        });
        t["design.steps"] = count([](RunConfig& c, std::size_t n) { c.design.steps = n; });
        return t;
    }();
    return table;
}

const std::vector<std::string> kSweepKeys = {"scenario", "parameter", "values",     "start",  "stop",
                                             "steps",    "parameter2", "values2", "start2", "stop2", "steps2"};

// 1-based line of `key` inside `[section]` of an INI text, 0 if absent.
std::size_t line_of(const std::string& text, const std::string& section, const std::string& key) {
    std::istringstream in(text);
    std::string line, current;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
        const std::string s = trim(line);
        if (s.empty() || s[0] == ';' || s[0] == '#') continue;
        if (s.front() == '[' && s.back() == ']') {
            current = trim(s.substr(1, s.size() - 2));
            if (key.empty() && current == section) return n;
            continue;
        }
        const auto eq = s.find('=');
        if (current == section && eq != std::string::npos && trim(s.substr(0, eq)) == key) return n;
    }
    return 0;
}

std::size_t line_of_key(const std::string& text, const std::string& dotted) {
    const auto dot = dotted.find('.');
    if (dot == std::string::npos) return 0;
    const std::string section = dotted.substr(0, dot);
    std::size_t n = line_of(text, section, dotted.substr(dot + 1));
    if (n == 0 && dotted == "comb.spacing_hz") n = line_of(text, "comb", "delay_s");
    if (n == 0) n = line_of(text, section, "");
    return n;
}

std::string located(const std::string& origin, std::size_t line, const std::string& msg) {
    std::ostringstream os;
    os << origin;
    if (line) os << ':' << line;
    os << ": " << msg;
    return os.str();
}

void apply_sweep_section(RunConfig& cfg, const pt::ptree& section, const std::string& text,
                         const std::string& origin) {
    std::optional<std::string> values[2];
    Range ranges[2];
    std::string params[2];
    for (const auto& [key, node] : section) {
        const std::string v = node.data();
        const std::string dotted = "sweep." + key;
        auto fail = [&](const std::string& why) {
            throw ConfigError(dotted, line_of(text, "sweep", key), located(origin, line_of(text, "sweep", key), dotted + ": " + why));
        };
        if (std::find(kSweepKeys.begin(), kSweepKeys.end(), key) == kSweepKeys.end()) fail("unknown key");
        const int axis = key.back() == '2' ? 1 : 0;
        const std::string base = axis ? key.substr(0, key.size() - 1) : key;
        try {
            if (key == "scenario") cfg.sweep.scenario = to_kind(v);
            else if (base == "parameter") params[axis] = trim(v);
            else if (base == "values") values[axis] = v;
            else if (base == "start") ranges[axis].start = to_double(v);
            else if (base == "stop") ranges[axis].stop = to_double(v);
            else if (base == "steps") ranges[axis].steps = to_count(v);
        } catch (const BadValue& e) {
            fail(e.reason);
        }
    }
    std::optional<SweepAxis> axes[2];
    for (int a = 0; a < 2; ++a) {
        const std::string suffix = a ? "2" : "";
        const std::string pkey = "parameter" + suffix;
        const bool any_range = ranges[a].start || ranges[a].stop || ranges[a].steps;
        if (params[a].empty()) {
            if (values[a] || any_range) {
                const std::size_t ln = line_of(text, "sweep", "");
                throw ConfigError("sweep." + pkey, ln, located(origin, ln, "sweep." + pkey + ": required when values are given"));
            }
            continue;
        }
        SweepAxis axis;
        axis.parameter = params[a];
        const std::string vkey = "sweep.values" + suffix;
        const std::size_t vline = line_of(text, "sweep", values[a] ? "values" + suffix : "start" + suffix);
        try {
            if (values[a] && any_range) throw BadValue{"give either values or start/stop/steps, not both"};
            if (values[a]) {
                axis.values = to_list(*values[a]);
            } else if (any_range) {
                if (!(ranges[a].start && ranges[a].stop && ranges[a].steps))
                    throw BadValue{"start, stop and steps are all required for a range"};
                const std::size_t n = *ranges[a].steps;
                if (n > kMaxSweepPoints) throw BadValue{"steps <= 10000 required"};
                for (std::size_t i = 0; i < n; ++i) {
                    const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
                    axis.values.push_back(*ranges[a].start + f * (*ranges[a].stop - *ranges[a].start));
                }
            }
        } catch (const BadValue& e) {
            throw ConfigError(vkey, vline, located(origin, vline, vkey + ": " + e.reason));
        }
        axes[a] = std::move(axis);
    }
    if (axes[0]) cfg.sweep.axis1 = std::move(*axes[0]);
    cfg.sweep.axis2 = std::move(axes[1]);
}

// Runs `fn`, turning a DomainError into a ConfigError for section.<mapped field>.
template <typename Fn>
void guard(const std::string& section, const std::map<std::string, std::string>& fields, Fn&& fn) {
    try {
        fn();
    } catch (const DomainError& e) {
        const auto it = fields.find(e.field());
        const std::string key = it != fields.end() ? it->second : section + "." + e.field();
        std::string msg = e.what();
        const std::string prefix = e.field() + ": ";
        if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
        throw ConfigError(key, 0, key + ": " + msg);
    }
}

const std::map<std::string, std::string> kGridFields = {{"grid_points", "grid.points"}, {"span", "grid.span_hz"}};
const std::map<std::string, std::string> kCombFields = {
    {"depth", "comb.depth"},           {"spacing", "comb.spacing_hz"},   {"finesse", "comb.finesse"},
    {"bandwidth", "comb.bandwidth_hz"}, {"background", "comb.background"}, {"grid_points", "grid.points"},
    {"delay", "comb.spacing_hz"}};
const std::map<std::string, std::string> kPulseFields = {
    {"fwhm", "pulse.fwhm_s"}, {"center", "pulse.center_s"}, {"detuning", "pulse.detuning_hz"}};
const std::map<std::string, std::string> kCavityFields = {{"r1", "cavity.r1"},
                                                          {"r2", "cavity.r2"},
                                                          {"epsilon", "cavity.epsilon"},
                                                          {"fsr", "cavity.fsr_hz"},
                                                          {"detuning", "cavity.detuning_hz"}};
const std::map<std::string, std::string> kWindowFields = {
    {"background", "window.background"}, {"width", "window.width_hz"}, {"band", "window.band_hz"}};
const std::map<std::string, std::string> kControlFields = {{"rabi_max", "control.rabi_max_hz"},
                                                           {"duration", "control.duration_s"},
                                                           {"chirp", "control.chirp_hz"},
                                                           {"truncation", "control.truncation_s"}};

[[noreturn]] void invalid(const std::string& key, const std::string& constraint, double got) {
    throw ConfigError(key, 0, key + ": " + constraint + " required, got " + fmt(got));
}

CombParams resolved_comb(const RunConfig& c) {
    CombParams comb = c.comb;
    if (c.finesse_optimal) comb.finesse = optimal_finesse(comb.peak_depth);
    return comb;
}

void validate_echo(const RunConfig& c, const FrequencyGrid& grid) {
    const CombParams comb = resolved_comb(c);
    guard("comb", kCombFields, [&] { validate_comb_on_grid(comb, grid); });
    guard("pulse", kPulseFields, [&] {
        c.pulse.validate();
        validate_pulse_on_grid(c.pulse.fwhm_s, c.pulse.center_s, TimeGrid(grid));
    });
    const auto gate = default_echo_gate(c.pulse.center_s, c.pulse.fwhm_s, comb.echo_delay_s());
    if (gate.stop() > TimeGrid(grid).duration())
        invalid("comb.spacing_hz", "echo window inside the time grid (spacing >= " +
                                       fmt(1.0 / (TimeGrid(grid).duration() - c.pulse.center_s)) + " Hz)",
                comb.spacing_hz);
}

void validate_cavity(const RunConfig& c) {
    if (!c.cavity) throw ConfigError("cavity", 0, "cavity: section required for this kind");
    guard("cavity", kCavityFields, [&] { c.cavity->validate(); });
}

void validate_control(const RunConfig& c, const FrequencyGrid& grid) {
    guard("control", kControlFields, [&] { c.control.pulse.validate(); });
    if (c.control.samples < 2) invalid("control.samples", "samples >= 2", static_cast<double>(c.control.samples));
    if (!(c.control.uniform_bandwidth_hz > 0.0))
        invalid("control.bandwidth_hz", "bandwidth_hz > 0", c.control.uniform_bandwidth_hz);
    if (!(c.control.tolerance.relative > 0.0 && c.control.tolerance.relative < 1e-3))
        invalid("control.rtol", "0 < rtol < 1e-3", c.control.tolerance.relative);
    if (!(c.control.tolerance.absolute > 0.0 && c.control.tolerance.absolute < 1e-3))
        invalid("control.atol", "0 < atol < 1e-3", c.control.tolerance.absolute);
    if (!(c.pulse.fwhm_s > 0.0)) invalid("pulse.fwhm_s", "fwhm_s > 0", c.pulse.fwhm_s);
    if (c.control.weighting == Weighting::Comb) {
        const CombParams comb = resolved_comb(c);
        guard("comb", kCombFields, [&] { validate_comb_on_grid(comb, grid); });
    }
}

void validate_unit(const std::string& key, const std::optional<double>& x) {
    if (x && !(*x >= 0.0 && *x <= 1.0)) invalid(key, "0 <= " + key.substr(key.find('.') + 1) + " <= 1", *x);
}

void validate_single(const RunConfig& c) {
    FrequencyGrid grid;
    guard("grid", kGridFields, [&] { grid = c.grid.frequency_grid(); });
    switch (c.kind) {
    case RunKind::Comb:
        if (c.medium == MediumKind::Comb) {
            const CombParams comb = resolved_comb(c);
            guard("comb", kCombFields, [&] { validate_comb_on_grid(comb, grid); });
        } else if (c.medium == MediumKind::Window) {
            guard("window", kWindowFields,
                  [&] { (void)transparency_window(c.window.background, c.window.width_hz, grid, c.window.band_hz); });
        }
        break;
    case RunKind::Echo:
        if (c.medium != MediumKind::Comb) throw ConfigError("run.medium", 0, "run.medium: comb required for kind echo");
        validate_echo(c, grid);
        break;
    case RunKind::Cavity:
        validate_cavity(c);
        if (c.medium == MediumKind::Comb) {
            validate_echo(c, grid);
        } else {
            if (c.medium == MediumKind::Window)
                guard("window", kWindowFields, [&] {
                    (void)transparency_window(c.window.background, c.window.width_hz, grid, c.window.band_hz);
                });
            if (!(c.probe_span_hz > 0.0 && c.probe_span_hz <= grid.span()))
                invalid("cavity.probe_span_hz", "0 < probe_span_hz <= grid span", c.probe_span_hz);
        }
        break;
    case RunKind::Bloch:
        validate_control(c, grid);
        break;
    case RunKind::SpinWave: {
        validate_control(c, grid);
        guard("spin", {{"gamma", "spin.gamma_hz"}}, [&] { c.spin.validate(); });
        const CombParams comb = resolved_comb(c);
        if (!(comb.spacing_hz > 0.0)) invalid("comb.spacing_hz", "spacing_hz > 0", comb.spacing_hz);
        SpinWaveTimeline tl{c.pulse.center_s, c.spinwave.control1_s, c.spinwave.control2_s, comb.echo_delay_s()};
        guard("spinwave", {{"control1", "spinwave.control1_s"}, {"control2", "spinwave.control2_s"}, {"delay", "comb.spacing_hz"}},
              [&] { tl.validate(); });
        validate_unit("spinwave.eta_2l", c.spinwave.eta_2l);
        validate_unit("spinwave.eta_t", c.spinwave.eta_t);
        validate_unit("spinwave.overlap", c.spinwave.overlap);
        if (!(c.spinwave.stretch >= 1.0)) invalid("spinwave.stretch", "stretch >= 1", c.spinwave.stretch);
        if (!c.spinwave.eta_2l) {
            if (c.cavity) validate_cavity(c);
            validate_echo(c, grid);
        }
        break;
    }
    case RunKind::Design:
        if (!(c.design.depth > 0.0)) invalid("design.depth", "depth > 0", c.design.depth);
        if (!(c.design.epsilon >= 0.0 && c.design.epsilon < 1.0)) invalid("design.epsilon", "0 <= epsilon < 1", c.design.epsilon);
        if (!(c.design.max_finesse > 1.0 && std::isfinite(c.design.max_finesse)))
            invalid("design.max_finesse", "finite max_finesse > 1", c.design.max_finesse);
        if (!(c.design.steps >= 2 && c.design.steps <= 1000000))
            invalid("design.steps", "2 <= steps <= 1000000", static_cast<double>(c.design.steps));
        break;
    case RunKind::Sweep:
        break;
    }
}

void validate_axis(const SweepAxis& axis, const std::string& suffix) {
    const std::string pkey = "sweep.parameter" + suffix;
    const auto it = keys().find(axis.parameter);
    if (it == keys().end() || !it->second.numeric)
        throw ConfigError(pkey, 0, pkey + ": numeric configuration key expected, got '" + axis.parameter + "'");
    const std::string vkey = "sweep.values" + suffix;
    if (axis.values.empty()) throw ConfigError(vkey, 0, vkey + ": empty sweep range");
    for (double v : axis.values)
        if (!std::isfinite(v)) invalid(vkey, "finite values", v);
}

} // namespace

const char* to_string(RunKind k) {
    switch (k) {
    case RunKind::Comb: return "comb";
    case RunKind::Echo: return "echo";
    case RunKind::Cavity: return "cavity";
    case RunKind::Bloch: return "bloch";
    case RunKind::SpinWave: return "spinwave";
    case RunKind::Sweep: return "sweep";
    case RunKind::Design: return "design";
    }
    return "?";
}

const char* to_string(MediumKind m) {
    switch (m) {
    case MediumKind::Comb: return "comb";
    case MediumKind::Window: return "window";
    case MediumKind::Empty: return "empty";
    }
    return "?";
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
    const auto it = keys().find(key);
    if (it == keys().end()) throw ConfigError(key, 0, key + ": unknown key");
    try {
        it->second.apply(cfg, value);
    } catch (const BadValue& e) {
        throw ConfigError(key, 0, key + ": " + e.reason);
    }
}

void set_config_value(RunConfig& cfg, const std::string& key, double value) {
    set_config_value(cfg, key, fmt(value));
}

void validate_config(const RunConfig& cfg) {
    if (cfg.kind != RunKind::Sweep) {
        validate_single(cfg);
        return;
    }
    const SweepSpec& sw = cfg.sweep;
    if (sw.scenario == RunKind::Sweep) throw ConfigError("sweep.scenario", 0, "sweep.scenario: a sweep cannot nest a sweep");
    if (sw.axis1.parameter.empty()) throw ConfigError("sweep.parameter", 0, "sweep.parameter: required for kind sweep");
    validate_axis(sw.axis1, "");
    if (sw.axis2) {
        validate_axis(*sw.axis2, "2");
        if (sw.axis2->parameter == sw.axis1.parameter)
            throw ConfigError("sweep.parameter2", 0, "sweep.parameter2: must differ from sweep.parameter");
    }
    if (sw.size() > kMaxSweepPoints)
        invalid("sweep.values", "at most 10000 sweep points", static_cast<double>(sw.size()));

    // Every point must be runnable before anything executes.
    const std::size_t n2 = sw.axis2 ? sw.axis2->values.size() : 1;
    for (std::size_t i = 0; i < sw.axis1.values.size(); ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            RunConfig point = cfg;
            point.kind = sw.scenario;
            try {
                set_config_value(point, sw.axis1.parameter, sw.axis1.values[i]);
                if (sw.axis2) set_config_value(point, sw.axis2->parameter, sw.axis2->values[j]);
                validate_single(point);
            } catch (const ConfigError& e) {
                std::ostringstream os;
                os << e.what() << " (sweep point " << sw.axis1.parameter << " = " << fmt(sw.axis1.values[i]);
                if (sw.axis2) os << ", " << sw.axis2->parameter << " = " << fmt(sw.axis2->values[j]);
                os << ')';
                throw ConfigError(e.key(), 0, os.str());
            }
        }
    }
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("", e.line(), located(origin, e.line(), e.message()));
    }

    RunConfig cfg;
    for (const auto& [section, node] : tree) {
        if (node.empty() && line_of(text, section, "") == 0) {
            const std::size_t ln = line_of(text, "", section);
            throw ConfigError(section, ln, located(origin, ln, section + ": key outside any [section]"));
        }
        if (section == "results") continue;
        if (section == "sweep") {
            apply_sweep_section(cfg, node, text, origin);
            continue;
        }
        if (section == "cavity") cavity_of(cfg);
        bool known_section = false;
        for (const auto& [k, s] : keys())
            if (k.rfind(section + ".", 0) == 0) known_section = true;
        if (!known_section) {
            const std::size_t ln = line_of(text, section, "");
            throw ConfigError(section, ln, located(origin, ln, "unknown section [" + section + "]"));
        }
        for (const auto& [key, value] : node) {
            const std::string dotted = section + "." + key;
            try {
                set_config_value(cfg, dotted, value.data());
            } catch (const ConfigError& e) {
                const std::size_t ln = line_of(text, section, key);
                throw ConfigError(dotted, ln, located(origin, ln, e.what()));
            }
        }
    }

    try {
        validate_config(cfg);
    } catch (const ConfigError& e) {
        const std::size_t ln = line_of_key(text, e.key());
        throw ConfigError(e.key(), ln, located(origin, ln, e.what()));
    }
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read configuration file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading configuration file '" + path + "'");
    return parse_config_text(ss.str(), path);
}

std::string format_config(const RunConfig& c) {
    std::ostringstream os;
    auto kv = [&](const char* k, const std::string& v) { os << k << " = " << v << '\n'; };
    os << "[run]\n";
    kv("kind", to_string(c.kind));
    kv("medium", to_string(c.medium));
    kv("name", c.name);
    os << "\n[grid]\n";
    kv("points", std::to_string(c.grid.points));
    kv("span_hz", fmt(c.grid.span_hz));
    os << "\n[comb]\n";
    kv("depth", fmt(c.comb.peak_depth));
    kv("spacing_hz", fmt(c.comb.spacing_hz));
    kv("finesse", c.finesse_optimal ? "optimal" : fmt(c.comb.finesse));
    kv("shape", to_string(c.comb.shape));
    kv("bandwidth_hz", fmt(c.comb.bandwidth_hz));
    kv("background", fmt(c.comb.background_depth));
    os << "\n[window]\n";
    kv("background", fmt(c.window.background));
    kv("width_hz", fmt(c.window.width_hz));
    kv("band_hz", fmt(c.window.band_hz));
    os << "\n[pulse]\n";
    kv("fwhm_s", fmt(c.pulse.fwhm_s));
    kv("center_s", fmt(c.pulse.center_s));
    kv("detuning_hz", fmt(c.pulse.detuning_hz));
    if (c.cavity) {
        os << "\n[cavity]\n";
        kv("r1", fmt(c.cavity->r1));
        kv("r2", fmt(c.cavity->r2));
        kv("epsilon", fmt(c.cavity->epsilon));
        kv("fsr_hz", fmt(c.cavity->fsr_hz));
        kv("detuning_hz", fmt(c.cavity->detuning_hz));
        kv("probe_span_hz", fmt(c.probe_span_hz));
    }
    os << "\n[control]\n";
    kv("rabi_max_hz", fmt(c.control.pulse.rabi_max_hz));
    kv("duration_s", fmt(c.control.pulse.duration_s));
    kv("chirp_hz", fmt(c.control.pulse.chirp_hz));
    kv("truncation_s", fmt(c.control.pulse.truncation_s));
    kv("weighting", to_string(c.control.weighting));
    kv("bandwidth_hz", fmt(c.control.uniform_bandwidth_hz));
    kv("samples", std::to_string(c.control.samples));
    kv("rtol", fmt(c.control.tolerance.relative));
    kv("atol", fmt(c.control.tolerance.absolute));
    os << "\n[spin]\n";
    kv("gamma_hz", fmt(c.spin.gamma_hz));
    os << "\n[spinwave]\n";
    kv("control1_s", fmt(c.spinwave.control1_s));
    kv("control2_s", fmt(c.spinwave.control2_s));
    if (c.spinwave.eta_2l) kv("eta_2l", fmt(*c.spinwave.eta_2l));
    if (c.spinwave.eta_t) kv("eta_t", fmt(*c.spinwave.eta_t));
    kv("overlap", fmt(c.spinwave.overlap));
    kv("stretch", fmt(c.spinwave.stretch));
    os << "\n[design]\n";
    kv("depth", fmt(c.design.depth));
    kv("epsilon", fmt(c.design.epsilon));
    kv("max_finesse", fmt(c.design.max_finesse));
    kv("mode", to_string(c.design.mode));
    kv("steps", std::to_string(c.design.steps));
    if (c.kind == RunKind::Sweep || c.sweep != SweepSpec{}) {
        os << "\n[sweep]\n";
        kv("scenario", to_string(c.sweep.scenario));
        if (!c.sweep.axis1.parameter.empty()) {
            kv("parameter", c.sweep.axis1.parameter);
            kv("values", fmt_list(c.sweep.axis1.values));
        }
        if (c.sweep.axis2) {
            kv("parameter2", c.sweep.axis2->parameter);
            kv("values2", fmt_list(c.sweep.axis2->values));
        }
    }
    return os.str();
}

} // namespace afc

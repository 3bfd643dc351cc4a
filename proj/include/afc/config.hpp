#pragma once

#include "afc/scenario.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace afc {

// Parse or validation failure in a run configuration. `key` is "section.key"
// (empty for syntax errors); `line` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, std::size_t line, const std::string& what)
        : std::runtime_error(what), key_(std::move(key)), line_(line) {}

    const std::string& key() const noexcept { return key_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string key_;
    std::size_t line_ = 0;
};

enum class RunKind { Comb, Echo, Cavity, Bloch, SpinWave, Sweep, Design };
enum class MediumKind { Comb, Window, Empty };

const char* to_string(RunKind k);
const char* to_string(MediumKind m);

struct WindowSpec {
    double background = 1.2;
    double width_hz = 15e6;
    double band_hz = 0.0; // 0: widest band that keeps the guard

    bool operator==(const WindowSpec&) const = default;
};

struct SpinWaveSpec {
    double control1_s = 5e-6;
    double control2_s = 10.3e-6;
    std::optional<double> eta_2l; // measured two-level efficiency; simulated when absent
    std::optional<double> eta_t;  // overrides the Bloch transfer in the budget
    double overlap = 1.0;
    double stretch = 1.2;

    bool operator==(const SpinWaveSpec&) const = default;
};

struct DesignSpec {
    double depth = 0.8;
    double epsilon = 0.03;
    double max_finesse = 20.0;
    DesignMode mode = DesignMode::Cavity;
    std::size_t steps = 1901;

    bool operator==(const DesignSpec&) const = default;
};

struct SweepAxis {
    std::string parameter; // "section.key"
    std::vector<double> values;

    bool operator==(const SweepAxis&) const = default;
};

struct SweepSpec {
    RunKind scenario = RunKind::Echo;
    SweepAxis axis1;
    std::optional<SweepAxis> axis2;

    std::size_t size() const { return axis1.values.size() * (axis2 ? axis2->values.size() : 1); }
    bool operator==(const SweepSpec&) const = default;
};

inline constexpr std::size_t kMaxSweepPoints = 10000;

struct RunConfig {
    RunKind kind = RunKind::Echo;
    MediumKind medium = MediumKind::Comb;
    std::string name = "run";

    GridSpec grid;
    CombParams comb{0.8, 250e3, 5.0, ToothShape::Square, 5e6, 0.0};
    bool finesse_optimal = false; // finesse = optimal_finesse(depth)
    WindowSpec window;
    PulseSpec pulse;
    std::optional<CavityParams> cavity;
    double probe_span_hz = 100e6;
    ControlSettings control;
    SpinParams spin{26.5e3};
    SpinWaveSpec spinwave;
    DesignSpec design;
    SweepSpec sweep;

    bool operator==(const RunConfig&) const = default;
};

// Parses INI text ("[section]" headers, "key = value" lines, ';' or '#'
// comments). `origin` prefixes error messages. A [results] section is ignored
// so a report.txt parses back to its configuration.
RunConfig parse_config_text(const std::string& text, const std::string& origin = "config");
// Reads a file; throws IoError if it cannot be read.
RunConfig parse_config(const std::string& path);

// Sets one "section.key" to a textual value, as the parser would.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);
// Numeric convenience for sweeps.
void set_config_value(RunConfig& cfg, const std::string& key, double value);

// Checks cross-module preconditions; throws ConfigError naming the key.
void validate_config(const RunConfig& cfg);

// Canonical INI rendering; parse_config_text(format_config(c)) == c.
std::string format_config(const RunConfig& cfg);

} // namespace afc

#include "afc/presets.hpp"

#include <array>

namespace afc {
namespace {

constexpr std::string_view kFig2a = R"(# Cavity-enhanced two-level echo with a short input: 450 ns pulse, echo at 2 us.
[run]
kind = cavity
name = fig2a

[comb]
depth = 0.8
finesse = 5
delay_s = 2e-6
bandwidth_hz = 5e6

[pulse]
fwhm_s = 450e-9
center_s = 5e-6

[cavity]
r1 = 0.73
r2 = 1
epsilon = 0.03
)";

constexpr std::string_view kFig2bSweep = R"(# Cavity echo efficiency against storage time 1/spacing, 1.5 us input.
[run]
kind = sweep
name = fig2b-sweep

[comb]
depth = 0.8
finesse = 5
bandwidth_hz = 5e6

[pulse]
fwhm_s = 1.5e-6
center_s = 10e-6

[cavity]
r1 = 0.73
r2 = 1
epsilon = 0.03

[sweep]
scenario = cavity
parameter = comb.delay_s
start = 2e-6
stop = 30e-6
steps = 15
)";

constexpr std::string_view kSpinwavePaper = R"(# Spin-wave storage budget from a measured 28% two-level echo and eta_T = 0.70.
[run]
kind = spinwave
name = spinwave-paper

[comb]
depth = 0.8
finesse = 5
delay_s = 10e-6
bandwidth_hz = 5e6

[pulse]
fwhm_s = 1.5e-6
center_s = 1e-6

[control]
rabi_max_hz = 250e3
duration_s = 5e-6
chirp_hz = 1.2e6
truncation_s = 4e-6

[spin]
gamma_hz = 26.5e3

[spinwave]
control1_s = 5e-6
control2_s = 10.3e-6
eta_2l = 0.28
eta_t = 0.70
stretch = 1.2
)";

constexpr std::string_view kCavityLinewidth = R"(# Cavity resonance inside a 15 MHz transparency window of background depth 1.2.
[run]
kind = cavity
medium = window
name = cavity-linewidth

[grid]
points = 65536
span_hz = 400e6

[window]
background = 1.2
width_hz = 15e6

[cavity]
r1 = 0.73
r2 = 0.995
epsilon = 0
fsr_hz = 500e6
probe_span_hz = 100e6
)";

constexpr std::string_view kDesignD12 = R"(# Finesse optimization of a single-pass comb with peak depth 12.
[run]
kind = design
name = design-d12

[design]
depth = 12
epsilon = 0
max_finesse = 20
mode = single-pass
)";

constexpr std::array<Preset, 5> kPresets{{
    {"fig2a", "cavity echo, 450 ns input, 1/spacing = 2 us", kFig2a},
    {"fig2b-sweep", "cavity echo efficiency for 1/spacing = 2..30 us", kFig2bSweep},
    {"spinwave-paper", "spin-wave efficiency budget and synthetic trace", kSpinwavePaper},
    {"cavity-linewidth", "empty vs transparency-window cavity linewidth", kCavityLinewidth},
    {"design-d12", "optimal finesse for peak depth 12", kDesignD12},
}};

} // namespace

std::span<const Preset> presets() { return kPresets; }

const Preset* find_preset(std::string_view name) {
    for (const auto& p : kPresets)
        if (p.name == name) return &p;
    return nullptr;
}

} // namespace afc

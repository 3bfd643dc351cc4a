#pragma once

#include <span>
#include <string_view>

namespace afc {

struct Preset {
    std::string_view name;
    std::string_view summary;
    std::string_view text; // INI configuration
};

std::span<const Preset> presets();
// nullptr when no preset has this name.
const Preset* find_preset(std::string_view name);

} // namespace afc

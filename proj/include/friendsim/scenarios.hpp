#pragma once

#include <span>
#include <string_view>

namespace friendsim {

/// A protocol shipped with the tool, compiled in from scenarios/*.protocol.
struct Scenario {
    std::string_view name;
    std::string_view summary;
    std::string_view text;
};

std::span<const Scenario> builtin_scenarios();
const Scenario *find_scenario(std::string_view name);

}  // namespace friendsim

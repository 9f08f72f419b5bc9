#pragma once

#include "friendsim/state.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace friendsim {

/// Basis vector name -> recorder label, in declaration order.
using OutcomeMap = std::vector<std::pair<std::string, std::string>>;

struct PrepareRule {
    std::string control_label;
    Superposition target;
    friend bool operator==(const PrepareRule &, const PrepareRule &) = default;
};

/// A state together with the exact probability of the branch that produced it.
struct Selection {
    StateVector state;
    RadicalScalar probability;
};

/*
 * Unitary record of a measurement: every branch |b_i> (x) rest acquires the
 * recorder label outcome(b_i). Nothing is discarded, so the norm is kept
 * exactly. The state's support on the basis registers must lie in the span
 * of the basis, and the recorder must still be at its ready label.
 */
StateVector entangle_measure(const StateVector &state, const Basis &basis, std::string_view recorder,
                             const OutcomeMap &outcomes);

/// Projective measurement with a prescribed outcome. Renormalizes by the
/// exact reciprocal of sqrt(P), so P must be rational.
Selection collapse_measure(const StateVector &state, const Basis &basis, std::string_view recorder,
                           const OutcomeMap &outcomes, std::string_view chosen);

/// Replaces the target's ready label, term by term, with the superposition
/// the rule assigns to that term's control label.
StateVector conditional_prepare(const StateVector &state, std::string_view control, std::string_view target,
                                const std::vector<PrepareRule> &rules);

/// Conditions on an event: projects, then renormalizes.
Selection postselect(const StateVector &state, const Event &event);

}  // namespace friendsim

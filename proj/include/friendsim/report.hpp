#pragma once

#include "friendsim/protocol.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace friendsim {

/// What one perspective predicts for an event on its final state.
struct PredictionClaim {
    std::string perspective;
    Event event;
    RadicalScalar probability;
    bool certain = false;  // probability is exactly 0 or exactly 1
};

std::vector<PredictionClaim> certain_claims(const Trace &trace, std::span<const Event> events);

/// One event on which two perspectives disagree with certainty: one assigns
/// exactly zero, the other a positive probability.
struct Contradiction {
    Event event;
    std::string first;
    RadicalScalar first_probability;
    std::string second;
    RadicalScalar second_probability;
};

struct PerspectiveEvaluation {
    std::string perspective;
    RadicalScalar condition_probability;    // P(common postselect) on the final state; 1 without one
    bool applicable = true;                  // false when the condition has probability 0
    std::vector<RadicalScalar> joint;        // P(event & condition) per event
};

struct ConsistencyReport {
    std::vector<Event> events;
    std::optional<Event> condition;
    std::vector<PerspectiveEvaluation> evaluations;  // in perspective order
    std::vector<Contradiction> contradictions;

    bool consistent() const { return contradictions.empty(); }
};

/*
 * Runs every perspective, conditions each final state on the common
 * postselection event (when given) and compares the event probabilities
 * pairwise in declaration order. Probabilities are joint with the condition,
 * so zero/positive comparisons are unaffected by the normalization. A
 * perspective under which the condition is impossible is marked inapplicable
 * and takes no part in the comparison.
 */
ConsistencyReport contradiction_report(const ProtocolSpec &spec, std::span<const Perspective> perspectives,
                                       std::span<const Event> events, const std::optional<Event> &common_postselect);

struct TermChange {
    Assignment assignment;
    std::optional<RadicalScalar> first;   // absent: term only in the second trace
    std::optional<RadicalScalar> second;  // absent: term only in the first trace
};

struct StepDiff {
    std::string step_id;
    bool identical = true;
    std::vector<TermChange> changes;
};

struct TraceDiff {
    std::string first;
    std::string second;
    std::shared_ptr<const SystemSpec> system;
    std::vector<StepDiff> steps;

    std::optional<std::string> first_divergence() const;
};

TraceDiff diff_traces(const Trace &a, const Trace &b);

std::string render_report(const ConsistencyReport &report, bool float_echo);
std::string render_diff(const TraceDiff &diff);

}  // namespace friendsim

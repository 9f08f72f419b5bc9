#pragma once

#include "friendsim/measurement.hpp"
#include "friendsim/state.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace friendsim {

struct MeasureStep {
    std::string basis;  // declared basis, or a register name for its label basis
    std::string recorder;
    OutcomeMap outcomes;
    std::optional<std::string> default_collapse;  // collapse outcome when no perspective overrides
    friend bool operator==(const MeasureStep &, const MeasureStep &) = default;
};

struct PrepareStep {
    std::string target;
    std::string control;
    std::vector<PrepareRule> rules;
    friend bool operator==(const PrepareStep &, const PrepareStep &) = default;
};

struct PostselectStep {
    Event event;
    friend bool operator==(const PostselectStep &, const PostselectStep &) = default;
};

struct Step {
    std::string id;
    std::variant<MeasureStep, PrepareStep, PostselectStep> action;
    friend bool operator==(const Step &, const Step &) = default;
};

/// Whose wave function is computed: the measurement steps treated as
/// collapsing, each with its assumed outcome.
struct Perspective {
    std::string name;
    std::vector<std::pair<std::string, std::string>> overrides;  // step id -> collapse outcome

    const std::string *override_for(std::string_view step_id) const;

    friend bool operator==(const Perspective &, const Perspective &) = default;
};

/// `query at <step> probability <event> [given <event>]`
struct Query {
    std::string at;
    Event event;
    std::optional<Event> given;

    std::string str() const;  // "P(event)" or "P(event | given)"

    friend bool operator==(const Query &, const Query &) = default;
};

inline constexpr std::string_view kInitialStepId = "init";
inline constexpr std::string_view kEnsemblePerspective = "ensemble";

struct ProtocolSpec {
    std::shared_ptr<const SystemSpec> system = std::make_shared<const SystemSpec>();
    std::vector<std::pair<std::string, Superposition>> initial;
    std::vector<Basis> bases;
    std::vector<Step> steps;
    std::vector<Perspective> perspectives;
    std::vector<Query> queries;
    std::vector<Event> check_events;
    std::optional<Event> check_given;

    /// Declared basis by name, else the label basis of the register so named.
    Basis basis(std::string_view name) const;
    const Step *find_step(std::string_view id) const;
    /// Declared perspective, or the implicit no-override `ensemble`.
    Perspective perspective(std::string_view name) const;
    /// Declared perspectives; just `ensemble` when none are declared.
    std::vector<Perspective> all_perspectives() const;

    friend bool operator==(const ProtocolSpec &a, const ProtocolSpec &b);
};

/// Parses and validates protocol text. Throws ParseError (SyntaxError or
/// SemanticError) positioned at the offending token.
ProtocolSpec parse_protocol(std::string_view text);

/// Canonical protocol text; parse_protocol(render_protocol(s)) == s.
std::string render_protocol(const ProtocolSpec &spec);

/// Semantic checks shared by the parser and programmatic construction.
/// Throws Error(SemanticError).
void validate_protocol(const ProtocolSpec &spec);
void validate_perspective(const ProtocolSpec &spec, const Perspective &perspective);

struct TraceEntry {
    std::string step_id;
    StateVector state;
    std::optional<RadicalScalar> probability;  // collapse or postselection probability
};

struct QueryResult {
    Query query;
    RadicalScalar value;
};

struct Trace {
    std::string perspective;
    std::vector<TraceEntry> entries;  // entries[0] is the initial state, id "init"
    std::vector<QueryResult> queries;

    const TraceEntry *find(std::string_view step_id) const;
    const StateVector &final_state() const { return entries.back().state; }
    /// Product of the collapse/postselection probabilities up to and
    /// including the given step: the weight of this branch in the ensemble.
    RadicalScalar branch_weight(std::string_view step_id) const;
};

Trace run(const ProtocolSpec &spec, const Perspective &perspective);

}  // namespace friendsim

#include "friendsim/measurement.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace friendsim {

namespace {

struct RecorderPlan {
    std::size_t recorder;
    std::uint32_t ready;
    std::vector<std::uint32_t> labels;  // per basis vector
};

RecorderPlan plan_recording(const StateVector &state, const Basis &basis, std::string_view recorder,
                            const OutcomeMap &outcomes) {
    const auto &system = state.system();
    validate_basis(basis, system);
    RecorderPlan plan{};
    plan.recorder = system.index_of(recorder);
    const auto &spec = system[plan.recorder];
    if (std::find(basis.subsystems.begin(), basis.subsystems.end(), spec.name) != basis.subsystems.end()) {
        throw Error(ErrorCode::OutcomeMapInvalid,
                    "recorder '" + spec.name + "' is one of the measured registers of basis '" + basis.name + "'");
    }
    if (!spec.ready_label) {
        throw Error(ErrorCode::RecorderNotReady, "recorder '" + spec.name + "' has no ready label");
    }
    plan.ready = static_cast<std::uint32_t>(spec.ready_index());

    std::map<std::string, std::string, std::less<>> lookup;
    for (const auto &[vector, label] : outcomes) {
        if (!basis.find(vector)) {
            throw Error(ErrorCode::OutcomeMapInvalid,
                        "basis '" + basis.name + "' has no vector '" + vector + "' in the outcome map");
        }
        if (!lookup.emplace(vector, label).second) {
            throw Error(ErrorCode::OutcomeMapInvalid, "outcome for '" + vector + "' given twice");
        }
    }
    std::set<std::uint32_t> used;
    for (const auto &vector : basis.vectors) {
        auto it = lookup.find(vector.name);
        if (it == lookup.end()) {
            throw Error(ErrorCode::OutcomeMapIncomplete,
                        "no recorder label for basis vector '" + vector.name + "' of '" + basis.name + "'");
        }
        const auto label = system.label_of(plan.recorder, it->second);
        if (label == plan.ready) {
            throw Error(ErrorCode::OutcomeMapInvalid, "outcome '" + vector.name + "' maps to the ready label");
        }
        if (!used.insert(label).second) {
            throw Error(ErrorCode::OutcomeMapInvalid,
                        "recorder label '" + it->second + "' is assigned to two outcomes");
        }
        plan.labels.push_back(label);
    }
    for (const auto &[assignment, coefficient] : state.terms()) {
        if (assignment[plan.recorder] != plan.ready) {
            throw Error(ErrorCode::RecorderNotReady, "recorder '" + spec.name + "' already holds '" +
                                                         spec.labels[assignment[plan.recorder]] + "'");
        }
    }
    return plan;
}

Decomposition checked_decompose(const StateVector &state, const Basis &basis) {
    auto parts = decompose(state, basis);
    if (!parts.residual.empty()) {
        throw Error(ErrorCode::SpanError, "state has support outside the span of basis '" + basis.name + "'");
    }
    return parts;
}

StateVector record(const StateVector &projected, std::size_t recorder, std::uint32_t label) {
    StateVector out(projected.system_ptr());
    for (const auto &[assignment, coefficient] : projected.terms()) {
        Assignment relabelled = assignment;
        relabelled[recorder] = label;
        out.add(relabelled, coefficient);
    }
    return out;
}

RadicalScalar sqrt_probability(const RadicalScalar &p) {
    auto rational = p.rational_value();
    if (!rational) {
        throw Error(ErrorCode::NonMonomialNorm, "branch probability " + p.str() + " is not rational");
    }
    return RadicalScalar::sqrt_rational(*rational);
}

}  // namespace

StateVector entangle_measure(const StateVector &state, const Basis &basis, std::string_view recorder,
                             const OutcomeMap &outcomes) {
    const auto plan = plan_recording(state, basis, recorder, outcomes);
    const auto parts = checked_decompose(state, basis);
    StateVector out(state.system_ptr());
    for (std::size_t i = 0; i < basis.vectors.size(); ++i) {
        const auto projected = attach(state, basis.vectors[i], parts.subsystem_indices, parts.branches[i].state);
        out = out + record(projected, plan.recorder, plan.labels[i]);
    }
    return out;
}

Selection collapse_measure(const StateVector &state, const Basis &basis, std::string_view recorder,
                           const OutcomeMap &outcomes, std::string_view chosen) {
    const auto plan = plan_recording(state, basis, recorder, outcomes);
    const auto parts = checked_decompose(state, basis);
    std::size_t index = basis.vectors.size();
    for (std::size_t i = 0; i < basis.vectors.size(); ++i) {
        if (basis.vectors[i].name == chosen) {
            index = i;
        }
    }
    if (index == basis.vectors.size()) {
        throw Error(ErrorCode::UnknownName,
                    "basis '" + basis.name + "' has no vector '" + std::string(chosen) + "'");
    }
    const auto &branch = parts.branches[index].state;
    const auto p = norm_squared(branch);
    if (p.is_zero()) {
        throw Error(ErrorCode::ZeroProbabilityOutcome,
                    "outcome '" + std::string(chosen) + "' of basis '" + basis.name + "' has probability 0");
    }
    const auto scale = sqrt_probability(p).invert_monomial();
    const auto projected = attach(state, basis.vectors[index], parts.subsystem_indices, branch);
    return {record(projected, plan.recorder, plan.labels[index]).scaled(scale), p};
}

StateVector conditional_prepare(const StateVector &state, std::string_view control, std::string_view target,
                                const std::vector<PrepareRule> &rules) {
    const auto &system = state.system();
    const auto ctl = system.index_of(control);
    const auto tgt = system.index_of(target);
    if (ctl == tgt) {
        throw Error(ErrorCode::SemanticError, "prepare target and control are the same register");
    }
    const auto &target_spec = system[tgt];
    if (!target_spec.ready_label) {
        throw Error(ErrorCode::TargetNotReady, "target '" + target_spec.name + "' has no ready label");
    }
    const auto ready = static_cast<std::uint32_t>(target_spec.ready_index());

    std::map<std::uint32_t, std::vector<std::pair<std::uint32_t, RadicalScalar>>> table;
    for (const auto &rule : rules) {
        const auto label = system.label_of(ctl, rule.control_label);
        std::map<std::uint32_t, RadicalScalar> amplitudes;
        for (const auto &[target_label, amplitude] : rule.target) {
            amplitudes[system.label_of(tgt, target_label)] += amplitude;
        }
        RadicalScalar norm;
        for (const auto &[l, a] : amplitudes) {
            norm += a * a;
        }
        if (!(norm == RadicalScalar(1))) {
            throw Error(ErrorCode::NonUnitRule,
                        "rule for '" + rule.control_label + "' has squared norm " + norm.str() + ", not 1");
        }
        if (table.contains(label)) {
            throw Error(ErrorCode::SemanticError, "two rules for control label '" + rule.control_label + "'");
        }
        table.emplace(label, std::vector<std::pair<std::uint32_t, RadicalScalar>>(amplitudes.begin(), amplitudes.end()));
    }

    StateVector out(state.system_ptr());
    for (const auto &[assignment, coefficient] : state.terms()) {
        if (assignment[tgt] != ready) {
            throw Error(ErrorCode::TargetNotReady, "target '" + target_spec.name + "' already holds '" +
                                                       target_spec.labels[assignment[tgt]] + "'");
        }
        auto it = table.find(assignment[ctl]);
        if (it == table.end()) {
            throw Error(ErrorCode::RuleMissing, "no rule for control label '" +
                                                    system[ctl].labels[assignment[ctl]] + "' of '" +
                                                    system[ctl].name + "'");
        }
        for (const auto &[label, amplitude] : it->second) {
            Assignment next = assignment;
            next[tgt] = label;
            out.add(next, coefficient * amplitude);
        }
    }
    return out;
}

Selection postselect(const StateVector &state, const Event &event) {
    validate_event(event, state.system());
    const auto projected = project(state, event);
    const auto p = norm_squared(projected);
    if (p.is_zero()) {
        throw Error(ErrorCode::ZeroProbabilityOutcome, "event '" + event.str() + "' has probability 0");
    }
    return {projected.scaled(sqrt_probability(p).invert_monomial()), p};
}

}  // namespace friendsim

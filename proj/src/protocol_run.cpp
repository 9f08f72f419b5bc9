#include "friendsim/protocol.hpp"

namespace friendsim {

const std::string *Perspective::override_for(std::string_view step_id) const {
    for (const auto &[id, outcome] : overrides) {
        if (id == step_id) {
            return &outcome;
        }
    }
    return nullptr;
}

std::string Query::str() const {
    if (given) {
        return "P(" + event.str() + " | " + given->str() + ")";
    }
    return "P(" + event.str() + ")";
}

Basis ProtocolSpec::basis(std::string_view name) const {
    for (const auto &b : bases) {
        if (b.name == name) {
            return b;
        }
    }
    if (system->find(name)) {
        return computational_basis(*system, name);
    }
    throw Error(ErrorCode::UnknownName, "unknown basis '" + std::string(name) + "'");
}

const Step *ProtocolSpec::find_step(std::string_view id) const {
    for (const auto &step : steps) {
        if (step.id == id) {
            return &step;
        }
    }
    return nullptr;
}

Perspective ProtocolSpec::perspective(std::string_view name) const {
    for (const auto &p : perspectives) {
        if (p.name == name) {
            return p;
        }
    }
    if (name == kEnsemblePerspective) {
        return Perspective{std::string(kEnsemblePerspective), {}};
    }
    throw Error(ErrorCode::UnknownName, "unknown perspective '" + std::string(name) + "'");
}

std::vector<Perspective> ProtocolSpec::all_perspectives() const {
    if (perspectives.empty()) {
        return {perspective(kEnsemblePerspective)};
    }
    return perspectives;
}

bool operator==(const ProtocolSpec &a, const ProtocolSpec &b) {
    return *a.system == *b.system && a.initial == b.initial && a.bases == b.bases && a.steps == b.steps &&
           a.perspectives == b.perspectives && a.queries == b.queries && a.check_events == b.check_events &&
           a.check_given == b.check_given;
}

const TraceEntry *Trace::find(std::string_view step_id) const {
    for (const auto &entry : entries) {
        if (entry.step_id == step_id) {
            return &entry;
        }
    }
    return nullptr;
}

RadicalScalar Trace::branch_weight(std::string_view step_id) const {
    RadicalScalar weight(1);
    for (const auto &entry : entries) {
        if (entry.probability) {
            weight *= *entry.probability;
        }
        if (entry.step_id == step_id) {
            return weight;
        }
    }
    throw Error(ErrorCode::UnknownName, "trace has no step '" + std::string(step_id) + "'");
}

namespace {

TraceEntry apply(const ProtocolSpec &spec, const Perspective &perspective, const Step &step,
                 const StateVector &state) {
    if (const auto *m = std::get_if<MeasureStep>(&step.action)) {
        const auto basis = spec.basis(m->basis);
        const std::string *collapse = perspective.override_for(step.id);
        if (!collapse && m->default_collapse) {
            collapse = &*m->default_collapse;
        }
        if (collapse) {
            auto selection = collapse_measure(state, basis, m->recorder, m->outcomes, *collapse);
            return {step.id, std::move(selection.state), std::move(selection.probability)};
        }
        return {step.id, entangle_measure(state, basis, m->recorder, m->outcomes), std::nullopt};
    }
    if (const auto *p = std::get_if<PrepareStep>(&step.action)) {
        return {step.id, conditional_prepare(state, p->control, p->target, p->rules), std::nullopt};
    }
    auto selection = postselect(state, std::get<PostselectStep>(step.action).event);
    return {step.id, std::move(selection.state), std::move(selection.probability)};
}

}  // namespace

Trace run(const ProtocolSpec &spec, const Perspective &perspective) {
    validate_perspective(spec, perspective);
    Trace trace;
    trace.perspective = perspective.name;
    trace.entries.push_back({std::string(kInitialStepId), build_initial(spec.system, spec.initial), std::nullopt});
    for (const auto &step : spec.steps) {
        try {
            trace.entries.push_back(apply(spec, perspective, step, trace.entries.back().state));
        } catch (const StepError &) {
            throw;
        } catch (const Error &e) {
            throw StepError(step.id, e);
        }
    }
    for (const auto &query : spec.queries) {
        const auto *entry = trace.find(query.at);
        if (!entry) {
            throw Error(ErrorCode::UnknownName, "query refers to unknown step '" + query.at + "'");
        }
        const auto value = query.given ? conditional_probability(entry->state, *query.given, query.event)
                                       : probability(entry->state, query.event);
        trace.queries.push_back({query, value});
    }
    return trace;
}

}  // namespace friendsim

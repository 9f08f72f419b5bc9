#include "friendsim/report.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>
#include <sstream>

namespace friendsim {

namespace {

std::string ket_str(const SystemSpec &system, const Assignment &assignment) {
    std::string out = "|";
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        out += (i == 0 ? "" : ",") + system[i].labels[assignment[i]];
    }
    return out + "⟩";
}

std::string with_float(const RadicalScalar &value, bool float_echo) {
    if (!float_echo) {
        return value.str();
    }
    std::ostringstream out;
    out.precision(12);
    out << value.str() << " (" << value.to_double() << ")";
    return out.str();
}

}  // namespace

std::vector<PredictionClaim> certain_claims(const Trace &trace, std::span<const Event> events) {
    std::vector<PredictionClaim> claims;
    for (const auto &event : events) {
        const auto p = probability(trace.final_state(), event);
        const bool certain = p.is_zero() || p == RadicalScalar(1);
        claims.push_back({trace.perspective, event, p, certain});
    }
    return claims;
}

ConsistencyReport contradiction_report(const ProtocolSpec &spec, std::span<const Perspective> perspectives,
                                       std::span<const Event> events, const std::optional<Event> &common_postselect) {
    if (perspectives.size() < 2) {
        throw std::invalid_argument("contradiction report needs at least two perspectives");
    }
    ConsistencyReport report;
    report.events.assign(events.begin(), events.end());
    report.condition = common_postselect;

    std::vector<std::future<PerspectiveEvaluation>> pending;
    for (const auto &perspective : perspectives) {
        pending.push_back(std::async(std::launch::async, [&spec, &perspective, &report] {
            const auto trace = run(spec, perspective);
            PerspectiveEvaluation eval{perspective.name, RadicalScalar(1), true, {}};
            StateVector state = trace.final_state();
            if (report.condition) {
                state = project(state, *report.condition);
                eval.condition_probability = probability(trace.final_state(), *report.condition);
                eval.applicable = !eval.condition_probability.is_zero();
            }
            for (const auto &event : report.events) {
                eval.joint.push_back(probability(state, event));
            }
            return eval;
        }));
    }
    for (auto &f : pending) {
        report.evaluations.push_back(f.get());
    }

    for (std::size_t e = 0; e < report.events.size(); ++e) {
        for (std::size_t i = 0; i < report.evaluations.size(); ++i) {
            for (std::size_t j = i + 1; j < report.evaluations.size(); ++j) {
                const auto &a = report.evaluations[i];
                const auto &b = report.evaluations[j];
                if (!a.applicable || !b.applicable) {
                    continue;
                }
                if (a.joint[e].is_zero() != b.joint[e].is_zero()) {
                    report.contradictions.push_back(
                        {report.events[e], a.perspective, a.joint[e], b.perspective, b.joint[e]});
                }
            }
        }
    }
    return report;
}

std::optional<std::string> TraceDiff::first_divergence() const {
    for (const auto &step : steps) {
        if (!step.identical) {
            return step.step_id;
        }
    }
    return std::nullopt;
}

TraceDiff diff_traces(const Trace &a, const Trace &b) {
    if (a.entries.empty() || b.entries.empty() || !(a.entries.front().state.system() == b.entries.front().state.system())) {
        throw Error(ErrorCode::SystemMismatch, "traces are over different systems");
    }
    TraceDiff diff{a.perspective, b.perspective, a.entries.front().state.system_ptr(), {}};
    const auto n = std::max(a.entries.size(), b.entries.size());
    for (std::size_t i = 0; i < n; ++i) {
        StepDiff step;
        const auto *ea = i < a.entries.size() ? &a.entries[i] : nullptr;
        const auto *eb = i < b.entries.size() ? &b.entries[i] : nullptr;
        step.step_id = ea ? ea->step_id : eb->step_id;
        if (!ea || !eb || ea->step_id != eb->step_id) {
            step.identical = false;
            diff.steps.push_back(std::move(step));
            continue;
        }
        const auto &ta = ea->state.terms();
        const auto &tb = eb->state.terms();
        for (const auto &[assignment, coefficient] : ta) {
            auto it = tb.find(assignment);
            if (it == tb.end()) {
                step.changes.push_back({assignment, coefficient, std::nullopt});
            } else if (!(it->second == coefficient)) {
                step.changes.push_back({assignment, coefficient, it->second});
            }
        }
        for (const auto &[assignment, coefficient] : tb) {
            if (!ta.contains(assignment)) {
                step.changes.push_back({assignment, std::nullopt, coefficient});
            }
        }
        std::sort(step.changes.begin(), step.changes.end(),
                  [](const TermChange &x, const TermChange &y) { return x.assignment < y.assignment; });
        step.identical = step.changes.empty();
        diff.steps.push_back(std::move(step));
    }
    return diff;
}

std::string render_report(const ConsistencyReport &report, bool float_echo) {
    std::ostringstream out;
    if (report.condition) {
        out << "condition: " << report.condition->str() << "\n";
    }
    for (const auto &eval : report.evaluations) {
        out << "perspective " << eval.perspective;
        if (report.condition) {
            out << ": P(" << report.condition->str() << ") = " << with_float(eval.condition_probability, float_echo);
            if (!eval.applicable) {
                out << " (inapplicable)";
            }
        }
        out << "\n";
        for (std::size_t e = 0; e < report.events.size(); ++e) {
            Event joint = report.events[e];
            if (report.condition) {
                joint = joint & *report.condition;
            }
            out << "  P(" << joint.str() << ") = " << with_float(eval.joint[e], float_echo) << "\n";
        }
    }
    if (report.contradictions.empty()) {
        out << "NO CONTRADICTION\n";
    }
    for (const auto &c : report.contradictions) {
        out << "CONTRADICTION on " << c.event.str() << ": " << c.first << " gives "
            << with_float(c.first_probability, float_echo) << ", " << c.second << " gives "
            << with_float(c.second_probability, float_echo) << "\n";
    }
    return out.str();
}

std::string render_diff(const TraceDiff &diff) {
    std::ostringstream out;
    out << "trace-diff " << diff.first << " vs " << diff.second << "\n";
    for (const auto &step : diff.steps) {
        if (step.identical) {
            out << "step " << step.step_id << ": identical\n";
            continue;
        }
        out << "step " << step.step_id << ": differs\n";
        for (const auto &change : step.changes) {
            const auto ket = ket_str(*diff.system, change.assignment);
            if (!change.second) {
                out << "  - " << change.first->str() << " · " << ket << "  (only " << diff.first << ")\n";
            } else if (!change.first) {
                out << "  + " << change.second->str() << " · " << ket << "  (only " << diff.second << ")\n";
            } else {
                out << "  ~ " << ket << ": " << change.first->str() << " -> " << change.second->str() << "\n";
            }
        }
    }
    if (auto first = diff.first_divergence()) {
        out << "first divergence at step " << *first << "\n";
    } else {
        out << "identical: all " << diff.steps.size() << " states agree\n";
    }
    return out.str();
}

}  // namespace friendsim

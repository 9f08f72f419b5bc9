#include "friendsim/trace_format.hpp"

#include <sstream>

namespace friendsim {

namespace {

std::string value_text(const RadicalScalar &value, bool float_echo) {
    if (!float_echo) {
        return value.str();
    }
    std::ostringstream out;
    out.precision(12);
    out << value.str() << " (" << value.to_double() << ")";
    return out.str();
}

nlohmann::ordered_json scalar_json(const RadicalScalar &value) {
    nlohmann::ordered_json out;
    out["exact"] = value.str();
    out["float"] = value.to_double();
    return out;
}

}  // namespace

std::string render_trace_text(const Trace &trace, bool float_echo, std::span<const PredictionClaim> claims) {
    std::ostringstream out;
    out << "perspective " << trace.perspective << "\n";
    for (const auto &entry : trace.entries) {
        out << "step " << entry.step_id;
        if (entry.probability) {
            out << "  [p = " << value_text(*entry.probability, float_echo) << "]";
        }
        out << "\n";
        std::istringstream lines(entry.state.render());
        for (std::string line; std::getline(lines, line);) {
            out << "  " << line << "\n";
        }
    }
    if (!trace.queries.empty()) {
        out << "queries\n";
        for (const auto &result : trace.queries) {
            out << "  [" << result.query.at << "] " << result.query.str() << " = "
                << value_text(result.value, float_echo) << "\n";
        }
    }
    if (!claims.empty()) {
        out << "claims\n";
        for (const auto &claim : claims) {
            out << "  P(" << claim.event.str() << ") = " << value_text(claim.probability, float_echo)
                << (claim.certain ? "  [certain]" : "") << "\n";
        }
    }
    return out.str();
}

nlohmann::ordered_json trace_to_json(const Trace &trace) {
    nlohmann::ordered_json out;
    out["perspective"] = trace.perspective;
    auto steps = nlohmann::ordered_json::array();
    for (const auto &entry : trace.entries) {
        nlohmann::ordered_json step;
        step["id"] = entry.step_id;
        if (entry.probability) {
            step["probability"] = scalar_json(*entry.probability);
        }
        auto terms = nlohmann::ordered_json::array();
        const auto &system = entry.state.system();
        for (const auto &[assignment, coefficient] : entry.state.terms()) {
            nlohmann::ordered_json term;
            nlohmann::ordered_json labels = nlohmann::ordered_json::object();
            for (std::size_t i = 0; i < assignment.size(); ++i) {
                labels[system[i].name] = system[i].labels[assignment[i]];
            }
            term["assignment"] = std::move(labels);
            term["coeff"] = scalar_json(coefficient);
            terms.push_back(std::move(term));
        }
        step["state"] = std::move(terms);
        steps.push_back(std::move(step));
    }
    out["steps"] = std::move(steps);
    auto queries = nlohmann::ordered_json::array();
    for (const auto &result : trace.queries) {
        nlohmann::ordered_json q;
        q["at"] = result.query.at;
        q["event"] = result.query.given ? result.query.event.str() + " | " + result.query.given->str()
                                        : result.query.event.str();
        q["exact"] = result.value.str();
        q["float"] = result.value.to_double();
        queries.push_back(std::move(q));
    }
    out["queries"] = std::move(queries);
    return out;
}

}  // namespace friendsim

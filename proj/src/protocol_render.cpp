#include "friendsim/protocol.hpp"

#include <sstream>

namespace friendsim {

namespace {

std::string join(const std::vector<std::string> &items, std::string_view sep) {
    std::string out;
    for (const auto &item : items) {
        if (!out.empty()) {
            out += sep;
        }
        out += item;
    }
    return out;
}

bool negative_monomial(const RadicalScalar &c) { return c.is_monomial() && c.terms().begin()->second < 0; }

/// `1/2*sqrt(2)|h,h> - 1/2*sqrt(2)|t,t>`; a unit coefficient is omitted.
std::string render_terms(const std::vector<std::pair<std::string, RadicalScalar>> &terms) {
    std::string out;
    for (const auto &[ket, coefficient] : terms) {
        RadicalScalar magnitude = coefficient;
        bool minus = false;
        if (negative_monomial(coefficient)) {
            magnitude = -coefficient;
            minus = true;
        }
        if (out.empty()) {
            out += minus ? "-" : "";
        } else {
            out += minus ? " - " : " + ";
        }
        if (!(magnitude == RadicalScalar(1))) {
            out += magnitude.is_monomial() ? magnitude.str() : "(" + magnitude.str() + ")";
        }
        out += "|" + ket + ">";
    }
    return out;
}

std::string render_superposition(const Superposition &s) {
    std::vector<std::pair<std::string, RadicalScalar>> terms;
    for (const auto &[label, amplitude] : s) {
        terms.emplace_back(label, amplitude);
    }
    return render_terms(terms);
}

}  // namespace

std::string render_protocol(const ProtocolSpec &spec) {
    std::ostringstream out;
    for (const auto &reg : spec.system->registers()) {
        out << "register " << reg.name << " { " << join(reg.labels, " ") << " }";
        if (reg.ready_label) {
            out << " ready " << *reg.ready_label;
        }
        out << "\n";
    }
    for (const auto &[name, superposition] : spec.initial) {
        out << "init " << name << " = " << render_superposition(superposition) << "\n";
    }
    for (const auto &basis : spec.bases) {
        out << "basis " << basis.name << " on " << join(basis.subsystems, ",") << " {";
        for (std::size_t i = 0; i < basis.vectors.size(); ++i) {
            std::vector<std::pair<std::string, RadicalScalar>> terms;
            for (const auto &component : basis.vectors[i].components) {
                terms.emplace_back(join(component.labels, ","), component.coefficient);
            }
            out << (i == 0 ? " " : "; ") << basis.vectors[i].name << " = " << render_terms(terms);
        }
        out << " }\n";
    }
    for (const auto &step : spec.steps) {
        out << "step " << step.id << " ";
        if (const auto *m = std::get_if<MeasureStep>(&step.action)) {
            out << "measure " << m->basis << " recorder " << m->recorder << " outcomes {";
            for (std::size_t i = 0; i < m->outcomes.size(); ++i) {
                out << (i == 0 ? " " : "; ") << m->outcomes[i].first << " -> " << m->outcomes[i].second;
            }
            out << " }";
            if (m->default_collapse) {
                out << " collapse " << *m->default_collapse;
            }
        } else if (const auto *p = std::get_if<PrepareStep>(&step.action)) {
            out << "prepare " << p->target << " by " << p->control << " {";
            for (std::size_t i = 0; i < p->rules.size(); ++i) {
                out << (i == 0 ? " " : "; ") << p->rules[i].control_label << " -> "
                    << render_superposition(p->rules[i].target);
            }
            out << " }";
        } else {
            out << "postselect " << std::get<PostselectStep>(step.action).event.str();
        }
        out << "\n";
    }
    for (const auto &p : spec.perspectives) {
        out << "perspective " << p.name << " {";
        for (const auto &[id, outcome] : p.overrides) {
            out << " " << id << " collapse " << outcome << ";";
        }
        out << " }\n";
    }
    for (const auto &q : spec.queries) {
        out << "query at " << q.at << " probability " << q.event.str();
        if (q.given) {
            out << " given " << q.given->str();
        }
        out << "\n";
    }
    for (const auto &e : spec.check_events) {
        out << "check event " << e.str() << "\n";
    }
    if (spec.check_given) {
        out << "check given " << spec.check_given->str() << "\n";
    }
    return out.str();
}

}  // namespace friendsim

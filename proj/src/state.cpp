#include "friendsim/state.hpp"

#include <algorithm>
#include <set>

namespace friendsim {

namespace {

struct ResolvedComponent {
    Assignment labels;  // label index per basis subsystem
    RadicalScalar coefficient;
};

struct ResolvedVector {
    std::vector<ResolvedComponent> components;
};

std::vector<std::size_t> resolve_subsystems(const Basis &basis, const SystemSpec &system) {
    std::vector<std::size_t> out;
    out.reserve(basis.subsystems.size());
    for (const auto &name : basis.subsystems) {
        out.push_back(system.index_of(name));
    }
    return out;
}

ResolvedVector resolve_vector(const BasisVectorDef &vector, std::span<const std::size_t> idx,
                              const SystemSpec &system) {
    ResolvedVector out;
    for (const auto &component : vector.components) {
        ResolvedComponent rc;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            rc.labels.push_back(system.label_of(idx[i], component.labels.at(i)));
        }
        rc.coefficient = component.coefficient;
        out.components.push_back(std::move(rc));
    }
    return out;
}

bool matches(const Assignment &full, std::span<const std::size_t> idx, const Assignment &labels) {
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (full[idx[i]] != labels[i]) {
            return false;
        }
    }
    return true;
}

std::vector<std::size_t> sorted_copy(std::span<const std::size_t> idx) {
    std::vector<std::size_t> out(idx.begin(), idx.end());
    std::sort(out.begin(), out.end());
    return out;
}

Assignment reduce(const Assignment &full, std::span<const std::size_t> sorted_removed) {
    Assignment out;
    out.reserve(full.size() - sorted_removed.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < full.size(); ++i) {
        if (k < sorted_removed.size() && sorted_removed[k] == i) {
            ++k;
            continue;
        }
        out.push_back(full[i]);
    }
    return out;
}

Assignment expand(const Assignment &reduced, std::span<const std::size_t> idx, const Assignment &labels,
                  std::size_t full_size) {
    Assignment out(full_size, 0);
    std::vector<bool> taken(full_size, false);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out[idx[i]] = labels[i];
        taken[idx[i]] = true;
    }
    std::size_t k = 0;
    for (std::size_t i = 0; i < full_size; ++i) {
        if (!taken[i]) {
            out[i] = reduced[k++];
        }
    }
    return out;
}

std::set<std::size_t> event_registers(const EventAtom &atom, const SystemSpec &system) {
    std::set<std::size_t> regs;
    if (const auto *label = std::get_if<LabelAtom>(&atom)) {
        regs.insert(system.index_of(label->reg));
    } else {
        for (const auto &name : std::get<BasisAtom>(atom).basis.subsystems) {
            regs.insert(system.index_of(name));
        }
    }
    return regs;
}

StateVector project_label(const StateVector &state, std::size_t reg, std::uint32_t label) {
    StateVector::TermMap kept;
    for (const auto &[assignment, coefficient] : state.terms()) {
        if (assignment[reg] == label) {
            kept.emplace(assignment, coefficient);
        }
    }
    return StateVector(state.system_ptr(), std::move(kept));
}

StateVector project_basis_vector(const StateVector &state, const Basis &basis, const BasisVectorDef &vector) {
    const auto idx = resolve_subsystems(basis, state.system());
    const auto resolved = resolve_vector(vector, idx, state.system());
    // Amplitude of <b| on the subsystems, keyed by the rest of the assignment
    // (subsystem positions masked to 0).
    std::map<Assignment, RadicalScalar> overlap;
    for (const auto &[assignment, coefficient] : state.terms()) {
        for (const auto &component : resolved.components) {
            if (matches(assignment, idx, component.labels)) {
                Assignment key = assignment;
                for (auto i : idx) {
                    key[i] = 0;
                }
                overlap[key] += component.coefficient * coefficient;
            }
        }
    }
    StateVector out(state.system_ptr());
    for (const auto &[key, amplitude] : overlap) {
        if (amplitude.is_zero()) {
            continue;
        }
        for (const auto &component : resolved.components) {
            Assignment full = key;
            for (std::size_t i = 0; i < idx.size(); ++i) {
                full[idx[i]] = component.labels[i];
            }
            out.add(full, component.coefficient * amplitude);
        }
    }
    return out;
}

}  // namespace

std::optional<std::size_t> RegisterSpec::label_index(std::string_view label) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) {
            return i;
        }
    }
    return std::nullopt;
}

std::size_t RegisterSpec::ready_index() const { return *label_index(ready_label.value()); }

SystemSpec::SystemSpec(std::vector<RegisterSpec> registers) : registers_(std::move(registers)) {
    std::set<std::string> names;
    for (const auto &reg : registers_) {
        if (!names.insert(reg.name).second) {
            throw Error(ErrorCode::SemanticError, "duplicate register '" + reg.name + "'");
        }
        if (reg.labels.empty()) {
            throw Error(ErrorCode::SemanticError, "register '" + reg.name + "' has no labels");
        }
        std::set<std::string> labels(reg.labels.begin(), reg.labels.end());
        if (labels.size() != reg.labels.size()) {
            throw Error(ErrorCode::SemanticError, "register '" + reg.name + "' repeats a label");
        }
        if (reg.ready_label && !labels.contains(*reg.ready_label)) {
            throw Error(ErrorCode::SemanticError,
                        "ready label '" + *reg.ready_label + "' is not a label of '" + reg.name + "'");
        }
    }
}

std::optional<std::size_t> SystemSpec::find(std::string_view name) const {
    for (std::size_t i = 0; i < registers_.size(); ++i) {
        if (registers_[i].name == name) {
            return i;
        }
    }
    return std::nullopt;
}

std::size_t SystemSpec::index_of(std::string_view name) const {
    if (auto i = find(name)) {
        return *i;
    }
    throw Error(ErrorCode::UnknownName, "unknown register '" + std::string(name) + "'");
}

std::uint32_t SystemSpec::label_of(std::size_t reg, std::string_view label) const {
    if (auto i = registers_.at(reg).label_index(label)) {
        return static_cast<std::uint32_t>(*i);
    }
    throw Error(ErrorCode::UnknownName,
                "register '" + registers_[reg].name + "' has no label '" + std::string(label) + "'");
}

SystemSpec SystemSpec::without(std::span<const std::size_t> removed) const {
    std::vector<RegisterSpec> kept;
    for (std::size_t i = 0; i < registers_.size(); ++i) {
        if (std::find(removed.begin(), removed.end(), i) == removed.end()) {
            kept.push_back(registers_[i]);
        }
    }
    return SystemSpec(std::move(kept));
}

StateVector::StateVector(std::shared_ptr<const SystemSpec> system) : system_(std::move(system)) {}

StateVector::StateVector(std::shared_ptr<const SystemSpec> system, TermMap terms) : system_(std::move(system)) {
    for (auto &[assignment, coefficient] : terms) {
        add(assignment, coefficient);
    }
}

RadicalScalar StateVector::coefficient(const Assignment &assignment) const {
    auto it = terms_.find(assignment);
    return it == terms_.end() ? RadicalScalar{} : it->second;
}

Assignment StateVector::assign(std::initializer_list<std::pair<std::string_view, std::string_view>> labels) const {
    Assignment out(system_->size());
    std::vector<bool> set(system_->size(), false);
    for (const auto &[reg, label] : labels) {
        const auto i = system_->index_of(reg);
        out[i] = system_->label_of(i, label);
        set[i] = true;
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!set[i]) {
            const auto &spec = (*system_)[i];
            if (!spec.ready_label) {
                throw Error(ErrorCode::MissingInit, "register '" + spec.name + "' has no ready label");
            }
            out[i] = static_cast<std::uint32_t>(spec.ready_index());
        }
    }
    return out;
}

void StateVector::add(const Assignment &assignment, const RadicalScalar &coefficient) {
    if (coefficient.is_zero()) {
        return;
    }
    if (assignment.size() != system_->size()) {
        throw Error(ErrorCode::SystemMismatch, "assignment length does not match the register count");
    }
    auto [it, inserted] = terms_.try_emplace(assignment, coefficient);
    if (!inserted) {
        it->second += coefficient;
        if (it->second.is_zero()) {
            terms_.erase(it);
        }
    }
}

StateVector StateVector::scaled(const RadicalScalar &factor) const {
    StateVector out(system_);
    for (const auto &[assignment, coefficient] : terms_) {
        out.add(assignment, coefficient * factor);
    }
    return out;
}

StateVector StateVector::operator+(const StateVector &other) const {
    if (!(system() == other.system())) {
        throw Error(ErrorCode::SystemMismatch, "cannot add states over different systems");
    }
    StateVector out = *this;
    for (const auto &[assignment, coefficient] : other.terms_) {
        out.add(assignment, coefficient);
    }
    return out;
}

StateVector StateVector::operator-(const StateVector &other) const { return *this + other.scaled(-1); }

std::string StateVector::render() const {
    std::string out;
    for (const auto &[assignment, coefficient] : terms_) {
        std::string coeff = coefficient.str();
        if (!coefficient.is_monomial()) {
            coeff = "(" + coeff + ")";
        }
        out += coeff + " · |";
        for (std::size_t i = 0; i < assignment.size(); ++i) {
            if (i != 0) {
                out += ",";
            }
            out += (*system_)[i].labels[assignment[i]];
        }
        out += "⟩\n";
    }
    return out;
}

bool operator==(const StateVector &a, const StateVector &b) {
    return (a.system_ == b.system_ || *a.system_ == *b.system_) && a.terms_ == b.terms_;
}

const BasisVectorDef *Basis::find(std::string_view vector) const {
    for (const auto &v : vectors) {
        if (v.name == vector) {
            return &v;
        }
    }
    return nullptr;
}

void validate_basis(const Basis &basis, const SystemSpec &system) {
    auto fail = [&](const std::string &why) {
        throw Error(ErrorCode::InvalidBasis, "basis '" + basis.name + "': " + why);
    };
    if (basis.subsystems.empty()) {
        fail("no subsystems");
    }
    if (basis.vectors.empty()) {
        fail("no vectors");
    }
    std::set<std::string> subs;
    for (const auto &name : basis.subsystems) {
        if (!system.find(name)) {
            fail("unknown register '" + name + "'");
        }
        if (!subs.insert(name).second) {
            fail("register '" + name + "' listed twice");
        }
    }
    const auto idx = resolve_subsystems(basis, system);
    std::vector<std::map<Assignment, RadicalScalar>> dense;
    std::set<std::string> names;
    for (const auto &vector : basis.vectors) {
        if (!names.insert(vector.name).second) {
            fail("vector '" + vector.name + "' declared twice");
        }
        std::map<Assignment, RadicalScalar> components;
        for (const auto &component : vector.components) {
            if (component.labels.size() != idx.size()) {
                fail("vector '" + vector.name + "' has a component of the wrong length");
            }
            Assignment labels;
            for (std::size_t i = 0; i < idx.size(); ++i) {
                auto label = system[idx[i]].label_index(component.labels[i]);
                if (!label) {
                    fail("register '" + system[idx[i]].name + "' has no label '" + component.labels[i] + "'");
                }
                labels.push_back(static_cast<std::uint32_t>(*label));
            }
            if (!components.emplace(labels, component.coefficient).second) {
                fail("vector '" + vector.name + "' repeats a component");
            }
        }
        RadicalScalar norm;
        for (const auto &[labels, c] : components) {
            norm += c * c;
        }
        if (!(norm == RadicalScalar(1))) {
            fail("vector '" + vector.name + "' has squared norm " + norm.str() + ", not 1");
        }
        dense.push_back(std::move(components));
    }
    for (std::size_t i = 0; i < dense.size(); ++i) {
        for (std::size_t j = i + 1; j < dense.size(); ++j) {
            RadicalScalar overlap;
            for (const auto &[labels, c] : dense[i]) {
                if (auto it = dense[j].find(labels); it != dense[j].end()) {
                    overlap += c * it->second;
                }
            }
            if (!overlap.is_zero()) {
                fail("vectors '" + basis.vectors[i].name + "' and '" + basis.vectors[j].name +
                     "' are not orthogonal (overlap " + overlap.str() + ")");
            }
        }
    }
}

Basis computational_basis(const SystemSpec &system, std::string_view reg) {
    const auto &spec = system[system.index_of(reg)];
    Basis basis{spec.name, {spec.name}, {}};
    for (const auto &label : spec.labels) {
        if (spec.ready_label && *spec.ready_label == label) {
            continue;
        }
        basis.vectors.push_back({label, {{{label}, RadicalScalar(1)}}});
    }
    return basis;
}

Event Event::label(std::string reg, std::string label) {
    return Event{{LabelAtom{std::move(reg), std::move(label)}}};
}

Event Event::operator&(const Event &other) const {
    Event out = *this;
    out.atoms.insert(out.atoms.end(), other.atoms.begin(), other.atoms.end());
    return out;
}

std::string Event::str() const {
    std::string out;
    for (const auto &atom : atoms) {
        if (!out.empty()) {
            out += " & ";
        }
        if (const auto *label = std::get_if<LabelAtom>(&atom)) {
            out += label->reg + "=" + label->label;
        } else {
            const auto &basis = std::get<BasisAtom>(atom);
            out += basis.basis.name + ":" + basis.vector;
        }
    }
    return out;
}

void validate_event(const Event &event, const SystemSpec &system) {
    if (event.atoms.empty()) {
        throw Error(ErrorCode::InvalidEvent, "empty event");
    }
    std::set<std::size_t> used;
    for (const auto &atom : event.atoms) {
        if (const auto *label = std::get_if<LabelAtom>(&atom)) {
            system.label_of(system.index_of(label->reg), label->label);
        } else {
            const auto &basis = std::get<BasisAtom>(atom);
            validate_basis(basis.basis, system);
            if (!basis.basis.find(basis.vector)) {
                throw Error(ErrorCode::UnknownName,
                            "basis '" + basis.basis.name + "' has no vector '" + basis.vector + "'");
            }
        }
        for (auto reg : event_registers(atom, system)) {
            if (!used.insert(reg).second) {
                throw Error(ErrorCode::InvalidEvent, "event '" + event.str() + "' constrains register '" +
                                                         system[reg].name + "' more than once");
            }
        }
    }
}

StateVector build_initial(std::shared_ptr<const SystemSpec> system,
                          std::span<const std::pair<std::string, Superposition>> inits) {
    const auto n = system->size();
    std::vector<std::optional<std::map<std::uint32_t, RadicalScalar>>> per_register(n);
    for (const auto &[name, superposition] : inits) {
        const auto i = system->index_of(name);
        if (per_register[i]) {
            throw Error(ErrorCode::SemanticError, "register '" + name + "' initialized twice");
        }
        std::map<std::uint32_t, RadicalScalar> amplitudes;
        for (const auto &[label, amplitude] : superposition) {
            amplitudes[system->label_of(i, label)] += amplitude;
        }
        RadicalScalar norm;
        for (const auto &[label, amplitude] : amplitudes) {
            norm += amplitude * amplitude;
        }
        if (!(norm == RadicalScalar(1))) {
            throw Error(ErrorCode::NonUnitInit,
                        "initial superposition of '" + name + "' has squared norm " + norm.str() + ", not 1");
        }
        per_register[i] = std::move(amplitudes);
    }
    StateVector::TermMap partial{{Assignment{}, RadicalScalar(1)}};
    for (std::size_t i = 0; i < n; ++i) {
        std::map<std::uint32_t, RadicalScalar> factor;
        if (per_register[i]) {
            factor = *per_register[i];
        } else if ((*system)[i].ready_label) {
            factor.emplace(static_cast<std::uint32_t>((*system)[i].ready_index()), RadicalScalar(1));
        } else {
            throw Error(ErrorCode::MissingInit,
                        "register '" + (*system)[i].name + "' has no initial value and no ready label");
        }
        StateVector::TermMap next;
        for (const auto &[prefix, c] : partial) {
            for (const auto &[label, amplitude] : factor) {
                if (amplitude.is_zero()) {
                    continue;
                }
                Assignment extended = prefix;
                extended.push_back(label);
                next.emplace(std::move(extended), c * amplitude);
            }
        }
        partial = std::move(next);
    }
    return StateVector(std::move(system), std::move(partial));
}

RadicalScalar norm_squared(const StateVector &state) {
    RadicalScalar total;
    for (const auto &[assignment, coefficient] : state.terms()) {
        total += coefficient * coefficient;
    }
    return total;
}

RadicalScalar inner_product(const StateVector &a, const StateVector &b) {
    if (!(a.system() == b.system())) {
        throw Error(ErrorCode::SystemMismatch, "inner product of states over different systems");
    }
    RadicalScalar total;
    const auto &small = a.size() <= b.size() ? a : b;
    const auto &large = a.size() <= b.size() ? b : a;
    for (const auto &[assignment, coefficient] : small.terms()) {
        if (auto it = large.terms().find(assignment); it != large.terms().end()) {
            total += coefficient * it->second;
        }
    }
    return total;
}

StateVector project(const StateVector &state, const Event &event) {
    StateVector out = state;
    for (const auto &atom : event.atoms) {
        if (const auto *label = std::get_if<LabelAtom>(&atom)) {
            const auto reg = state.system().index_of(label->reg);
            out = project_label(out, reg, state.system().label_of(reg, label->label));
        } else {
            const auto &basis = std::get<BasisAtom>(atom);
            const auto *vector = basis.basis.find(basis.vector);
            if (!vector) {
                throw Error(ErrorCode::UnknownName,
                            "basis '" + basis.basis.name + "' has no vector '" + basis.vector + "'");
            }
            out = project_basis_vector(out, basis.basis, *vector);
        }
    }
    return out;
}

RadicalScalar probability(const StateVector &state, const Event &event) {
    validate_event(event, state.system());
    return norm_squared(project(state, event));
}

RadicalScalar divide_exact(const RadicalScalar &numerator, const RadicalScalar &divisor, ErrorCode code) {
    if (!divisor.is_monomial()) {
        throw Error(code, "cannot divide exactly by " + divisor.str());
    }
    return numerator * divisor.invert_monomial();
}

RadicalScalar conditional_probability(const StateVector &state, const Event &given, const Event &query) {
    validate_event(given, state.system());
    validate_event(query, state.system());
    const auto conditioned = project(state, given);
    const auto p_given = norm_squared(conditioned);
    if (p_given.is_zero()) {
        throw Error(ErrorCode::ZeroCondition, "conditioning event '" + given.str() + "' has probability 0");
    }
    const auto p_joint = norm_squared(project(conditioned, query));
    return divide_exact(p_joint, p_given, ErrorCode::NonMonomialDivision);
}

Decomposition decompose(const StateVector &state, const Basis &basis) {
    const auto &system = state.system();
    Decomposition parts;
    parts.subsystem_indices = resolve_subsystems(basis, system);
    const auto removed = sorted_copy(parts.subsystem_indices);
    const auto reduced = std::make_shared<const SystemSpec>(system.without(removed));
    StateVector reconstructed(state.system_ptr());
    for (const auto &vector : basis.vectors) {
        const auto resolved = resolve_vector(vector, parts.subsystem_indices, system);
        StateVector branch(reduced);
        for (const auto &[assignment, coefficient] : state.terms()) {
            for (const auto &component : resolved.components) {
                if (matches(assignment, parts.subsystem_indices, component.labels)) {
                    branch.add(reduce(assignment, removed), component.coefficient * coefficient);
                }
            }
        }
        reconstructed = reconstructed + attach(state, vector, parts.subsystem_indices, branch);
        parts.branches.push_back({vector.name, std::move(branch)});
    }
    parts.residual = state - reconstructed;
    return parts;
}

StateVector attach(const StateVector &like, const BasisVectorDef &vector,
                   std::span<const std::size_t> subsystem_indices, const StateVector &branch) {
    const auto &system = like.system();
    const auto resolved = resolve_vector(vector, subsystem_indices, system);
    StateVector out(like.system_ptr());
    for (const auto &[rest, amplitude] : branch.terms()) {
        for (const auto &component : resolved.components) {
            out.add(expand(rest, subsystem_indices, component.labels, system.size()),
                    component.coefficient * amplitude);
        }
    }
    return out;
}

StateVector recompose(const StateVector &like, const Basis &basis, const Decomposition &parts) {
    StateVector out = parts.residual;
    for (const auto &branch : parts.branches) {
        const auto *vector = basis.find(branch.vector);
        if (!vector) {
            throw Error(ErrorCode::UnknownName, "basis '" + basis.name + "' has no vector '" + branch.vector + "'");
        }
        out = out + attach(like, *vector, parts.subsystem_indices, branch.state);
    }
    return out;
}

}  // namespace friendsim

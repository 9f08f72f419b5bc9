#pragma once

#include "friendsim/error.hpp"
#include "friendsim/radical.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace friendsim {

/// A finite register: an agent's memory, a coin, a spin. The optional ready
/// label marks "not yet set" and is what recorders must hold before a
/// measurement writes into them.
struct RegisterSpec {
    std::string name;
    std::vector<std::string> labels;
    std::optional<std::string> ready_label;

    std::optional<std::size_t> label_index(std::string_view label) const;
    std::size_t ready_index() const;  // requires ready_label

    friend bool operator==(const RegisterSpec &, const RegisterSpec &) = default;
};

/// Ordered register set. The order is the canonical term ordering for every
/// state over this system.
class SystemSpec {
public:
    SystemSpec() = default;
    explicit SystemSpec(std::vector<RegisterSpec> registers);

    const std::vector<RegisterSpec> &registers() const noexcept { return registers_; }
    std::size_t size() const noexcept { return registers_.size(); }
    const RegisterSpec &operator[](std::size_t i) const { return registers_[i]; }

    std::optional<std::size_t> find(std::string_view name) const;
    std::size_t index_of(std::string_view name) const;  // throws UnknownName
    std::uint32_t label_of(std::size_t reg, std::string_view label) const;  // throws UnknownName

    /// The same registers minus the given (sorted, unique) indices.
    SystemSpec without(std::span<const std::size_t> removed) const;

    friend bool operator==(const SystemSpec &, const SystemSpec &) = default;

private:
    std::vector<RegisterSpec> registers_;
};

using Assignment = std::vector<std::uint32_t>;  // label index per register, in register order

/// Weighted label superposition for a single register.
struct LabelAmplitude {
    std::string label;
    RadicalScalar amplitude;
    friend bool operator==(const LabelAmplitude &, const LabelAmplitude &) = default;
};
using Superposition = std::vector<LabelAmplitude>;

/// Pure state as a sparse sum of product terms. Terms are kept merged and
/// free of zero coefficients.
class StateVector {
public:
    using TermMap = std::map<Assignment, RadicalScalar>;

    StateVector() : StateVector(std::make_shared<const SystemSpec>()) {}
    explicit StateVector(std::shared_ptr<const SystemSpec> system);
    StateVector(std::shared_ptr<const SystemSpec> system, TermMap terms);

    const SystemSpec &system() const noexcept { return *system_; }
    const std::shared_ptr<const SystemSpec> &system_ptr() const noexcept { return system_; }
    const TermMap &terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    /// Coefficient of an assignment, zero when absent.
    RadicalScalar coefficient(const Assignment &assignment) const;

    /// Builds an assignment from register=label pairs; registers not listed
    /// take their ready label.
    Assignment assign(std::initializer_list<std::pair<std::string_view, std::string_view>> labels) const;

    void add(const Assignment &assignment, const RadicalScalar &coefficient);

    StateVector scaled(const RadicalScalar &factor) const;
    StateVector operator+(const StateVector &other) const;
    StateVector operator-(const StateVector &other) const;

    /// One line per term: `coeff · |label,label,…⟩`, terms in assignment order.
    std::string render() const;

    friend bool operator==(const StateVector &a, const StateVector &b);

private:
    std::shared_ptr<const SystemSpec> system_;
    TermMap terms_;
};

struct BasisComponent {
    std::vector<std::string> labels;  // one per basis subsystem
    RadicalScalar coefficient;
    friend bool operator==(const BasisComponent &, const BasisComponent &) = default;
};

struct BasisVectorDef {
    std::string name;
    std::vector<BasisComponent> components;
    friend bool operator==(const BasisVectorDef &, const BasisVectorDef &) = default;
};

/// Named orthonormal set over a list of registers. It need not span the whole
/// subsystem space; measurements check that the state lies in its span.
struct Basis {
    std::string name;
    std::vector<std::string> subsystems;
    std::vector<BasisVectorDef> vectors;

    const BasisVectorDef *find(std::string_view vector) const;

    friend bool operator==(const Basis &, const Basis &) = default;
};

/// Checks labels, tuple shapes, unit norm and exact pairwise orthogonality.
/// Throws InvalidBasis.
void validate_basis(const Basis &basis, const SystemSpec &system);

/// The label basis of one register, without its ready label. Vector names are
/// the labels themselves.
Basis computational_basis(const SystemSpec &system, std::string_view reg);

struct LabelAtom {
    std::string reg;
    std::string label;
    friend bool operator==(const LabelAtom &, const LabelAtom &) = default;
};

struct BasisAtom {
    Basis basis;
    std::string vector;
    friend bool operator==(const BasisAtom &, const BasisAtom &) = default;
};

using EventAtom = std::variant<LabelAtom, BasisAtom>;

/// Conjunction of atoms over disjoint registers.
struct Event {
    std::vector<EventAtom> atoms;

    static Event label(std::string reg, std::string label);
    Event operator&(const Event &other) const;

    /// `reg=label & basis:vector`
    std::string str() const;

    friend bool operator==(const Event &, const Event &) = default;
};

void validate_event(const Event &event, const SystemSpec &system);

StateVector build_initial(std::shared_ptr<const SystemSpec> system,
                          std::span<const std::pair<std::string, Superposition>> inits);

RadicalScalar norm_squared(const StateVector &state);
RadicalScalar inner_product(const StateVector &a, const StateVector &b);

/// Unnormalized projection of the state onto the event.
StateVector project(const StateVector &state, const Event &event);

RadicalScalar probability(const StateVector &state, const Event &event);
RadicalScalar conditional_probability(const StateVector &state, const Event &given, const Event &query);

struct Branch {
    std::string vector;
    StateVector state;  // over the system without the basis subsystems
};

struct Decomposition {
    std::vector<std::size_t> subsystem_indices;  // positions of the basis registers in the full system
    std::vector<Branch> branches;                 // one per basis vector, in basis order
    StateVector residual;                         // over the full system
};

/// Writes the state as sum_i |b_i> (x) branch_i + residual.
Decomposition decompose(const StateVector &state, const Basis &basis);

/// |vector> (x) branch, expanded into the full system.
StateVector attach(const StateVector &like, const BasisVectorDef &vector,
                   std::span<const std::size_t> subsystem_indices, const StateVector &branch);

/// Inverse of decompose: sum of attached branches plus residual.
StateVector recompose(const StateVector &like, const Basis &basis, const Decomposition &parts);

/// Divides by a monomial, raising `code` when the divisor is not one.
RadicalScalar divide_exact(const RadicalScalar &numerator, const RadicalScalar &divisor, ErrorCode code);

}  // namespace friendsim

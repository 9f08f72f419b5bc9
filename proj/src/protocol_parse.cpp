#include "friendsim/protocol.hpp"

#include <cctype>
#include <set>

namespace friendsim {

namespace {

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

/*
 * Hand-written recursive-descent reader over the raw text. Statements are
 * keyword-led, so newlines are ordinary whitespace; `#` starts a comment
 * that runs to the end of the line.
 */
class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    struct Mark {
        std::size_t pos, line, column;
    };

    Mark mark() const { return {pos_, line_, column_}; }

    [[noreturn]] void fail(const std::string &message) const { fail_at(mark(), message); }

    [[noreturn]] static void fail_at(const Mark &at, const std::string &message) {
        throw ParseError(ErrorCode::SyntaxError, at.line, at.column, message);
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    advance();
                }
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }

    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            advance();
            return true;
        }
        return false;
    }

    bool accept(std::string_view token) {
        skip_space();
        if (text_.substr(pos_, token.size()) == token) {
            for (std::size_t i = 0; i < token.size(); ++i) {
                advance();
            }
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'" + found());
        }
    }

    void expect(std::string_view token) {
        if (!accept(token)) {
            fail("expected '" + std::string(token) + "'" + found());
        }
    }

    /// Identifier-like word: letters, digits, '_' and inner '-' (as in
    /// "no-light" or "fbar-collapse"). A '-' ends the word unless a word
    /// character follows it, so "ok->" reads as "ok" then "->".
    std::optional<std::string> try_word() {
        skip_space();
        std::size_t end = pos_;
        while (end < text_.size()) {
            if (word_char(text_[end])) {
                ++end;
            } else if (text_[end] == '-' && end > pos_ && end + 1 < text_.size() && word_char(text_[end + 1])) {
                ++end;
            } else {
                break;
            }
        }
        if (end == pos_) {
            return std::nullopt;
        }
        std::string out(text_.substr(pos_, end - pos_));
        while (pos_ < end) {
            advance();
        }
        return out;
    }

    std::string word(std::string_view what) {
        if (auto w = try_word()) {
            return *w;
        }
        fail("expected " + std::string(what) + found());
    }

    void keyword(std::string_view kw) {
        const auto at = mark();
        auto w = try_word();
        if (!w || *w != kw) {
            fail_at(at, "expected '" + std::string(kw) + "'" + (w ? ", found '" + *w + "'" : found()));
        }
    }

    bool peek_keyword(std::string_view kw) {
        const auto saved = mark();
        auto w = try_word();
        restore(saved);
        return w && *w == kw;
    }

    std::optional<BigInt> try_integer() {
        skip_space();
        std::size_t end = pos_;
        while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) {
            ++end;
        }
        if (end == pos_ || (end < text_.size() && word_char(text_[end]))) {
            return std::nullopt;
        }
        BigInt value(std::string(text_.substr(pos_, end - pos_)));
        while (pos_ < end) {
            advance();
        }
        return value;
    }

    void restore(const Mark &m) {
        pos_ = m.pos;
        line_ = m.line;
        column_ = m.column;
    }

    std::string found() {
        if (at_end()) {
            return ", found end of input";
        }
        return std::string(", found '") + text_[pos_] + "'";
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else if ((static_cast<unsigned char>(text_[pos_]) & 0xC0) != 0x80) {
            ++column_;  // count code points, not UTF-8 continuation bytes
        }
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

using Ket = std::vector<std::string>;
using KetTerms = std::vector<std::pair<Ket, RadicalScalar>>;

class ProtocolParser {
public:
    explicit ProtocolParser(std::string_view text) : in_(text) {}

    ProtocolSpec parse() {
        if (in_.at_end()) {
            in_.fail("empty protocol");
        }
        while (!in_.at_end()) {
            statement();
        }
        const auto end = in_.mark();
        seal_registers(end);
        try {
            build_initial(spec_.system, spec_.initial);
        } catch (const Error &e) {
            throw ParseError(ErrorCode::SemanticError, end.line, end.column, e.what());
        }
        return std::move(spec_);
    }

private:
    void statement() {
        const auto at = in_.mark();
        const auto kw = in_.word("statement keyword");
        try {
            if (kw == "register") {
                register_decl(at);
            } else {
                seal_registers(at);
                if (kw == "init") {
                    init_decl();
                } else if (kw == "basis") {
                    basis_decl();
                } else if (kw == "step") {
                    step_decl();
                } else if (kw == "perspective") {
                    perspective_decl();
                } else if (kw == "query") {
                    query_decl();
                } else if (kw == "check") {
                    check_decl();
                } else {
                    Reader::fail_at(at, "unknown statement '" + kw + "'");
                }
            }
        } catch (const ParseError &) {
            throw;
        } catch (const Error &e) {
            throw ParseError(ErrorCode::SemanticError, at.line, at.column, e.what());
        }
    }

    void seal_registers(const Reader::Mark &at) {
        if (sealed_) {
            return;
        }
        if (registers_.empty()) {
            Reader::fail_at(at, "protocol declares no registers");
        }
        try {
            spec_.system = std::make_shared<const SystemSpec>(std::move(registers_));
        } catch (const Error &e) {
            throw ParseError(ErrorCode::SemanticError, at.line, at.column, e.what());
        }
        sealed_ = true;
    }

    void register_decl(const Reader::Mark &at) {
        if (sealed_) {
            throw ParseError(ErrorCode::SemanticError, at.line, at.column,
                             "registers must be declared before any other statement");
        }
        RegisterSpec reg;
        reg.name = in_.word("register name");
        in_.expect('{');
        while (!in_.accept('}')) {
            reg.labels.push_back(in_.word("label"));
        }
        if (in_.peek_keyword("ready")) {
            in_.keyword("ready");
            reg.ready_label = in_.word("ready label");
        }
        registers_.push_back(std::move(reg));
    }

    // ---- scalars -----------------------------------------------------------

    RadicalScalar factor() {
        if (in_.accept('-')) {
            return -factor();
        }
        if (in_.accept('(')) {
            auto value = sum();
            in_.expect(')');
            return value;
        }
        const auto at = in_.mark();
        if (auto n = in_.try_integer()) {
            return RadicalScalar(Rational(*n));
        }
        if (in_.peek_keyword("sqrt")) {
            in_.keyword("sqrt");
            in_.expect('(');
            const auto arg_at = in_.mark();
            auto n = in_.try_integer();
            if (!n) {
                in_.fail("expected integer radicand");
            }
            if (*n < 1 || *n > BigInt(std::numeric_limits<RadicalScalar::Radicand>::max())) {
                Reader::fail_at(arg_at, "radicand must be a positive 64-bit integer");
            }
            in_.expect(')');
            return RadicalScalar::sqrt_int(n->convert_to<RadicalScalar::Radicand>());
        }
        Reader::fail_at(at, "expected scalar" + in_.found());
    }

    RadicalScalar product() {
        auto value = factor();
        for (;;) {
            if (in_.peek() == '*') {
                const auto saved = in_.mark();
                in_.accept('*');
                if (in_.peek() == '|') {
                    in_.restore(saved);
                    return value;
                }
                value = value * factor();
            } else if (in_.peek() == '/') {
                in_.accept('/');
                const auto at = in_.mark();
                const auto divisor = factor();
                if (!divisor.is_monomial()) {
                    throw ParseError(ErrorCode::SemanticError, at.line, at.column,
                                     "divisor " + divisor.str() + " is not a single radical term");
                }
                value = value * divisor.invert_monomial();
            } else {
                return value;
            }
        }
    }

    RadicalScalar sum() {
        RadicalScalar value;
        bool negative = false;
        if (in_.accept('-')) {
            negative = true;
        } else {
            in_.accept('+');
        }
        value = negative ? -product() : product();
        for (;;) {
            if (in_.accept('+')) {
                value += product();
            } else if (in_.peek() == '-') {
                in_.accept('-');
                value -= product();
            } else {
                return value;
            }
        }
    }

    Ket ket() {
        in_.expect('|');
        Ket labels{in_.word("label")};
        while (in_.accept(',')) {
            labels.push_back(in_.word("label"));
        }
        in_.expect('>');
        return labels;
    }

    /// `[scalar] |a,b> (+|-) [scalar] |c,d> ...`
    KetTerms ket_terms() {
        KetTerms terms;
        bool first = true;
        for (;;) {
            RadicalScalar sign(1);
            if (in_.peek() == '-') {
                in_.accept('-');
                sign = RadicalScalar(-1);
            } else if (in_.peek() == '+') {
                in_.accept('+');
            } else if (!first) {
                return terms;
            }
            first = false;
            RadicalScalar coefficient(1);
            if (in_.peek() != '|') {
                coefficient = product();
                in_.accept('*');
            }
            terms.emplace_back(ket(), sign * coefficient);
        }
    }

    Superposition single_register_terms(const std::string &reg) {
        const auto at = in_.mark();
        Superposition out;
        for (auto &[labels, coefficient] : ket_terms()) {
            if (labels.size() != 1) {
                Reader::fail_at(at, "expected single-label kets for register '" + reg + "'");
            }
            out.push_back({labels.front(), coefficient});
        }
        return out;
    }

    // ---- statements --------------------------------------------------------

    void init_decl() {
        const auto reg = in_.word("register name");
        in_.expect('=');
        auto superposition = single_register_terms(reg);
        spec_.initial.emplace_back(reg, std::move(superposition));
        check_init_entry(spec_, spec_.initial.size() - 1);
    }

    void basis_decl() {
        Basis basis;
        basis.name = in_.word("basis name");
        in_.keyword("on");
        basis.subsystems.push_back(in_.word("register name"));
        while (in_.accept(',')) {
            basis.subsystems.push_back(in_.word("register name"));
        }
        in_.expect('{');
        while (!in_.accept('}')) {
            BasisVectorDef vector;
            vector.name = in_.word("basis vector name");
            in_.expect('=');
            for (auto &[labels, coefficient] : ket_terms()) {
                vector.components.push_back({std::move(labels), coefficient});
            }
            basis.vectors.push_back(std::move(vector));
            if (!in_.accept(';') && in_.peek() != '}') {
                in_.fail("expected ';' or '}'" + in_.found());
            }
        }
        spec_.bases.push_back(std::move(basis));
        check_basis(spec_, spec_.bases.back());
    }

    void step_decl() {
        Step step;
        step.id = in_.word("step id");
        const auto kind_at = in_.mark();
        const auto kind = in_.word("step kind");
        if (kind == "measure") {
            MeasureStep m;
            m.basis = in_.word("basis name");
            in_.keyword("recorder");
            m.recorder = in_.word("recorder register");
            in_.keyword("outcomes");
            in_.expect('{');
            while (!in_.accept('}')) {
                auto vector = in_.word("basis vector name");
                in_.expect("->");
                auto label = in_.word("recorder label");
                m.outcomes.emplace_back(std::move(vector), std::move(label));
                if (!in_.accept(';') && in_.peek() != '}') {
                    in_.fail("expected ';' or '}'" + in_.found());
                }
            }
            if (in_.peek_keyword("collapse")) {
                in_.keyword("collapse");
                m.default_collapse = in_.word("basis vector name");
            }
            step.action = std::move(m);
        } else if (kind == "prepare") {
            PrepareStep p;
            p.target = in_.word("target register");
            in_.keyword("by");
            p.control = in_.word("control register");
            in_.expect('{');
            while (!in_.accept('}')) {
                PrepareRule rule;
                rule.control_label = in_.word("control label");
                in_.expect("->");
                rule.target = single_register_terms(p.target);
                p.rules.push_back(std::move(rule));
                if (!in_.accept(';') && in_.peek() != '}') {
                    in_.fail("expected ';' or '}'" + in_.found());
                }
            }
            step.action = std::move(p);
        } else if (kind == "postselect") {
            step.action = PostselectStep{event()};
        } else {
            Reader::fail_at(kind_at, "unknown step kind '" + kind + "'");
        }
        spec_.steps.push_back(std::move(step));
        check_step(spec_, spec_.steps.size() - 1);
    }

    void perspective_decl() {
        Perspective p;
        p.name = in_.word("perspective name");
        in_.expect('{');
        while (!in_.accept('}')) {
            auto id = in_.word("step id");
            in_.keyword("collapse");
            auto outcome = in_.word("basis vector name");
            p.overrides.emplace_back(std::move(id), std::move(outcome));
            if (!in_.accept(';') && in_.peek() != '}') {
                in_.fail("expected ';' or '}'" + in_.found());
            }
        }
        for (const auto &other : spec_.perspectives) {
            if (other.name == p.name) {
                throw Error(ErrorCode::SemanticError, "perspective '" + p.name + "' declared twice");
            }
        }
        validate_perspective(spec_, p);
        spec_.perspectives.push_back(std::move(p));
    }

    void query_decl() {
        Query q;
        in_.keyword("at");
        q.at = in_.word("step id");
        in_.keyword("probability");
        q.event = event();
        if (in_.peek_keyword("given")) {
            in_.keyword("given");
            q.given = event();
        }
        spec_.queries.push_back(std::move(q));
        check_query(spec_, spec_.queries.back());
    }

    void check_decl() {
        const auto at = in_.mark();
        const auto what = in_.word("'event' or 'given'");
        if (what == "event") {
            spec_.check_events.push_back(event());
            validate_event(spec_.check_events.back(), *spec_.system);
        } else if (what == "given") {
            if (spec_.check_given) {
                throw Error(ErrorCode::SemanticError, "check condition declared twice");
            }
            spec_.check_given = event();
            validate_event(*spec_.check_given, *spec_.system);
        } else {
            Reader::fail_at(at, "expected 'event' or 'given', found '" + what + "'");
        }
    }

    Event event() {
        Event e;
        do {
            const auto subject = in_.word("register or basis name");
            if (in_.accept('=')) {
                e.atoms.emplace_back(LabelAtom{subject, in_.word("label")});
            } else if (in_.accept(':')) {
                e.atoms.emplace_back(BasisAtom{spec_.basis(subject), in_.word("basis vector name")});
            } else {
                in_.fail("expected '=' or ':' in event atom" + in_.found());
            }
        } while (in_.accept('&'));
        return e;
    }

public:
    static void check_init_entry(const ProtocolSpec &spec, std::size_t index) {
        const auto &[name, superposition] = spec.initial[index];
        for (std::size_t i = 0; i < index; ++i) {
            if (spec.initial[i].first == name) {
                throw Error(ErrorCode::SemanticError, "register '" + name + "' initialized twice");
            }
        }
        // A one-register initial state checks labels and the unit norm.
        const auto i = spec.system->index_of(name);
        auto single = std::make_shared<const SystemSpec>(std::vector<RegisterSpec>{(*spec.system)[i]});
        build_initial(single, std::span(&spec.initial[index], 1));
    }

    static void check_basis(const ProtocolSpec &spec, const Basis &basis) {
        if (spec.system->find(basis.name)) {
            throw Error(ErrorCode::SemanticError, "basis '" + basis.name + "' shadows a register name");
        }
        std::size_t count = 0;
        for (const auto &b : spec.bases) {
            count += b.name == basis.name ? 1 : 0;
        }
        if (count > 1) {
            throw Error(ErrorCode::SemanticError, "basis '" + basis.name + "' declared twice");
        }
        validate_basis(basis, *spec.system);
    }

    static void check_step(const ProtocolSpec &spec, std::size_t index) {
        const auto &step = spec.steps[index];
        if (step.id == kInitialStepId) {
            throw Error(ErrorCode::SemanticError, "step id '" + step.id + "' is reserved");
        }
        for (std::size_t i = 0; i < index; ++i) {
            if (spec.steps[i].id == step.id) {
                throw Error(ErrorCode::SemanticError, "step id '" + step.id + "' used twice");
            }
        }
        const auto &system = *spec.system;
        if (const auto *m = std::get_if<MeasureStep>(&step.action)) {
            const auto basis = spec.basis(m->basis);
            const auto rec = system.index_of(m->recorder);
            if (!system[rec].ready_label) {
                throw Error(ErrorCode::SemanticError, "recorder '" + m->recorder + "' has no ready label");
            }
            std::set<std::string> vectors, labels;
            for (const auto &[vector, label] : m->outcomes) {
                if (!basis.find(vector)) {
                    throw Error(ErrorCode::SemanticError,
                                "basis '" + basis.name + "' has no vector '" + vector + "'");
                }
                system.label_of(rec, label);
                if (label == *system[rec].ready_label) {
                    throw Error(ErrorCode::SemanticError, "outcome '" + vector + "' maps to the ready label");
                }
                if (!vectors.insert(vector).second || !labels.insert(label).second) {
                    throw Error(ErrorCode::SemanticError, "outcome map of step '" + step.id + "' is not one-to-one");
                }
            }
            for (const auto &vector : basis.vectors) {
                if (!vectors.contains(vector.name)) {
                    throw Error(ErrorCode::SemanticError,
                                "outcome map of step '" + step.id + "' misses vector '" + vector.name + "'");
                }
            }
            if (m->default_collapse && !basis.find(*m->default_collapse)) {
                throw Error(ErrorCode::SemanticError,
                            "basis '" + basis.name + "' has no vector '" + *m->default_collapse + "'");
            }
        } else if (const auto *p = std::get_if<PrepareStep>(&step.action)) {
            const auto tgt = system.index_of(p->target);
            const auto ctl = system.index_of(p->control);
            if (tgt == ctl) {
                throw Error(ErrorCode::SemanticError, "prepare target and control are the same register");
            }
            if (!system[tgt].ready_label) {
                throw Error(ErrorCode::SemanticError, "prepare target '" + p->target + "' has no ready label");
            }
            std::set<std::string> seen;
            for (const auto &rule : p->rules) {
                system.label_of(ctl, rule.control_label);
                if (!seen.insert(rule.control_label).second) {
                    throw Error(ErrorCode::SemanticError, "two rules for '" + rule.control_label + "'");
                }
                RadicalScalar norm;
                std::map<std::uint32_t, RadicalScalar> amplitudes;
                for (const auto &[label, amplitude] : rule.target) {
                    amplitudes[system.label_of(tgt, label)] += amplitude;
                }
                for (const auto &[label, amplitude] : amplitudes) {
                    norm += amplitude * amplitude;
                }
                if (!(norm == RadicalScalar(1))) {
                    throw Error(ErrorCode::SemanticError, "rule for '" + rule.control_label +
                                                              "' has squared norm " + norm.str() + ", not 1");
                }
            }
        } else {
            validate_event(std::get<PostselectStep>(step.action).event, system);
        }
    }

    static void check_query(const ProtocolSpec &spec, const Query &q) {
        if (q.at != kInitialStepId && !spec.find_step(q.at)) {
            throw Error(ErrorCode::SemanticError, "query refers to unknown step '" + q.at + "'");
        }
        validate_event(q.event, *spec.system);
        if (q.given) {
            validate_event(*q.given, *spec.system);
        }
    }

private:
    Reader in_;
    ProtocolSpec spec_;
    std::vector<RegisterSpec> registers_;
    bool sealed_ = false;
};

}  // namespace

ProtocolSpec parse_protocol(std::string_view text) { return ProtocolParser(text).parse(); }

void validate_perspective(const ProtocolSpec &spec, const Perspective &perspective) {
    std::set<std::string> seen;
    for (const auto &[step_id, outcome] : perspective.overrides) {
        const auto *step = spec.find_step(step_id);
        if (!step) {
            throw Error(ErrorCode::SemanticError,
                        "perspective '" + perspective.name + "' overrides unknown step '" + step_id + "'");
        }
        const auto *m = std::get_if<MeasureStep>(&step->action);
        if (!m) {
            throw Error(ErrorCode::SemanticError, "perspective '" + perspective.name + "' overrides step '" +
                                                      step_id + "', which is not a measurement");
        }
        if (!spec.basis(m->basis).find(outcome)) {
            throw Error(ErrorCode::SemanticError,
                        "step '" + step_id + "' has no outcome '" + outcome + "' to collapse to");
        }
        if (!seen.insert(step_id).second) {
            throw Error(ErrorCode::SemanticError,
                        "perspective '" + perspective.name + "' overrides step '" + step_id + "' twice");
        }
    }
}

void validate_protocol(const ProtocolSpec &spec) {
    for (std::size_t i = 0; i < spec.initial.size(); ++i) {
        ProtocolParser::check_init_entry(spec, i);
    }
    build_initial(spec.system, spec.initial);
    for (const auto &basis : spec.bases) {
        ProtocolParser::check_basis(spec, basis);
    }
    for (std::size_t i = 0; i < spec.steps.size(); ++i) {
        ProtocolParser::check_step(spec, i);
    }
    std::set<std::string> names;
    for (const auto &p : spec.perspectives) {
        if (!names.insert(p.name).second) {
            throw Error(ErrorCode::SemanticError, "perspective '" + p.name + "' declared twice");
        }
        validate_perspective(spec, p);
    }
    for (const auto &q : spec.queries) {
        ProtocolParser::check_query(spec, q);
    }
    for (const auto &e : spec.check_events) {
        validate_event(e, *spec.system);
    }
    if (spec.check_given) {
        validate_event(*spec.check_given, *spec.system);
    }
}

}  // namespace friendsim

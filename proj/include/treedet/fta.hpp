#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treedet/bitset.hpp"

namespace treedet {

using SymbolId = uint32_t;
using StateId = uint32_t;

constexpr uint32_t kNoId = UINT32_MAX;

struct Symbol {
    std::string name;
    uint32_t arity = 0;

    bool operator==(const Symbol&) const = default;
};

// Ranked alphabet. Symbols keep declaration order; names are unique
// (overloading one name with several arities is rejected at construction).
class Signature {
public:
    Signature() = default;
    explicit Signature(std::vector<Symbol> symbols);

    SymbolId add(const std::string& name, uint32_t arity);

    const std::vector<Symbol>& symbols() const { return symbols_; }
    const Symbol& at(SymbolId id) const { return symbols_[id]; }
    size_t size() const { return symbols_.size(); }
    uint32_t arity(SymbolId id) const { return symbols_[id].arity; }
    const std::string& name(SymbolId id) const { return symbols_[id].name; }

    std::optional<SymbolId> find(const std::string& name) const;
    uint32_t max_arity() const;

    bool operator==(const Signature&) const = default;

private:
    std::vector<Symbol> symbols_;
};

// Immutable ground term over a signature.
struct Term {
    SymbolId root = 0;
    std::vector<Term> children;

    Term() = default;
    explicit Term(SymbolId r) : root(r) {}
    Term(SymbolId r, std::vector<Term> cs) : root(r), children(std::move(cs)) {}

    bool operator==(const Term&) const = default;

    uint32_t depth() const {
        uint32_t d = 0;
        for (const Term& c : children) d = std::max(d, c.depth());
        return d + 1;  // a constant has depth 1
    }
};

struct Transition {
    SymbolId func = 0;
    std::vector<StateId> args;
    StateId rhs = 0;

    bool operator==(const Transition&) const = default;
};

// Bottom-up finite tree automaton <Q, Q_f, Sigma, Delta>. States carry
// dense indices; display names live in state_names.
struct Fta {
    std::string name = "A";
    Signature sig;
    std::vector<std::string> state_names;
    std::vector<StateId> finals;  // sorted, unique
    std::vector<Transition> delta;

    size_t num_states() const { return state_names.size(); }

    StateId add_state(const std::string& display_name);
    std::optional<StateId> find_state(const std::string& display_name) const;
    bool is_final(StateId q) const;
    void set_final(StateId q);

    // Inserts unless an identical transition is already present.
    void add_transition(SymbolId f, std::vector<StateId> args, StateId rhs);

    bool operator==(const Fta& o) const;
};

// Empty iff all structural invariants hold; otherwise one message per
// violation, naming the offending element.
std::vector<std::string> validate(const Fta& fta);

// Term text: `f(a,b)`, constants bare. Throws ParseError / InputError.
Term parse_term(const Signature& sig, const std::string& text);
std::string to_string(const Signature& sig, const Term& t);

}  // namespace treedet

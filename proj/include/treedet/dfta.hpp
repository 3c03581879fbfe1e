#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treedet/bitset.hpp"
#include "treedet/fta.hpp"

namespace treedet {

// One argument position of a product transition: a non-empty set of DFTA
// states, or the don't-care marker denoting the full state set.
struct ArgSet {
    DynBitset states;       // over DFTA state ids; ignored when dont_care
    bool dont_care = false;

    bool operator==(const ArgSet&) const = default;
};

// f(Q_1,...,Q_n) -> q with set-valued argument positions; denotes the
// product of its argument sets.
struct ProductTransition {
    SymbolId func = 0;
    std::vector<ArgSet> args;
    uint32_t rhs = 0;

    bool operator==(const ProductTransition&) const = default;
};

// A single expanded transition over DFTA states.
struct DftaTransition {
    SymbolId func = 0;
    std::vector<uint32_t> args;
    uint32_t rhs = 0;

    bool operator==(const DftaTransition&) const = default;
    auto operator<=>(const DftaTransition&) const = default;
};

// Automaton with transitions in product form. Determinisation results
// carry, per state, the subset of source-FTA states it denotes
// (state_members, over source_state_names); intersection products and
// parsed files without a StateMap leave those empty. For determinisation
// outputs the expansion of delta is deterministic.
struct Dfta {
    std::string name = "A";
    Signature sig;
    std::vector<std::string> state_names;              // dense ids: d0, d1, ...
    std::vector<std::vector<StateId>> state_members;   // sorted source indices; may be empty
    std::vector<std::string> source_state_names;
    std::vector<uint32_t> finals;                      // sorted, unique
    std::vector<ProductTransition> delta;
    bool completed_with_any = false;
    bool states_only = false;

    size_t num_states() const { return state_names.size(); }
    bool is_final(uint32_t q) const;
    std::optional<uint32_t> find_state(const std::string& display_name) const;

    // Display form of a state's source subset, e.g. "{any,list}".
    std::string member_set_string(uint32_t q) const;
};

// Cartesian expansion of all product transitions, deduplicated and sorted.
std::vector<DftaTransition> expand(const Dfta& dfta);

// Sum over transitions of the product of argument-set sizes (a don't-care
// position counts the full state set). Over-estimates |expand| when
// product transitions overlap. Saturates at UINT64_MAX.
uint64_t estimate_expanded_count(const Dfta& dfta);

// sum over f of |Q_d|^ar(f): the exact transition count of a complete
// DFTA over this signature. Saturates at UINT64_MAX.
uint64_t completed_transition_count(const Signature& sig, uint64_t num_states);

// Plain FTA with the same language: each product transition contributes
// fresh epsilon-intermediate states which are then inlined away, leaving
// the Cartesian expansion over the DFTA state names.
Fta defactor(const Dfta& dfta);

// View a plain FTA in product form (singleton argument sets).
Dfta product_view(const Fta& fta);

// Bottom-up evaluation directly on product form. Sorted; at most one
// state when the expansion is deterministic.
std::vector<uint32_t> eval_states(const Dfta& dfta, const Term& t);
bool accepts(const Dfta& dfta, const Term& t);

// Shortest accepted term per state, built bottom-up over the product
// transitions; nullopt for unproductive states. Index = state id.
std::vector<std::optional<Term>> state_witnesses(const Dfta& dfta);

}  // namespace treedet

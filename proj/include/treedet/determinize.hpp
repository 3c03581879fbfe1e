#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "treedet/bitset.hpp"
#include "treedet/dfta.hpp"
#include "treedet/fta.hpp"

namespace treedet {

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

struct DetOptions {
    bool complete = false;    // inject the universal any-state first
    bool dontcare = false;    // detect deciding arguments, emit `_` positions
    bool states_only = false; // skip transition generation entirely
    uint64_t max_states = 20'000;
    uint64_t max_transitions = 5'000'000;
    Deadline deadline;
    std::string any_state_name = "any";
};

// Index over the input transitions: func^-1 and lhsf_i as bitsets over
// dense transition ids, plus the rhs selector.
struct TransitionIndex {
    uint32_t num_transitions = 0;
    std::vector<DynBitset> by_func;                          // [f] -> transition set
    std::vector<std::vector<std::vector<DynBitset>>> lhsf;   // [f][i][q] -> transition set
    std::vector<StateId> rhs_of;                             // [transition id] -> state

    // Lhsf_i(f, S): union of lhsf_i(f, q) over q in S.
    DynBitset lhsf_union(SymbolId f, uint32_t pos, const DynBitset& states) const;

    // Rhs(T) as a bitset over the input states.
    DynBitset rhs_set(const DynBitset& transitions, uint32_t num_states) const;
};

TransitionIndex build_index(const Fta& fta);

// Per symbol and argument position: the accumulated non-empty Lhsf values
// (Psi, interned transition sets in first-seen order) and the inverse
// grouping of DFTA states by shared Lhsf value (tabulated T_i^-1).
struct ArgTable {
    SetPool tsets;  // interned transition sets
    // psi[f][i] = ids into tsets; empty for arity-0 symbols.
    std::vector<std::vector<std::vector<uint32_t>>> psi;
    // tinv[f][i]: transition-set id -> DFTA state ids (creation order).
    std::vector<std::vector<std::unordered_map<uint32_t, std::vector<uint32_t>>>> tinv;
};

struct StateFixpoint {
    SetPool states;  // Q_d: interned source-state subsets, creation order
    ArgTable tables;
    uint32_t iterations = 0;
    // Set when an early-stop predicate fired; determinisation is partial.
    std::optional<uint32_t> stopped_at;
};

// Copy of the input with the fresh universal state and one
// f(any,...,any) -> any transition per symbol. Errors on a name clash.
Fta add_any(const Fta& fta, const std::string& any_name = "any");

// { q0 | exists q_i in tuple_i with f(q_1..q_n) -> q0 in Delta }, computed
// by direct scan of the f-transitions (the set-comprehension route).
// Tuple member sets must be sorted ascending.
std::vector<StateId> q0_of_tuple(const Fta& fta, SymbolId f,
                                 const std::vector<std::vector<StateId>>& tuple);

// Textbook subset construction with delayed transition computation: full
// tuple re-scan per iteration, transitions emitted by one extra pass over
// the final state set. Deliberately unoptimised; serves as the oracle.
Dfta determinize_textbook(const Fta& fta, const DetOptions& opts = {});

// Optimised state fixpoint: per iteration only tuples with at least one
// new Lhsf value are visited; T^-1 values are tabulated as Lhsf values are
// first computed. `stop_when` (optional) is called on each newly created
// state; returning true aborts the fixpoint (inclusion/universality).
StateFixpoint compute_states(const Fta& fta, const DetOptions& opts,
                             const std::function<bool(const DynBitset&)>& stop_when = {});

// Product transitions from the final Psi / T^-1 tables. With
// opts.dontcare, deciding arguments are emitted first as don't-care
// transitions and their Lhsf values removed from the remaining products.
std::vector<ProductTransition> gen_product_transitions(const Fta& fta,
                                                       const TransitionIndex& index,
                                                       const StateFixpoint& fix,
                                                       const DetOptions& opts);

struct DecidingArgument {
    SymbolId func = 0;
    uint32_t pos = 0;          // 0-based argument position
    uint32_t tset = 0;         // the Lhsf value (id into tables.tsets)
    std::vector<uint32_t> arg_states;  // T^-1 of that value
    DynBitset rhs;             // over input states
};

// Deciding arguments per the complete-DFTA lemmas (general test first,
// then the binary singleton test). Contract error unless the fixpoint was
// computed with opts.complete.
std::vector<DecidingArgument> detect_deciding(const Fta& fta, const TransitionIndex& index,
                                              const StateFixpoint& fix, const DetOptions& opts);

// Full pipeline: optional completion, state fixpoint, then (unless
// states_only) product-transition generation.
Dfta determinize(const Fta& fta, const DetOptions& opts = {});

namespace detail {
// Fig-6 loop with Z replaced by the full product of updated Psi values;
// used by differential tests only.
StateFixpoint compute_states_full_z(const Fta& fta, const DetOptions& opts);

// Builds the Dfta envelope (names, members, finals) for a fixpoint.
Dfta assemble_dfta(const Fta& fta, const StateFixpoint& fix, const DetOptions& opts,
                   std::vector<ProductTransition> delta, bool states_only);
}  // namespace detail

}  // namespace treedet

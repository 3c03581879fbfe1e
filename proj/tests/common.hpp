#pragma once

#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "treedet/dfta.hpp"
#include "treedet/eval.hpp"
#include "treedet/fta.hpp"

namespace treedet::testing {

// The running lists example: symbols nil/cons/zero, states list/listlist/any,
// Delta_any included, finals {list, listlist}.
Fta lists_fta();
Fta list_only_fta();      // same, finals {list}
Fta listlist_only_fta();  // same, finals {listlist}

// The list/num completion example: symbols nil/cons/zero/s over states
// list/num, finals {list}; not complete, no any-state.
Fta listnum_fta();

// Deterministic random FTA: |Q| <= 6, <= 4 symbols, arity <= 2, at least
// one constant; optionally with the universal any-state and Delta_any.
// Signatures are resampled until depth-4 term enumeration stays small.
Fta random_fta(std::mt19937_64& rng, bool with_any);

// Pair of random FTAs over one shared signature (for Boolean-law tests).
std::pair<Fta, Fta> random_fta_pair(std::mt19937_64& rng);

// All terms of depth <= max_depth with structure sharing: children refer
// to earlier pool slots, so whole-corpus evaluation is one bottom-up pass.
struct TermPool {
    struct Node {
        SymbolId func;
        std::vector<uint32_t> children;
    };
    std::vector<Node> nodes;
    std::vector<uint32_t> depth_of;

    static TermPool build(const Signature& sig, uint32_t max_depth);
    Term term(uint32_t idx) const;

    // Per-slot reachable state sets.
    std::vector<DynBitset> eval(const Fta& fta) const;
    std::vector<DynBitset> eval(const Dfta& dfta) const;
};

// Independent membership oracle: explicit closure of the one-step rewrite
// relation over terms with state constants. Exponential; small inputs only.
std::vector<StateId> eval_by_rewriting(const Fta& fta, const Term& t);

// Structure keyed by source-state subsets, so results from different
// determinisation routes (whose state ids differ) compare directly.
using MemberSet = std::vector<StateId>;
using ExpandedKey = std::tuple<SymbolId, std::vector<MemberSet>, MemberSet>;

std::set<MemberSet> state_sets(const Dfta& d);
std::set<MemberSet> final_sets(const Dfta& d);
std::set<ExpandedKey> expanded_set(const Dfta& d);

}  // namespace treedet::testing

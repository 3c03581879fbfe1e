#pragma once

#include <cstdint>
#include <vector>

#include "treedet/fta.hpp"

namespace treedet {

// All states q with a run t =>* q, computed bottom-up. Sorted.
std::vector<StateId> eval_states(const Fta& fta, const Term& t);

bool accepts(const Fta& fta, const Term& t);

// True iff no two transitions share (func, args).
bool is_deterministic(const Fta& fta);

// True iff every (f, q_1..q_n) tuple has a transition. Cost is
// sum over f of |Q|^ar(f); refuses above max_tuples.
bool is_complete(const Fta& fta, uint64_t max_tuples = 10'000'000);

// All terms of depth <= max_depth, each once, in a deterministic order:
// depth-major, then symbol declaration order, then child combinations.
// enumerate_terms(d) is a prefix of enumerate_terms(d+1).
std::vector<Term> enumerate_terms(const Signature& sig, uint32_t max_depth);

// Number of terms of depth <= max_depth (same convention as above).
uint64_t count_terms(const Signature& sig, uint32_t max_depth);

}  // namespace treedet

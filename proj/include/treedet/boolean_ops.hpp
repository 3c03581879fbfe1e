#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treedet/determinize.hpp"
#include "treedet/dfta.hpp"
#include "treedet/fta.hpp"

namespace treedet {

struct InclusionVerdict {
    bool holds = true;
    // A difference-automaton accepting state witnessing non-inclusion;
    // names are over the (renamed) union automaton's states.
    std::optional<std::vector<std::string>> counterexample_state;
};

struct UniversalityVerdict {
    bool holds = true;
    std::optional<std::vector<std::string>> counterexample_state;
};

// Complete determinisation with final states flipped:
// L(result) = Term(Sigma) \ L(fta).
Dfta complement(const Fta& fta, const DetOptions& opts = {});

// Product-form intersection: pairs of transitions over the same symbol
// combine position-wise; only reachable pair states are kept.
// L(result) = L(a) intersect L(b). Signatures must be identical.
Dfta intersect_product(const Dfta& a, const Dfta& b);

// Determinised union with accepting states meeting the second automaton's
// finals removed: L(result) = L(a1) \ L(a2).
//
// finals_from_union_then_subtract selects between computing the union
// DFTA's finals against Q1_f u Q2_f and then subtracting, or against Q1_f
// alone; the two agree.
Dfta difference(const Fta& a1, const Fta& a2, const DetOptions& opts = {},
                bool finals_from_union_then_subtract = true);

// States-only difference pipeline with early exit on the first
// counterexample state.
InclusionVerdict included(const Fta& a1, const Fta& a2, const DetOptions& opts = {});

// Complete states-only determinisation; universal iff every state meets
// Q_f. Early exit on the first non-accepting state.
UniversalityVerdict universal(const Fta& fta, const DetOptions& opts = {});

// True iff the intersection of L(q) over the named states is non-empty,
// i.e. some DFTA state (states-only run) contains them all.
bool nonempty_intersection(const Fta& fta, const std::vector<std::string>& state_names,
                           const DetOptions& opts = {});

}  // namespace treedet

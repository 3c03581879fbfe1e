#include "treedet/eval.hpp"

#include <algorithm>
#include <map>

#include "treedet/errors.hpp"
#include "sat_arith.hpp"

namespace treedet {

namespace {

std::vector<StateId> eval_rec(const Fta& fta, const Term& t) {
    if (t.root >= fta.sig.size()) throw InputError("term symbol not in signature");
    std::vector<std::vector<StateId>> child_states;
    child_states.reserve(t.children.size());
    for (const Term& c : t.children) child_states.push_back(eval_rec(fta, c));

    std::vector<StateId> out;
    for (const Transition& tr : fta.delta) {
        if (tr.func != t.root) continue;
        bool match = true;
        for (size_t i = 0; i < tr.args.size() && match; ++i)
            match = std::binary_search(child_states[i].begin(), child_states[i].end(),
                                       tr.args[i]);
        if (match) out.push_back(tr.rhs);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

std::vector<StateId> eval_states(const Fta& fta, const Term& t) {
    return eval_rec(fta, t);
}

bool accepts(const Fta& fta, const Term& t) {
    std::vector<StateId> qs = eval_states(fta, t);
    for (StateId q : qs)
        if (fta.is_final(q)) return true;
    return false;
}

bool is_deterministic(const Fta& fta) {
    std::vector<std::pair<SymbolId, std::vector<StateId>>> lhss;
    lhss.reserve(fta.delta.size());
    for (const Transition& t : fta.delta) lhss.emplace_back(t.func, t.args);
    std::sort(lhss.begin(), lhss.end());
    return std::adjacent_find(lhss.begin(), lhss.end()) == lhss.end();
}

bool is_complete(const Fta& fta, uint64_t max_tuples) {
    const uint64_t nq = fta.num_states();
    uint64_t total = 0;
    for (const Symbol& s : fta.sig.symbols()) total = sat::add(total, sat::pow(nq, s.arity));
    if (total > max_tuples)
        throw ResourceLimitError("completeness check needs " + std::to_string(total) +
                                     " tuples, cap is " + std::to_string(max_tuples),
                                 false);

    std::vector<std::pair<SymbolId, std::vector<StateId>>> lhss;
    lhss.reserve(fta.delta.size());
    for (const Transition& t : fta.delta) lhss.emplace_back(t.func, t.args);
    std::sort(lhss.begin(), lhss.end());

    for (SymbolId f = 0; f < fta.sig.size(); ++f) {
        const uint32_t n = fta.sig.arity(f);
        if (nq == 0 && n > 0) continue;  // no tuples to cover
        std::vector<StateId> tuple(n, 0);
        while (true) {
            if (!std::binary_search(lhss.begin(), lhss.end(), std::pair(f, tuple)))
                return false;
            // odometer
            uint32_t i = 0;
            for (; i < n; ++i) {
                if (++tuple[i] < nq) break;
                tuple[i] = 0;
            }
            if (i == n) break;
        }
    }
    return true;
}

std::vector<Term> enumerate_terms(const Signature& sig, uint32_t max_depth) {
    std::vector<Term> all;     // depth-major; enumerate_terms(d) is a prefix of (d+1)
    size_t prev_start = 0;     // first term of depth exactly d-1
    for (uint32_t d = 1; d <= max_depth; ++d) {
        const size_t level_start = all.size();
        if (d == 1) {
            for (SymbolId f = 0; f < sig.size(); ++f)
                if (sig.arity(f) == 0) all.emplace_back(f);
        } else {
            if (level_start == prev_start) break;  // previous level empty
            for (SymbolId f = 0; f < sig.size(); ++f) {
                const uint32_t n = sig.arity(f);
                if (n == 0) continue;
                // Children drawn from terms of depth <= d-1; at least one
                // child of depth exactly d-1 so the term has depth d.
                std::vector<size_t> idx(n, 0);
                while (true) {
                    bool has_deep = false;
                    for (size_t i : idx)
                        if (i >= prev_start) has_deep = true;
                    if (has_deep) {
                        std::vector<Term> children;
                        children.reserve(n);
                        for (size_t i : idx) children.push_back(all[i]);
                        all.emplace_back(f, std::move(children));
                    }
                    // odometer, last position fastest
                    uint32_t i = n;
                    while (i > 0) {
                        --i;
                        if (++idx[i] < level_start) break;
                        idx[i] = 0;
                        if (i == 0) { i = UINT32_MAX; break; }
                    }
                    if (i == UINT32_MAX) break;
                }
            }
        }
        prev_start = level_start;
    }
    return all;
}

uint64_t count_terms(const Signature& sig, uint32_t max_depth) {
    // N(d) = #constants + sum over f with ar(f)=n>0 of N(d-1)^n
    uint64_t prev = 0;
    uint64_t cur = 0;
    for (uint32_t d = 1; d <= max_depth; ++d) {
        cur = 0;
        for (const Symbol& s : sig.symbols()) {
            if (s.arity == 0)
                cur = sat::add(cur, 1);
            else
                cur = sat::add(cur, sat::pow(prev, s.arity));
        }
        prev = cur;
    }
    return max_depth == 0 ? 0 : cur;
}

}  // namespace treedet

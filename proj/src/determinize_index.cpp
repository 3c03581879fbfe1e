#include <algorithm>

#include "treedet/determinize.hpp"
#include "treedet/errors.hpp"

namespace treedet {

DynBitset TransitionIndex::lhsf_union(SymbolId f, uint32_t pos, const DynBitset& states) const {
    DynBitset out(num_transitions);
    const auto& per_state = lhsf[f][pos];
    states.for_each([&](uint32_t q) { out |= per_state[q]; });
    return out;
}

DynBitset TransitionIndex::rhs_set(const DynBitset& transitions, uint32_t num_states) const {
    DynBitset out(num_states);
    transitions.for_each([&](uint32_t t) { out.set(rhs_of[t]); });
    return out;
}

TransitionIndex build_index(const Fta& fta) {
    TransitionIndex idx;
    const uint32_t nd = static_cast<uint32_t>(fta.delta.size());
    const uint32_t nq = static_cast<uint32_t>(fta.num_states());
    idx.num_transitions = nd;
    idx.rhs_of.resize(nd);
    idx.by_func.assign(fta.sig.size(), DynBitset(nd));
    idx.lhsf.resize(fta.sig.size());
    for (SymbolId f = 0; f < fta.sig.size(); ++f)
        idx.lhsf[f].assign(fta.sig.arity(f), std::vector<DynBitset>(nq, DynBitset(nd)));

    for (uint32_t t = 0; t < nd; ++t) {
        const Transition& tr = fta.delta[t];
        idx.rhs_of[t] = tr.rhs;
        idx.by_func[tr.func].set(t);
        for (uint32_t i = 0; i < tr.args.size(); ++i) idx.lhsf[tr.func][i][tr.args[i]].set(t);
    }
    return idx;
}

Fta add_any(const Fta& fta, const std::string& any_name) {
    if (fta.find_state(any_name))
        throw InputError("state name '" + any_name + "' already exists");
    if (fta.sig.find(any_name))
        throw InputError("state name '" + any_name + "' clashes with a symbol");
    Fta out = fta;
    StateId any = out.add_state(any_name);
    for (SymbolId f = 0; f < out.sig.size(); ++f)
        out.add_transition(f, std::vector<StateId>(out.sig.arity(f), any), any);
    return out;
}

std::vector<StateId> q0_of_tuple(const Fta& fta, SymbolId f,
                                 const std::vector<std::vector<StateId>>& tuple) {
    if (tuple.size() != fta.sig.arity(f))
        throw InputError("tuple length does not match arity of '" + fta.sig.name(f) + "'");
    std::vector<StateId> out;
    for (const Transition& t : fta.delta) {
        if (t.func != f) continue;
        bool match = true;
        for (size_t i = 0; i < t.args.size() && match; ++i)
            match = std::binary_search(tuple[i].begin(), tuple[i].end(), t.args[i]);
        if (match) out.push_back(t.rhs);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace treedet

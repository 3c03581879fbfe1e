#include "treedet/synth.hpp"

#include "treedet/errors.hpp"

namespace treedet {

Fta synth_family(uint32_t k) {
    if (k < 1) throw InputError("synth_family requires k >= 1");
    Fta fta;
    fta.name = "typed_lists_" + std::to_string(k);

    SymbolId nil = fta.sig.add("nil", 0);
    SymbolId cons = fta.sig.add("cons", 2);
    std::vector<SymbolId> consts;
    consts.reserve(k);
    for (uint32_t i = 1; i <= k; ++i) consts.push_back(fta.sig.add("c" + std::to_string(i), 0));

    std::vector<StateId> elems, lists;
    for (uint32_t i = 1; i <= k; ++i) elems.push_back(fta.add_state("t" + std::to_string(i)));
    for (uint32_t i = 1; i <= k; ++i) lists.push_back(fta.add_state("l" + std::to_string(i)));
    StateId any = fta.add_state("any");

    for (uint32_t i = 0; i < k; ++i) {
        fta.set_final(lists[i]);
        fta.add_transition(consts[i], {}, elems[i]);
        fta.add_transition(nil, {}, lists[i]);
        fta.add_transition(cons, {elems[i], lists[i]}, lists[i]);
    }
    // Delta_any over the whole signature.
    for (SymbolId f = 0; f < fta.sig.size(); ++f)
        fta.add_transition(f, std::vector<StateId>(fta.sig.arity(f), any), any);
    return fta;
}

}  // namespace treedet

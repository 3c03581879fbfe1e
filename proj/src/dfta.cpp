#include "treedet/dfta.hpp"

#include <algorithm>
#include <deque>

#include "sat_arith.hpp"
#include "treedet/errors.hpp"

namespace treedet {

bool Dfta::is_final(uint32_t q) const {
    return std::binary_search(finals.begin(), finals.end(), q);
}

std::optional<uint32_t> Dfta::find_state(const std::string& display_name) const {
    for (size_t i = 0; i < state_names.size(); ++i)
        if (state_names[i] == display_name) return static_cast<uint32_t>(i);
    return std::nullopt;
}

std::string Dfta::member_set_string(uint32_t q) const {
    if (q >= state_members.size() || state_members[q].empty()) return state_names[q];
    std::string out = "{";
    bool first = true;
    for (StateId s : state_members[q]) {
        if (!first) out += ',';
        first = false;
        out += source_state_names[s];
    }
    out += '}';
    return out;
}

namespace {

// Materialised members of one argument position.
std::vector<uint32_t> arg_members(const ArgSet& a, size_t num_states) {
    if (a.dont_care) {
        std::vector<uint32_t> all(num_states);
        for (size_t i = 0; i < num_states; ++i) all[i] = static_cast<uint32_t>(i);
        return all;
    }
    return a.states.members();
}

}  // namespace

std::vector<DftaTransition> expand(const Dfta& dfta) {
    std::vector<DftaTransition> out;
    for (const ProductTransition& pt : dfta.delta) {
        const uint32_t n = static_cast<uint32_t>(pt.args.size());
        if (n == 0) {
            out.push_back({pt.func, {}, pt.rhs});
            continue;
        }
        std::vector<std::vector<uint32_t>> choices;
        choices.reserve(n);
        bool empty = false;
        for (const ArgSet& a : pt.args) {
            choices.push_back(arg_members(a, dfta.num_states()));
            if (choices.back().empty()) empty = true;
        }
        if (empty) continue;
        std::vector<uint32_t> idx(n, 0);
        while (true) {
            DftaTransition t{pt.func, {}, pt.rhs};
            t.args.reserve(n);
            for (uint32_t i = 0; i < n; ++i) t.args.push_back(choices[i][idx[i]]);
            out.push_back(std::move(t));
            uint32_t i = n;
            while (i > 0) {
                --i;
                if (++idx[i] < choices[i].size()) break;
                idx[i] = 0;
                if (i == 0) { i = UINT32_MAX; break; }
            }
            if (i == UINT32_MAX) break;
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

uint64_t estimate_expanded_count(const Dfta& dfta) {
    uint64_t total = 0;
    for (const ProductTransition& pt : dfta.delta) {
        uint64_t prod = 1;
        for (const ArgSet& a : pt.args)
            prod = sat::mul(prod, a.dont_care ? dfta.num_states() : a.states.count());
        total = sat::add(total, prod);
    }
    return total;
}

uint64_t completed_transition_count(const Signature& sig, uint64_t num_states) {
    uint64_t total = 0;
    for (const Symbol& s : sig.symbols()) total = sat::add(total, sat::pow(num_states, s.arity));
    return total;
}

Fta defactor(const Dfta& dfta) {
    Fta out;
    out.name = dfta.name;
    out.sig = dfta.sig;
    out.state_names = dfta.state_names;
    out.finals.assign(dfta.finals.begin(), dfta.finals.end());
    for (const DftaTransition& t : expand(dfta))
        out.add_transition(t.func, t.args, t.rhs);
    return out;
}

Dfta product_view(const Fta& fta) {
    Dfta d;
    d.name = fta.name;
    d.sig = fta.sig;
    d.state_names = fta.state_names;
    d.finals.assign(fta.finals.begin(), fta.finals.end());
    const uint32_t nq = static_cast<uint32_t>(fta.num_states());
    for (const Transition& t : fta.delta) {
        ProductTransition pt;
        pt.func = t.func;
        pt.rhs = t.rhs;
        for (StateId q : t.args) {
            ArgSet a;
            a.states = DynBitset(nq);
            a.states.set(q);
            pt.args.push_back(std::move(a));
        }
        d.delta.push_back(std::move(pt));
    }
    return d;
}

namespace {

std::vector<uint32_t> eval_product_rec(const Dfta& dfta, const Term& t) {
    if (t.root >= dfta.sig.size()) throw InputError("term symbol not in signature");
    std::vector<std::vector<uint32_t>> child_states;
    child_states.reserve(t.children.size());
    for (const Term& c : t.children) child_states.push_back(eval_product_rec(dfta, c));

    std::vector<uint32_t> out;
    for (const ProductTransition& pt : dfta.delta) {
        if (pt.func != t.root) continue;
        bool match = true;
        for (size_t i = 0; i < pt.args.size() && match; ++i) {
            // A don't-care position still needs the child to reach a state.
            if (pt.args[i].dont_care) {
                match = !child_states[i].empty();
                continue;
            }
            match = false;
            for (uint32_t q : child_states[i])
                if (pt.args[i].states.test(q)) { match = true; break; }
        }
        if (match) out.push_back(pt.rhs);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

std::vector<uint32_t> eval_states(const Dfta& dfta, const Term& t) {
    return eval_product_rec(dfta, t);
}

bool accepts(const Dfta& dfta, const Term& t) {
    for (uint32_t q : eval_states(dfta, t))
        if (dfta.is_final(q)) return true;
    return false;
}

std::vector<std::optional<Term>> state_witnesses(const Dfta& dfta) {
    const size_t nq = dfta.num_states();
    std::vector<std::optional<Term>> witness(nq);
    // Rounds only consume witnesses from earlier rounds, so each witness
    // has minimal height; round count is bounded by the state count.
    bool progress = true;
    while (progress) {
        progress = false;
        std::vector<std::pair<uint32_t, Term>> found;
        for (const ProductTransition& pt : dfta.delta) {
            if (witness[pt.rhs]) continue;
            std::vector<Term> children;
            children.reserve(pt.args.size());
            bool ok = true;
            for (const ArgSet& a : pt.args) {
                // first witnessed member, in state order, for determinism
                const Term* chosen = nullptr;
                if (a.dont_care) {
                    for (size_t q = 0; q < nq && !chosen; ++q)
                        if (witness[q]) chosen = &*witness[q];
                } else {
                    a.states.for_each([&](uint32_t q) {
                        if (!chosen && witness[q]) chosen = &*witness[q];
                    });
                }
                if (!chosen) { ok = false; break; }
                children.push_back(*chosen);
            }
            if (ok) found.emplace_back(pt.rhs, Term(pt.func, std::move(children)));
        }
        for (auto& [q, t] : found) {
            if (!witness[q]) {
                witness[q] = std::move(t);
                progress = true;
            }
        }
    }
    return witness;
}

}  // namespace treedet

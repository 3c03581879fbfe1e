#include <algorithm>
#include <map>

#include "treedet/determinize.hpp"
#include "treedet/errors.hpp"

namespace treedet {

namespace {

void check_deadline(const Deadline& deadline) {
    if (deadline && std::chrono::steady_clock::now() > *deadline)
        throw ResourceLimitError("determinisation timed out", true);
}

// Sorted-vector state sets and a plain ordered map: intentionally simple,
// this is the oracle and the benchmark baseline.
struct TextbookStates {
    std::vector<std::vector<StateId>> sets;          // creation order
    std::map<std::vector<StateId>, uint32_t> ids;

    bool add(const std::vector<StateId>& s, uint64_t cap) {
        auto it = ids.find(s);
        if (it != ids.end()) return false;
        if (sets.size() >= cap)
            throw ResourceLimitError("textbook determinisation exceeded the state cap", false);
        ids.emplace(s, static_cast<uint32_t>(sets.size()));
        sets.push_back(s);
        return true;
    }
};

}  // namespace

Dfta determinize_textbook(const Fta& input, const DetOptions& opts) {
    const Fta fta = opts.complete ? add_any(input, opts.any_state_name) : input;
    if (!validate(fta).empty()) throw InputError("invalid automaton");

    TextbookStates states;

    // Constants are independent of Q_d; process them before the loop.
    for (SymbolId f = 0; f < fta.sig.size(); ++f) {
        if (fta.sig.arity(f) != 0) continue;
        std::vector<StateId> q0 = q0_of_tuple(fta, f, {});
        if (!q0.empty()) states.add(q0, opts.max_states);
    }

    // Full re-scan of all tuples over the previous iteration's states.
    while (true) {
        check_deadline(opts.deadline);
        const size_t old_count = states.sets.size();
        bool grew = false;
        uint64_t tuples_visited = 0;
        for (SymbolId f = 0; f < fta.sig.size(); ++f) {
            const uint32_t n = fta.sig.arity(f);
            if (n == 0 || old_count == 0) continue;
            std::vector<size_t> idx(n, 0);
            std::vector<std::vector<StateId>> tuple(n);
            while (true) {
                if ((++tuples_visited & 0xFFF) == 0) check_deadline(opts.deadline);
                for (uint32_t i = 0; i < n; ++i) tuple[i] = states.sets[idx[i]];
                std::vector<StateId> q0 = q0_of_tuple(fta, f, tuple);
                if (!q0.empty()) grew |= states.add(q0, opts.max_states);
                uint32_t i = n;
                while (i > 0) {
                    --i;
                    if (++idx[i] < old_count) break;
                    idx[i] = 0;
                    if (i == 0) { i = UINT32_MAX; break; }
                }
                if (i == UINT32_MAX) break;
            }
        }
        if (!grew) break;
    }

    Dfta out;
    out.name = fta.name;
    out.sig = fta.sig;
    out.source_state_names = fta.state_names;
    out.completed_with_any = opts.complete;
    out.states_only = opts.states_only;
    const uint32_t nd_states = static_cast<uint32_t>(states.sets.size());
    for (uint32_t q = 0; q < nd_states; ++q) {
        out.state_names.push_back("d" + std::to_string(q));
        out.state_members.push_back(states.sets[q]);
        for (StateId s : states.sets[q]) {
            if (fta.is_final(s)) {
                out.finals.push_back(q);
                break;
            }
        }
    }

    if (!opts.states_only) {
        // One extra pass over the final state set, now emitting transitions.
        uint64_t emitted = 0;
        auto check_cap = [&] {
            if (++emitted > opts.max_transitions)
                throw ResourceLimitError("textbook determinisation exceeded the transition cap",
                                         false);
        };
        for (SymbolId f = 0; f < fta.sig.size(); ++f) {
            const uint32_t n = fta.sig.arity(f);
            if (n == 0) {
                std::vector<StateId> q0 = q0_of_tuple(fta, f, {});
                if (q0.empty()) continue;
                check_cap();
                out.delta.push_back({f, {}, states.ids.at(q0)});
                continue;
            }
            if (nd_states == 0) continue;
            uint64_t tuples_visited = 0;
            std::vector<size_t> idx(n, 0);
            std::vector<std::vector<StateId>> tuple(n);
            while (true) {
                if ((++tuples_visited & 0xFFF) == 0) check_deadline(opts.deadline);
                for (uint32_t i = 0; i < n; ++i) tuple[i] = states.sets[idx[i]];
                std::vector<StateId> q0 = q0_of_tuple(fta, f, tuple);
                if (!q0.empty()) {
                    check_cap();
                    ProductTransition pt;
                    pt.func = f;
                    pt.rhs = states.ids.at(q0);
                    for (uint32_t i = 0; i < n; ++i) {
                        ArgSet a;
                        a.states = DynBitset(nd_states);
                        a.states.set(static_cast<uint32_t>(idx[i]));
                        pt.args.push_back(std::move(a));
                    }
                    out.delta.push_back(std::move(pt));
                }
                uint32_t i = n;
                while (i > 0) {
                    --i;
                    if (++idx[i] < nd_states) break;
                    idx[i] = 0;
                    if (i == 0) { i = UINT32_MAX; break; }
                }
                if (i == UINT32_MAX) break;
            }
        }
    }
    return out;
}

}  // namespace treedet

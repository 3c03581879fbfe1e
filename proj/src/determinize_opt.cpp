#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <unordered_set>

#include "treedet/determinize.hpp"
#include "treedet/errors.hpp"

namespace treedet {

namespace {

void check_deadline(const Deadline& deadline) {
    if (deadline && std::chrono::steady_clock::now() > *deadline)
        throw ResourceLimitError("determinisation timed out", true);
}

struct Fixpointer {
    const Fta& fta;
    const DetOptions& opts;
    const std::function<bool(const DynBitset&)>& stop_when;
    bool full_z;  // differential-test mode: ignore the old/new split

    TransitionIndex index;
    StateFixpoint fix;
    // Membership view of Psi (including this iteration's Phi) per (f, i).
    std::vector<std::vector<std::unordered_set<uint32_t>>> psi_seen;

    Fixpointer(const Fta& f, const DetOptions& o,
               const std::function<bool(const DynBitset&)>& s, bool fz)
        : fta(f), opts(o), stop_when(s), full_z(fz) {}

    // Interns a non-empty rhs set; returns true when the caller must stop.
    bool intern_state(const DynBitset& s) {
        const uint32_t before = static_cast<uint32_t>(fix.states.size());
        const uint32_t id = fix.states.intern(s);
        if (id == before) {
            if (fix.states.size() > opts.max_states)
                throw ResourceLimitError("determinisation exceeded the state cap (" +
                                             std::to_string(opts.max_states) + ")",
                                         false);
            if (stop_when && stop_when(s)) {
                fix.stopped_at = id;
                return true;
            }
        }
        return false;
    }

    void run() {
        index = build_index(fta);
        const uint32_t nq = static_cast<uint32_t>(fta.num_states());
        const size_t nsyms = fta.sig.size();

        fix.tables.psi.resize(nsyms);
        fix.tables.tinv.resize(nsyms);
        psi_seen.resize(nsyms);
        for (SymbolId f = 0; f < nsyms; ++f) {
            fix.tables.psi[f].resize(fta.sig.arity(f));
            fix.tables.tinv[f].resize(fta.sig.arity(f));
            psi_seen[f].resize(fta.sig.arity(f));
        }

        // Seed with the constants; they do not depend on Q_d.
        for (SymbolId f = 0; f < nsyms; ++f) {
            if (fta.sig.arity(f) != 0) continue;
            DynBitset q0 = index.rhs_set(index.by_func[f], nq);
            if (q0.any() && intern_state(q0)) return;
        }

        std::vector<uint32_t> new_states(fix.states.size());
        for (uint32_t i = 0; i < new_states.size(); ++i) new_states[i] = i;

        while (!new_states.empty()) {
            ++fix.iterations;
            check_deadline(opts.deadline);
            const uint32_t size_at_start = static_cast<uint32_t>(fix.states.size());

            for (SymbolId f = 0; f < nsyms; ++f) {
                const uint32_t n = fta.sig.arity(f);
                if (n == 0) continue;
                if (iterate_symbol(f, n, new_states)) return;
            }

            new_states.clear();
            for (uint32_t id = size_at_start; id < fix.states.size(); ++id)
                new_states.push_back(id);
        }
    }

    // One Fig-6 iteration step for one function symbol. Returns true when
    // the stop predicate fired.
    bool iterate_symbol(SymbolId f, uint32_t n, const std::vector<uint32_t>& new_states) {
        auto& psi_f = fix.tables.psi[f];
        auto& tinv_f = fix.tables.tinv[f];

        // Phi_i: Lhsf values of the new states not yet in Psi_i. Evaluating
        // Lhsf here is also what tabulates T_i^-1: each state passes through
        // exactly once per position.
        std::vector<std::vector<uint32_t>> phi(n);
        for (uint32_t i = 0; i < n; ++i) {
            for (uint32_t qid : new_states) {
                DynBitset lv = index.lhsf_union(f, i, fix.states.at(qid));
                if (lv.none()) continue;
                uint32_t tsid = fix.tables.tsets.intern(lv);
                tinv_f[i][tsid].push_back(qid);
                if (psi_seen[f][i].insert(tsid).second) phi[i].push_back(tsid);
            }
        }

        const uint32_t nq = static_cast<uint32_t>(fta.num_states());
        uint64_t visited = 0;
        auto process_tuple = [&](const std::vector<uint32_t>& tsids) -> bool {
            if ((++visited & 0xFFF) == 0) check_deadline(opts.deadline);
            DynBitset acc = fix.tables.tsets.at(tsids[0]);
            for (uint32_t j = 1; j < tsids.size() && acc.any(); ++j)
                acc &= fix.tables.tsets.at(tsids[j]);
            if (acc.none()) return false;
            DynBitset q0 = index.rhs_set(acc, nq);
            return q0.any() && intern_state(q0);
        };

        bool stopped = false;
        if (full_z) {
            // Product over the updated Psi values in every position.
            std::vector<std::vector<uint32_t>> lists(n);
            for (uint32_t j = 0; j < n; ++j) {
                lists[j] = psi_f[j];
                lists[j].insert(lists[j].end(), phi[j].begin(), phi[j].end());
            }
            stopped = enumerate_product(lists, process_tuple);
        } else {
            // Z: tuples with at least one new coordinate, each exactly once,
            // keyed by the first new position i: old values before i, the new
            // values at i, old-or-new after i.
            for (uint32_t i = 0; i < n && !stopped; ++i) {
                if (phi[i].empty()) continue;
                std::vector<std::vector<uint32_t>> lists(n);
                bool feasible = true;
                for (uint32_t j = 0; j < n; ++j) {
                    if (j < i) {
                        lists[j] = psi_f[j];
                    } else if (j == i) {
                        lists[j] = phi[i];
                    } else {
                        lists[j] = psi_f[j];
                        lists[j].insert(lists[j].end(), phi[j].begin(), phi[j].end());
                    }
                    if (lists[j].empty()) feasible = false;
                }
                if (feasible) stopped = enumerate_product(lists, process_tuple);
            }
        }

        for (uint32_t i = 0; i < n; ++i)
            psi_f[i].insert(psi_f[i].end(), phi[i].begin(), phi[i].end());
        return stopped;
    }

    template <typename F>
    static bool enumerate_product(const std::vector<std::vector<uint32_t>>& lists, F&& fn) {
        const uint32_t n = static_cast<uint32_t>(lists.size());
        std::vector<uint32_t> idx(n, 0);
        std::vector<uint32_t> tuple(n);
        while (true) {
            for (uint32_t j = 0; j < n; ++j) tuple[j] = lists[j][idx[j]];
            if (fn(tuple)) return true;
            uint32_t j = n;
            while (j > 0) {
                --j;
                if (++idx[j] < lists[j].size()) break;
                idx[j] = 0;
                if (j == 0) return false;
            }
        }
    }
};

}  // namespace

StateFixpoint compute_states(const Fta& fta, const DetOptions& opts,
                             const std::function<bool(const DynBitset&)>& stop_when) {
    Fixpointer fp(fta, opts, stop_when, /*full_z=*/false);
    fp.run();
    return std::move(fp.fix);
}

namespace detail {
StateFixpoint compute_states_full_z(const Fta& fta, const DetOptions& opts) {
    std::function<bool(const DynBitset&)> no_stop;
    Fixpointer fp(fta, opts, no_stop, /*full_z=*/true);
    fp.run();
    return std::move(fp.fix);
}
}  // namespace detail

namespace {

// Per-position totality: every DFTA state yields a non-empty Lhsf value,
// i.e. the T^-1 classes cover all states. Holds at every position of a
// complete DFTA; the deciding-argument lemmas rely on it.
bool position_total(const StateFixpoint& fix, SymbolId f, uint32_t pos) {
    size_t covered = 0;
    for (uint32_t tsid : fix.tables.psi[f][pos]) {
        auto it = fix.tables.tinv[f][pos].find(tsid);
        if (it != fix.tables.tinv[f][pos].end()) covered += it->second.size();
    }
    return covered == fix.states.size();
}

std::vector<DecidingArgument> detect_deciding_impl(const Fta& fta, const TransitionIndex& index,
                                                   const StateFixpoint& fix) {
    std::vector<DecidingArgument> out;
    const uint32_t nq = static_cast<uint32_t>(fta.num_states());
    const auto& tsets = fix.tables.tsets;

    for (SymbolId f = 0; f < fta.sig.size(); ++f) {
        const uint32_t n = fta.sig.arity(f);
        if (n < 2) continue;  // a don't-care position needs another argument
        const auto& psi_f = fix.tables.psi[f];
        bool any_empty = false;
        for (uint32_t j = 0; j < n; ++j) any_empty |= psi_f[j].empty();
        if (any_empty) continue;  // no transitions for f at all

        // cap[j] = intersection of all Psi_j members.
        std::vector<DynBitset> cap(n);
        for (uint32_t j = 0; j < n; ++j) {
            cap[j] = tsets.at(psi_f[j][0]);
            for (size_t k = 1; k < psi_f[j].size(); ++k) cap[j] &= tsets.at(psi_f[j][k]);
        }
        std::vector<bool> total(n);
        for (uint32_t j = 0; j < n; ++j) total[j] = position_total(fix, f, j);

        for (uint32_t i = 0; i < n; ++i) {
            bool others_total = true;
            for (uint32_t j = 0; j < n; ++j)
                if (j != i && !total[j]) others_total = false;
            if (!others_total) continue;

            DynBitset other_cap(index.num_transitions);
            bool first = true;
            for (uint32_t j = 0; j < n; ++j) {
                if (j == i) continue;
                if (first) {
                    other_cap = cap[j];
                    first = false;
                } else {
                    other_cap &= cap[j];
                }
            }

            for (uint32_t tsid : psi_f[i]) {
                const DynBitset& dp = tsets.at(tsid);
                DynBitset rhs = index.rhs_set(dp, nq);
                DynBitset narrowed = dp;
                narrowed &= other_cap;
                bool deciding = index.rhs_set(narrowed, nq) == rhs;
                if (!deciding && n == 2 && rhs.count() == 1) {
                    // Binary case: singleton rhs and non-empty intersection
                    // with every value of the other position.
                    const uint32_t other = 1 - i;
                    deciding = true;
                    for (uint32_t o : psi_f[other]) {
                        if (!dp.intersects(tsets.at(o))) {
                            deciding = false;
                            break;
                        }
                    }
                }
                if (deciding) {
                    DecidingArgument d;
                    d.func = f;
                    d.pos = i;
                    d.tset = tsid;
                    d.arg_states = fix.tables.tinv[f][i].at(tsid);
                    d.rhs = rhs;
                    out.push_back(std::move(d));
                }
            }
        }
    }
    return out;
}

}  // namespace

std::vector<DecidingArgument> detect_deciding(const Fta& fta, const TransitionIndex& index,
                                              const StateFixpoint& fix, const DetOptions& opts) {
    if (!opts.complete)
        throw InputError("deciding-argument detection requires a completed determinisation");
    return detect_deciding_impl(fta, index, fix);
}

std::vector<ProductTransition> gen_product_transitions(const Fta& fta,
                                                       const TransitionIndex& index,
                                                       const StateFixpoint& fix,
                                                       const DetOptions& opts) {
    const uint32_t nq = static_cast<uint32_t>(fta.num_states());
    const uint32_t nd_states = static_cast<uint32_t>(fix.states.size());
    const auto& tsets = fix.tables.tsets;
    std::vector<ProductTransition> out;

    uint64_t emitted = 0;
    auto check_cap = [&] {
        if (++emitted > opts.max_transitions)
            throw ResourceLimitError("determinisation exceeded the transition cap (" +
                                         std::to_string(opts.max_transitions) + ")",
                                     false);
    };
    auto state_id_of = [&](const DynBitset& s) -> uint32_t {
        uint32_t id = 0;
        if (!fix.states.find(s, id))
            throw std::logic_error("transition rhs is not a computed DFTA state");
        return id;
    };

    // Deciding arguments, detected up front so their Lhsf values can be
    // dropped from the per-position working sets.
    std::vector<std::vector<DecidingArgument>> dc_by_func(fta.sig.size());
    if (opts.dontcare) {
        for (DecidingArgument& d : detect_deciding_impl(fta, index, fix))
            dc_by_func[d.func].push_back(std::move(d));
    }

    for (SymbolId f = 0; f < fta.sig.size(); ++f) {
        const uint32_t n = fta.sig.arity(f);
        if (n == 0) {
            DynBitset q0 = index.rhs_set(index.by_func[f], nq);
            if (q0.none()) continue;
            check_cap();
            out.push_back({f, {}, state_id_of(q0)});
            continue;
        }

        std::vector<std::vector<uint32_t>> work = fix.tables.psi[f];
        for (const DecidingArgument& d : dc_by_func[f]) {
            check_cap();
            ProductTransition pt;
            pt.func = f;
            pt.rhs = state_id_of(d.rhs);
            pt.args.assign(n, ArgSet{DynBitset(nd_states), true});
            ArgSet deciding;
            deciding.dont_care = false;
            deciding.states = DynBitset(nd_states);
            for (uint32_t q : d.arg_states) deciding.states.set(q);
            pt.args[d.pos] = std::move(deciding);
            out.push_back(std::move(pt));
            auto& vec = work[d.pos];
            vec.erase(std::remove(vec.begin(), vec.end(), d.tset), vec.end());
        }

        bool feasible = nd_states > 0;
        for (uint32_t j = 0; j < n; ++j)
            if (work[j].empty()) feasible = false;
        if (!feasible) continue;

        std::vector<uint32_t> idx(n, 0);
        uint64_t visited = 0;
        while (true) {
            if ((++visited & 0xFFF) == 0) check_deadline(opts.deadline);
            DynBitset acc = tsets.at(work[0][idx[0]]);
            for (uint32_t j = 1; j < n && acc.any(); ++j) acc &= tsets.at(work[j][idx[j]]);
            if (acc.any()) {
                DynBitset q0 = index.rhs_set(acc, nq);
                if (q0.any()) {
                    check_cap();
                    ProductTransition pt;
                    pt.func = f;
                    pt.rhs = state_id_of(q0);
                    pt.args.reserve(n);
                    for (uint32_t j = 0; j < n; ++j) {
                        ArgSet a;
                        a.states = DynBitset(nd_states);
                        for (uint32_t q : fix.tables.tinv[f][j].at(work[j][idx[j]]))
                            a.states.set(q);
                        pt.args.push_back(std::move(a));
                    }
                    out.push_back(std::move(pt));
                }
            }
            uint32_t j = n;
            while (j > 0) {
                --j;
                if (++idx[j] < work[j].size()) break;
                idx[j] = 0;
                if (j == 0) { j = UINT32_MAX; break; }
            }
            if (j == UINT32_MAX) break;
        }
    }
    return out;
}

namespace detail {

Dfta assemble_dfta(const Fta& fta, const StateFixpoint& fix, const DetOptions& opts,
                   std::vector<ProductTransition> delta, bool states_only) {
    Dfta out;
    out.name = fta.name;
    out.sig = fta.sig;
    out.source_state_names = fta.state_names;
    out.completed_with_any = opts.complete;
    out.states_only = states_only;
    out.delta = std::move(delta);

    DynBitset final_mask(static_cast<uint32_t>(fta.num_states()));
    for (StateId q : fta.finals) final_mask.set(q);

    for (uint32_t id = 0; id < fix.states.size(); ++id) {
        out.state_names.push_back("d" + std::to_string(id));
        out.state_members.push_back(fix.states.at(id).members());
        if (fix.states.at(id).intersects(final_mask)) out.finals.push_back(id);
    }
    return out;
}

}  // namespace detail

Dfta determinize(const Fta& input, const DetOptions& opts) {
    if (opts.dontcare && opts.states_only)
        throw InputError("dontcare and states_only cannot be combined");
    Fta work = input;
    if (opts.complete) {
        // Completion is semantic; if the preferred name is taken, pick a
        // fresh one rather than failing.
        std::string any = opts.any_state_name;
        while (work.find_state(any) || work.sig.find(any)) any += "_";
        work = add_any(work, any);
    }
    {
        auto diags = validate(work);
        if (!diags.empty()) throw InputError("invalid automaton: " + diags.front());
    }

    StateFixpoint fix = compute_states(work, opts);
    std::vector<ProductTransition> delta;
    if (!opts.states_only) {
        TransitionIndex index = build_index(work);
        delta = gen_product_transitions(work, index, fix, opts);
    }
    return detail::assemble_dfta(work, fix, opts, std::move(delta), opts.states_only);
}

}  // namespace treedet

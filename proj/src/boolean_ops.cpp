#include "treedet/boolean_ops.hpp"

#include <algorithm>

#include "treedet/errors.hpp"
#include "treedet/eval.hpp"

namespace treedet {

namespace {

void require_same_signature(const Signature& a, const Signature& b) {
    if (!(a == b)) throw InputError("signatures differ");
}

std::string fresh_any_name(const Fta& fta, const std::string& preferred) {
    std::string any = preferred;
    while (fta.find_state(any) || fta.sig.find(any)) any += "_";
    return any;
}

// a1's states followed by a2's states under a reserved suffix.
Fta union_automaton(const Fta& a1, const Fta& a2, uint32_t& second_first_index) {
    require_same_signature(a1.sig, a2.sig);
    std::string suffix = "__2";
    auto clashes = [&](const std::string& s) {
        for (const std::string& n : a2.state_names)
            if (a1.find_state(n + s) || a1.sig.find(n + s)) return true;
        return false;
    };
    while (clashes(suffix)) suffix += "_";

    Fta u;
    u.name = a1.name + "_minus_" + a2.name;
    u.sig = a1.sig;
    u.state_names = a1.state_names;
    for (const std::string& n : a2.state_names) u.state_names.push_back(n + suffix);
    second_first_index = static_cast<uint32_t>(a1.num_states());

    for (StateId q : a1.finals) u.set_final(q);
    for (StateId q : a2.finals) u.set_final(q + second_first_index);
    u.delta = a1.delta;
    for (const Transition& t : a2.delta) {
        std::vector<StateId> args = t.args;
        for (StateId& q : args) q += second_first_index;
        u.add_transition(t.func, std::move(args), t.rhs + second_first_index);
    }
    return u;
}

DynBitset finals_mask(uint32_t shift, const std::vector<StateId>& finals, uint32_t width) {
    DynBitset m(width);
    for (StateId q : finals) m.set(q + shift);
    return m;
}

}  // namespace

Dfta complement(const Fta& fta, const DetOptions& opts) {
    DetOptions o = opts;
    o.complete = true;
    Dfta d = determinize(fta, o);
    std::vector<uint32_t> flipped;
    for (uint32_t q = 0; q < d.num_states(); ++q)
        if (!d.is_final(q)) flipped.push_back(q);
    d.finals = std::move(flipped);
    d.name = fta.name + "_compl";
    return d;
}

namespace {

bool arg_pair_reachable(const ArgSet& a, const ArgSet& b, const DynBitset& reach, uint32_t na,
                        uint32_t nb) {
    if (a.dont_care && b.dont_care) return reach.any();
    bool found = false;
    for (uint32_t x = 0; x < na && !found; ++x) {
        if (!a.dont_care && !a.states.test(x)) continue;
        for (uint32_t y = 0; y < nb && !found; ++y) {
            if (!b.dont_care && !b.states.test(y)) continue;
            if (reach.test(x * nb + y)) found = true;
        }
    }
    return found;
}

}  // namespace

Dfta intersect_product(const Dfta& a, const Dfta& b) {
    require_same_signature(a.sig, b.sig);
    const uint32_t na = static_cast<uint32_t>(a.num_states());
    const uint32_t nb = static_cast<uint32_t>(b.num_states());

    // Reachable pair states, discovered bottom-up in deterministic order.
    DynBitset reach(na * nb);
    std::vector<std::pair<uint32_t, uint32_t>> order;
    auto mark = [&](uint32_t x, uint32_t y) {
        if (!reach.test(x * nb + y)) {
            reach.set(x * nb + y);
            order.emplace_back(x, y);
            return true;
        }
        return false;
    };

    bool grew = true;
    while (grew) {
        grew = false;
        for (const ProductTransition& ta : a.delta) {
            for (const ProductTransition& tb : b.delta) {
                if (ta.func != tb.func) continue;
                bool enabled = true;
                for (size_t i = 0; i < ta.args.size() && enabled; ++i)
                    enabled = arg_pair_reachable(ta.args[i], tb.args[i], reach, na, nb);
                if (enabled) grew |= mark(ta.rhs, tb.rhs);
            }
        }
    }

    Dfta out;
    out.name = a.name + "_and_" + b.name;
    out.sig = a.sig;
    std::vector<uint32_t> pair_id(static_cast<size_t>(na) * nb, kNoId);
    for (size_t i = 0; i < order.size(); ++i) {
        auto [x, y] = order[i];
        pair_id[x * nb + y] = static_cast<uint32_t>(i);
        out.state_names.push_back(a.state_names[x] + "_x_" + b.state_names[y]);
        if (a.is_final(x) && b.is_final(y)) out.finals.push_back(static_cast<uint32_t>(i));
    }
    std::sort(out.finals.begin(), out.finals.end());
    const uint32_t np = static_cast<uint32_t>(order.size());

    for (const ProductTransition& ta : a.delta) {
        for (const ProductTransition& tb : b.delta) {
            if (ta.func != tb.func) continue;
            if (!reach.test(ta.rhs * nb + tb.rhs)) continue;
            ProductTransition pt;
            pt.func = ta.func;
            pt.rhs = pair_id[ta.rhs * nb + tb.rhs];
            bool enabled = true;
            for (size_t i = 0; i < ta.args.size() && enabled; ++i) {
                const ArgSet& ra = ta.args[i];
                const ArgSet& rb = tb.args[i];
                ArgSet arg;
                if (ra.dont_care && rb.dont_care) {
                    arg.dont_care = true;
                    arg.states = DynBitset(np);
                } else {
                    arg.states = DynBitset(np);
                    bool nonempty = false;
                    for (uint32_t x = 0; x < na; ++x) {
                        if (!ra.dont_care && !ra.states.test(x)) continue;
                        for (uint32_t y = 0; y < nb; ++y) {
                            if (!rb.dont_care && !rb.states.test(y)) continue;
                            uint32_t id = pair_id[x * nb + y];
                            if (id != kNoId) {
                                arg.states.set(id);
                                nonempty = true;
                            }
                        }
                    }
                    enabled = nonempty;
                }
                pt.args.push_back(std::move(arg));
            }
            if (enabled) out.delta.push_back(std::move(pt));
        }
    }
    return out;
}

Dfta difference(const Fta& a1, const Fta& a2, const DetOptions& opts,
                bool finals_from_union_then_subtract) {
    uint32_t shift = 0;
    Fta u = union_automaton(a1, a2, shift);
    Dfta d = determinize(u, opts);

    DynBitset f2 = finals_mask(shift, a2.finals, static_cast<uint32_t>(u.num_states()));
    DynBitset f1 = finals_mask(0, a1.finals, static_cast<uint32_t>(u.num_states()));

    auto member_mask = [&](uint32_t q) {
        DynBitset m(static_cast<uint32_t>(u.num_states()));
        for (StateId s : d.state_members[q]) m.set(s);
        return m;
    };

    std::vector<uint32_t> finals;
    if (finals_from_union_then_subtract) {
        // finals of the union DFTA (already against Q1_f u Q2_f) minus those
        // meeting Q2_f.
        for (uint32_t q : d.finals)
            if (!member_mask(q).intersects(f2)) finals.push_back(q);
    } else {
        for (uint32_t q = 0; q < d.num_states(); ++q) {
            DynBitset m = member_mask(q);
            if (m.intersects(f1) && !m.intersects(f2)) finals.push_back(q);
        }
    }
    d.finals = std::move(finals);
    d.name = a1.name + "_minus_" + a2.name;
    return d;
}

InclusionVerdict included(const Fta& a1, const Fta& a2, const DetOptions& opts) {
    uint32_t shift = 0;
    Fta u = union_automaton(a1, a2, shift);
    const uint32_t nq = static_cast<uint32_t>(u.num_states());
    DynBitset f1 = finals_mask(0, a1.finals, nq);
    DynBitset f2 = finals_mask(shift, a2.finals, nq);

    DetOptions o = opts;
    o.states_only = true;
    o.dontcare = false;
    StateFixpoint fix = compute_states(
        u, o, [&](const DynBitset& s) { return s.intersects(f1) && !s.intersects(f2); });

    InclusionVerdict v;
    if (fix.stopped_at) {
        v.holds = false;
        std::vector<std::string> names;
        fix.states.at(*fix.stopped_at).for_each([&](uint32_t q) {
            names.push_back(u.state_names[q]);
        });
        v.counterexample_state = std::move(names);
    }
    return v;
}

UniversalityVerdict universal(const Fta& fta, const DetOptions& opts) {
    Fta work = add_any(fta, fresh_any_name(fta, opts.any_state_name));
    const uint32_t nq = static_cast<uint32_t>(work.num_states());
    DynBitset fmask(nq);
    for (StateId q : work.finals) fmask.set(q);

    DetOptions o = opts;
    o.states_only = true;
    o.dontcare = false;
    StateFixpoint fix =
        compute_states(work, o, [&](const DynBitset& s) { return !s.intersects(fmask); });

    UniversalityVerdict v;
    if (fix.stopped_at) {
        v.holds = false;
        std::vector<std::string> names;
        fix.states.at(*fix.stopped_at).for_each([&](uint32_t q) {
            names.push_back(work.state_names[q]);
        });
        v.counterexample_state = std::move(names);
    }
    return v;
}

bool nonempty_intersection(const Fta& fta, const std::vector<std::string>& state_names,
                           const DetOptions& opts) {
    DynBitset target(static_cast<uint32_t>(fta.num_states()));
    for (const std::string& n : state_names) {
        auto q = fta.find_state(n);
        if (!q) throw InputError("unknown state '" + n + "'");
        target.set(*q);
    }
    DetOptions o = opts;
    o.states_only = true;
    o.dontcare = false;
    StateFixpoint fix =
        compute_states(fta, o, [&](const DynBitset& s) { return target.is_subset_of(s); });
    return fix.stopped_at.has_value();
}

}  // namespace treedet

#include "common.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "treedet/determinize.hpp"
#include "treedet/errors.hpp"

namespace treedet::testing {

namespace {

Fta lists_base() {
    Fta fta;
    fta.name = "lists";
    SymbolId nil = fta.sig.add("nil", 0);
    SymbolId cons = fta.sig.add("cons", 2);
    SymbolId zero = fta.sig.add("zero", 0);
    StateId list = fta.add_state("list");
    StateId listlist = fta.add_state("listlist");
    StateId any = fta.add_state("any");
    fta.add_transition(nil, {}, list);
    fta.add_transition(cons, {any, list}, list);
    fta.add_transition(nil, {}, listlist);
    fta.add_transition(cons, {list, listlist}, listlist);
    fta.add_transition(nil, {}, any);
    fta.add_transition(cons, {any, any}, any);
    fta.add_transition(zero, {}, any);
    return fta;
}

}  // namespace

Fta lists_fta() {
    Fta fta = lists_base();
    fta.set_final(0);
    fta.set_final(1);
    return fta;
}

Fta list_only_fta() {
    Fta fta = lists_base();
    fta.name = "list";
    fta.set_final(0);
    return fta;
}

Fta listlist_only_fta() {
    Fta fta = lists_base();
    fta.name = "listlist";
    fta.set_final(1);
    return fta;
}

Fta listnum_fta() {
    Fta fta;
    fta.name = "listnum";
    SymbolId nil = fta.sig.add("nil", 0);
    SymbolId cons = fta.sig.add("cons", 2);
    SymbolId zero = fta.sig.add("zero", 0);
    SymbolId s = fta.sig.add("s", 1);
    StateId list = fta.add_state("list");
    StateId num = fta.add_state("num");
    fta.set_final(list);
    fta.add_transition(nil, {}, list);
    fta.add_transition(cons, {num, list}, list);
    fta.add_transition(zero, {}, num);
    fta.add_transition(s, {num}, num);
    return fta;
}

namespace {

Signature random_signature(std::mt19937_64& rng) {
    while (true) {
        Signature sig;
        std::uniform_int_distribution<int> nsyms_d(1, 4);
        const int nsyms = nsyms_d(rng);
        int constants = 0;
        for (int i = 0; i < nsyms; ++i) {
            std::uniform_int_distribution<int> arity_d(0, 2);
            uint32_t arity = static_cast<uint32_t>(arity_d(rng));
            if (i == nsyms - 1 && constants == 0) arity = 0;
            if (arity == 0) ++constants;
            sig.add((arity == 0 ? "a" : arity == 1 ? "g" : "f") + std::to_string(i), arity);
        }
        // keep depth-4 corpora enumerable
        if (count_terms(sig, 4) <= 20'000) return sig;
    }
}

}  // namespace

Fta random_fta(std::mt19937_64& rng, bool with_any) {
    Signature sig = random_signature(rng);
    Fta fta;
    fta.name = "rand";
    fta.sig = sig;
    std::uniform_int_distribution<int> nq_d(1, 6);
    const uint32_t nq = static_cast<uint32_t>(nq_d(rng));
    for (uint32_t q = 0; q < nq; ++q) fta.add_state("q" + std::to_string(q));

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<uint32_t> state_d(0, nq - 1);
    for (SymbolId f = 0; f < fta.sig.size(); ++f) {
        const uint32_t n = fta.sig.arity(f);
        std::vector<StateId> tuple(n, 0);
        while (true) {
            if (unit(rng) < 0.3) fta.add_transition(f, tuple, state_d(rng));
            if (n > 0 && unit(rng) < 0.08) fta.add_transition(f, tuple, state_d(rng));
            uint32_t i = 0;
            for (; i < n; ++i) {
                if (++tuple[i] < nq) break;
                tuple[i] = 0;
            }
            if (i == n) break;
        }
    }
    for (uint32_t q = 0; q < nq; ++q)
        if (unit(rng) < 0.35) fta.set_final(q);
    return with_any ? add_any(fta, "any") : fta;
}

std::pair<Fta, Fta> random_fta_pair(std::mt19937_64& rng) {
    Fta a = random_fta(rng, false);
    Fta b = random_fta(rng, false);
    // regenerate the second automaton over the first one's signature
    b.sig = a.sig;
    b.delta.clear();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const uint32_t nq = static_cast<uint32_t>(b.num_states());
    std::uniform_int_distribution<uint32_t> state_d(0, nq - 1);
    for (SymbolId f = 0; f < b.sig.size(); ++f) {
        const uint32_t n = b.sig.arity(f);
        std::vector<StateId> tuple(n, 0);
        while (true) {
            if (unit(rng) < 0.3) b.add_transition(f, tuple, state_d(rng));
            uint32_t i = 0;
            for (; i < n; ++i) {
                if (++tuple[i] < nq) break;
                tuple[i] = 0;
            }
            if (i == n) break;
        }
    }
    return {std::move(a), std::move(b)};
}

TermPool TermPool::build(const Signature& sig, uint32_t max_depth) {
    TermPool pool;
    size_t prev_start = 0;
    for (uint32_t d = 1; d <= max_depth; ++d) {
        const size_t level_start = pool.nodes.size();
        if (d == 1) {
            for (SymbolId f = 0; f < sig.size(); ++f)
                if (sig.arity(f) == 0) {
                    pool.nodes.push_back({f, {}});
                    pool.depth_of.push_back(1);
                }
        } else {
            if (level_start == prev_start) break;
            for (SymbolId f = 0; f < sig.size(); ++f) {
                const uint32_t n = sig.arity(f);
                if (n == 0) continue;
                std::vector<uint32_t> idx(n, 0);
                while (true) {
                    bool has_deep = false;
                    for (uint32_t i : idx)
                        if (i >= prev_start) has_deep = true;
                    if (has_deep) {
                        pool.nodes.push_back({f, idx});
                        pool.depth_of.push_back(d);
                    }
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
    return pool;
}

Term TermPool::term(uint32_t idx) const {
    const Node& n = nodes[idx];
    std::vector<Term> children;
    children.reserve(n.children.size());
    for (uint32_t c : n.children) children.push_back(term(c));
    return Term(n.func, std::move(children));
}

std::vector<DynBitset> TermPool::eval(const Fta& fta) const {
    const uint32_t nq = static_cast<uint32_t>(fta.num_states());
    std::vector<DynBitset> out(nodes.size(), DynBitset(nq));
    for (uint32_t i = 0; i < nodes.size(); ++i) {
        const Node& node = nodes[i];
        for (const Transition& t : fta.delta) {
            if (t.func != node.func) continue;
            bool match = true;
            for (size_t j = 0; j < t.args.size() && match; ++j)
                match = out[node.children[j]].test(t.args[j]);
            if (match) out[i].set(t.rhs);
        }
    }
    return out;
}

std::vector<DynBitset> TermPool::eval(const Dfta& dfta) const {
    const uint32_t nd = static_cast<uint32_t>(dfta.num_states());
    std::vector<DynBitset> out(nodes.size(), DynBitset(nd));
    for (uint32_t i = 0; i < nodes.size(); ++i) {
        const Node& node = nodes[i];
        for (const ProductTransition& pt : dfta.delta) {
            if (pt.func != node.func) continue;
            bool match = true;
            for (size_t j = 0; j < pt.args.size() && match; ++j) {
                const DynBitset& child = out[node.children[j]];
                match = pt.args[j].dont_care ? child.any() : pt.args[j].states.intersects(child);
            }
            if (match) out[i].set(pt.rhs);
        }
    }
    return out;
}

namespace {

// Term over Sigma plus state constants, for the rewrite-closure oracle.
struct RTerm {
    bool is_state = false;
    uint32_t id = 0;  // symbol or state
    std::vector<RTerm> kids;

    bool operator==(const RTerm&) const = default;
};

void render(const RTerm& t, std::string& out) {
    if (t.is_state) {
        out += '#';
        out += std::to_string(t.id);
        return;
    }
    out += 's';
    out += std::to_string(t.id);
    if (!t.kids.empty()) {
        out += '(';
        for (size_t i = 0; i < t.kids.size(); ++i) {
            if (i) out += ',';
            render(t.kids[i], out);
        }
        out += ')';
    }
}

RTerm lift(const Term& t) {
    RTerm r;
    r.id = t.root;
    for (const Term& c : t.children) r.kids.push_back(lift(c));
    return r;
}

// All single-step rewrites of t.
void rewrites(const Fta& fta, const RTerm& t, std::vector<RTerm>& out) {
    if (t.is_state) return;
    // redex at the root: every child is a state constant matching a lhs
    for (const Transition& tr : fta.delta) {
        if (tr.func != t.id || tr.args.size() != t.kids.size()) continue;
        bool match = true;
        for (size_t i = 0; i < tr.args.size() && match; ++i)
            match = t.kids[i].is_state && t.kids[i].id == tr.args[i];
        if (match) {
            RTerm r;
            r.is_state = true;
            r.id = tr.rhs;
            out.push_back(std::move(r));
        }
    }
    // or inside some child
    for (size_t i = 0; i < t.kids.size(); ++i) {
        std::vector<RTerm> sub;
        rewrites(fta, t.kids[i], sub);
        for (RTerm& s : sub) {
            RTerm copy = t;
            copy.kids[i] = std::move(s);
            out.push_back(std::move(copy));
        }
    }
}

}  // namespace

std::vector<StateId> eval_by_rewriting(const Fta& fta, const Term& t) {
    std::deque<RTerm> queue;
    std::unordered_set<std::string> seen;
    std::vector<StateId> reached;

    queue.push_back(lift(t));
    {
        std::string key;
        render(queue.back(), key);
        seen.insert(key);
    }
    while (!queue.empty()) {
        RTerm cur = std::move(queue.front());
        queue.pop_front();
        if (cur.is_state) {
            reached.push_back(cur.id);
            continue;
        }
        std::vector<RTerm> next;
        rewrites(fta, cur, next);
        for (RTerm& n : next) {
            std::string key;
            render(n, key);
            if (seen.insert(key).second) queue.push_back(std::move(n));
        }
    }
    std::sort(reached.begin(), reached.end());
    reached.erase(std::unique(reached.begin(), reached.end()), reached.end());
    return reached;
}

std::set<MemberSet> state_sets(const Dfta& d) {
    std::set<MemberSet> out;
    for (const auto& m : d.state_members) out.insert(m);
    return out;
}

std::set<MemberSet> final_sets(const Dfta& d) {
    std::set<MemberSet> out;
    for (uint32_t q : d.finals) out.insert(d.state_members[q]);
    return out;
}

std::set<ExpandedKey> expanded_set(const Dfta& d) {
    std::set<ExpandedKey> out;
    for (const DftaTransition& t : expand(d)) {
        std::vector<MemberSet> args;
        args.reserve(t.args.size());
        for (uint32_t q : t.args) args.push_back(d.state_members[q]);
        out.emplace(t.func, std::move(args), d.state_members[t.rhs]);
    }
    return out;
}

}  // namespace treedet::testing

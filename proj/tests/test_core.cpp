#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "common.hpp"
#include "treedet/determinize.hpp"
#include "treedet/errors.hpp"
#include "treedet/eval.hpp"

using namespace treedet;
using namespace treedet::testing;

namespace {

Term t(const Fta& fta, const std::string& s) { return parse_term(fta.sig, s); }

std::vector<std::string> state_names_of(const Fta& fta, const std::vector<StateId>& qs) {
    std::vector<std::string> out;
    for (StateId q : qs) out.push_back(fta.state_names[q]);
    return out;
}

}  // namespace

TEST_CASE("bitset basics") {
    DynBitset a(130), b(130);
    a.set(0);
    a.set(64);
    a.set(129);
    b.set(64);
    CHECK(a.count() == 3);
    CHECK(a.intersects(b));
    CHECK(b.is_subset_of(a));
    CHECK_FALSE(a.is_subset_of(b));
    DynBitset c = a;
    c &= b;
    CHECK(c.count() == 1);
    CHECK(c.test(64));
    CHECK(a.members() == std::vector<uint32_t>{0, 64, 129});

    SetPool pool;
    CHECK(pool.intern(a) == 0);
    CHECK(pool.intern(b) == 1);
    CHECK(pool.intern(a) == 0);
    CHECK(pool.size() == 2);
}

TEST_CASE("validate accepts the lists automaton") {
    CHECK(validate(lists_fta()).empty());
}

TEST_CASE("validate flags finals outside Q") {
    Fta fta = lists_fta();
    fta.finals.push_back(99);
    auto diags = validate(fta);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].find("final state") != std::string::npos);
}

TEST_CASE("validate flags arity mismatches") {
    Fta fta = lists_fta();
    fta.delta.push_back({*fta.sig.find("cons"), {0}, 0});
    auto diags = validate(fta);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].find("arity") != std::string::npos);
}

TEST_CASE("eval_states on the lists automaton") {
    Fta fta = lists_fta();
    CHECK(state_names_of(fta, eval_states(fta, t(fta, "nil"))) ==
          std::vector<std::string>{"list", "listlist", "any"});
    CHECK(state_names_of(fta, eval_states(fta, t(fta, "zero"))) ==
          std::vector<std::string>{"any"});
}

TEST_CASE("eval_states single rule") {
    Fta fta;
    SymbolId a = fta.sig.add("a", 0);
    StateId q = fta.add_state("q");
    fta.add_transition(a, {}, q);
    CHECK(eval_states(fta, Term(a)) == std::vector<StateId>{q});
}

TEST_CASE("eval_states matches the rewrite-closure oracle") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 15; ++i) {
        Fta fta = random_fta(rng, i % 2 == 0);
        TermPool pool = TermPool::build(fta.sig, 3);
        for (uint32_t j = 0; j < pool.nodes.size(); j += 3) {
            Term term = pool.term(j);
            CHECK(eval_states(fta, term) == eval_by_rewriting(fta, term));
        }
    }
}

TEST_CASE("accepts") {
    Fta fta = lists_fta();
    CHECK(accepts(fta, t(fta, "cons(nil,nil)")));   // a list of lists
    CHECK_FALSE(accepts(fta, t(fta, "zero")));

    Fta no_finals = lists_fta();
    no_finals.finals.clear();
    for (const Term& term : enumerate_terms(no_finals.sig, 3))
        CHECK_FALSE(accepts(no_finals, term));
}

TEST_CASE("is_deterministic") {
    CHECK_FALSE(is_deterministic(lists_fta()));  // nil occurs as three lhss

    Fta empty;
    empty.sig.add("a", 0);
    empty.add_state("q");
    CHECK(is_deterministic(empty));

    Fta det = defactor(determinize(lists_fta()));
    CHECK(is_deterministic(det));
}

TEST_CASE("is_complete") {
    CHECK(is_complete(defactor(determinize(lists_fta(), {.complete = true}))));
    CHECK_FALSE(is_complete(listnum_fta()));  // no lhs s(list)

    Fta tiny;
    SymbolId a = tiny.sig.add("a", 0);
    StateId q = tiny.add_state("q");
    tiny.add_transition(a, {}, q);
    CHECK(is_complete(tiny));

    Fta big = lists_fta();
    CHECK_THROWS_AS(is_complete(big, 5), ResourceLimitError);
}

TEST_CASE("enumerate_terms small signatures") {
    Signature only_a;
    only_a.add("a", 0);
    auto terms = enumerate_terms(only_a, 2);
    REQUIRE(terms.size() == 1);
    CHECK(terms[0] == Term(0));

    Signature af;
    af.add("a", 0);
    af.add("f", 1);
    auto terms2 = enumerate_terms(af, 2);
    REQUIRE(terms2.size() == 2);
    CHECK(to_string(af, terms2[0]) == "a");
    CHECK(to_string(af, terms2[1]) == "f(a)");
}

TEST_CASE("enumerate_terms on the lists signature at depth 3") {
    // Independent count: N(1)=2 constants; N(d) = 2 + N(d-1)^2 via cons.
    uint64_t n1 = 2, n2 = 2 + n1 * n1, n3 = 2 + n2 * n2;
    CHECK(n3 == 38);

    Fta fta = lists_fta();
    auto terms = enumerate_terms(fta.sig, 3);
    CHECK(terms.size() == 38);
    CHECK(count_terms(fta.sig, 3) == 38);

    // distinct and depth-bounded, so counting proves completeness
    std::set<std::string> rendered;
    for (const Term& term : terms) {
        CHECK(term.depth() <= 3);
        rendered.insert(to_string(fta.sig, term));
    }
    CHECK(rendered.size() == terms.size());
}

TEST_CASE("enumerate_terms prefix property") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 8; ++i) {
        Fta fta = random_fta(rng, false);
        auto small = enumerate_terms(fta.sig, 3);
        auto large = enumerate_terms(fta.sig, 4);
        REQUIRE(small.size() <= large.size());
        for (size_t j = 0; j < small.size(); ++j) CHECK(small[j] == large[j]);
        CHECK(large.size() == count_terms(fta.sig, 4));
        for (const Term& term : large) CHECK(term.depth() <= 4);
    }
}

TEST_CASE("enumerate_terms with no constants") {
    Signature sig;
    sig.add("f", 2);
    CHECK(enumerate_terms(sig, 4).empty());
}

TEST_CASE("term parsing round-trips") {
    Fta fta = lists_fta();
    for (const std::string& s : {"nil", "zero", "cons(nil,zero)", "cons(cons(nil,nil),zero)"})
        CHECK(to_string(fta.sig, parse_term(fta.sig, s)) == s);
    CHECK_THROWS_AS(parse_term(fta.sig, "cons(nil)"), InputError);
    CHECK_THROWS_AS(parse_term(fta.sig, "what"), InputError);
}

namespace {

// The worked example's eight product transitions over d0={list,listlist,any},
// d1={any,list}, d2={any}: nil -> d0, zero -> d2, and six cons rows.
Dfta paper_product_form() {
    Fta fta = lists_fta();
    Dfta d;
    d.name = "paper";
    d.sig = fta.sig;
    d.source_state_names = fta.state_names;
    d.state_names = {"d0", "d1", "d2"};
    d.state_members = {{0, 1, 2}, {0, 2}, {2}};
    d.finals = {0, 1};
    auto arg = [](std::initializer_list<uint32_t> qs) {
        ArgSet a;
        a.states = DynBitset(3);
        for (uint32_t q : qs) a.states.set(q);
        return a;
    };
    SymbolId nil = 0, cons = 1, zero = 2;
    d.delta.push_back({nil, {}, 0});
    d.delta.push_back({zero, {}, 2});
    d.delta.push_back({cons, {arg({0, 1}), arg({0})}, 0});
    d.delta.push_back({cons, {arg({2}), arg({0})}, 1});
    d.delta.push_back({cons, {arg({0, 1}), arg({2})}, 2});
    d.delta.push_back({cons, {arg({2}), arg({2})}, 2});
    d.delta.push_back({cons, {arg({0, 1}), arg({1})}, 1});
    d.delta.push_back({cons, {arg({2}), arg({1})}, 1});
    return d;
}

}  // namespace

TEST_CASE("expand the paper's eight product transitions into eleven") {
    Dfta d = paper_product_form();
    auto expanded = expand(d);
    CHECK(expanded.size() == 11);
    CHECK(estimate_expanded_count(d) == 11);

    // single product transition with argument sets of sizes 2 and 1
    Dfta one = d;
    one.delta = {d.delta[2]};
    CHECK(expand(one).size() == 2);

    // all-singleton product transitions expand to themselves
    Dfta single = d;
    single.delta = {d.delta[3]};
    auto ex = expand(single);
    REQUIRE(ex.size() == 1);
    CHECK(ex[0].args == std::vector<uint32_t>{2, 0});
    CHECK(ex[0].rhs == 1);

    Dfta empty = d;
    empty.delta.clear();
    CHECK(estimate_expanded_count(empty) == 0);
}

TEST_CASE("estimate counts argument-set products") {
    Dfta d = paper_product_form();
    ArgSet a3;
    a3.states = DynBitset(3);
    a3.states.set(0);
    a3.states.set(1);
    a3.states.set(2);
    ArgSet a2;
    a2.states = DynBitset(3);
    a2.states.set(0);
    a2.states.set(1);
    d.delta = {{1, {a3, a2}, 0}};
    CHECK(estimate_expanded_count(d) == 6);

    // a don't-care position counts the full state set
    d.delta[0].args[0].dont_care = true;
    CHECK(estimate_expanded_count(d) == 6);
}

TEST_CASE("defactor inlines product transitions") {
    Dfta d = paper_product_form();
    d.delta = {d.delta[2]};  // cons({d0,d1},{d0}) -> d0
    Fta plain = defactor(d);
    REQUIRE(plain.delta.size() == 2);
    CHECK(plain.state_names == std::vector<std::string>{"d0", "d1", "d2"});
    std::set<std::vector<StateId>> lhss;
    for (const Transition& tr : plain.delta) {
        CHECK(tr.rhs == 0);
        lhss.insert(tr.args);
    }
    CHECK(lhss == std::set<std::vector<StateId>>{{0, 0}, {1, 0}});
}

TEST_CASE("defactor preserves acceptance at depth 4") {
    Dfta d = paper_product_form();
    Fta plain = defactor(d);
    Fta input = lists_fta();
    for (const Term& term : enumerate_terms(input.sig, 4)) {
        CHECK(accepts(d, term) == accepts(plain, term));
        CHECK(accepts(d, term) == accepts(input, term));
    }
}

TEST_CASE("product_view wraps a plain automaton") {
    Fta fta = lists_fta();
    Dfta view = product_view(fta);
    CHECK(view.num_states() == fta.num_states());
    CHECK(expand(view).size() == fta.delta.size());
    for (const Term& term : enumerate_terms(fta.sig, 3))
        CHECK(accepts(view, term) == accepts(fta, term));
}

TEST_CASE("expanded singleton product form re-expands to itself") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 10; ++i) {
        Fta fta = random_fta(rng, false);
        Dfta d = determinize(fta);
        auto once = expand(d);
        // feed the expansion back as singleton product transitions
        Dfta again = d;
        again.delta.clear();
        for (const DftaTransition& tr : once) {
            ProductTransition pt;
            pt.func = tr.func;
            pt.rhs = tr.rhs;
            for (uint32_t q : tr.args) {
                ArgSet a;
                a.states = DynBitset(static_cast<uint32_t>(d.num_states()));
                a.states.set(q);
                pt.args.push_back(std::move(a));
            }
            again.delta.push_back(std::move(pt));
        }
        CHECK(expand(again) == once);
    }
}

TEST_CASE("witnesses exist exactly for productive states") {
    Fta fta = lists_fta();
    Dfta d = determinize(fta, {.complete = true});
    auto ws = state_witnesses(d);
    for (uint32_t q = 0; q < d.num_states(); ++q) {
        REQUIRE(ws[q].has_value());
        auto reached = eval_states(d, *ws[q]);
        REQUIRE(reached.size() == 1);
        CHECK(reached[0] == q);
    }
}

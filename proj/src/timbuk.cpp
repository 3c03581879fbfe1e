#include "treedet/timbuk.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "treedet/errors.hpp"

namespace treedet {

namespace {

bool ident_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ',' &&
           c != '{' && c != '}' && c != ':' && c != '%' && c != '-' && c != '>' && c != '<' &&
           c != ';' && c != '=';
}

enum class Tok { Ident, Arrow, LParen, RParen, LBrace, RBrace, Comma, Colon, Equals, End };

struct Lexer {
    const std::string& s;
    size_t pos = 0;
    int line = 1, col = 1;

    Tok tok = Tok::End;
    std::string text;
    int tok_line = 1, tok_col = 1;

    explicit Lexer(const std::string& src) : s(src) { advance(); }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, tok_line, tok_col); }

    void bump(size_t n = 1) {
        for (size_t i = 0; i < n; ++i) {
            if (pos < s.size() && s[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++pos;
        }
    }

    void skip_ws() {
        while (pos < s.size()) {
            char c = s[pos];
            if (c == '%') {
                while (pos < s.size() && s[pos] != '\n') bump();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                bump();
            } else {
                break;
            }
        }
    }

    void advance() {
        skip_ws();
        tok_line = line;
        tok_col = col;
        if (pos >= s.size()) {
            tok = Tok::End;
            text.clear();
            return;
        }
        char c = s[pos];
        switch (c) {
            case '(': tok = Tok::LParen; bump(); return;
            case ')': tok = Tok::RParen; bump(); return;
            case '{': tok = Tok::LBrace; bump(); return;
            case '}': tok = Tok::RBrace; bump(); return;
            case ',': tok = Tok::Comma; bump(); return;
            case ':': tok = Tok::Colon; bump(); return;
            case '=': tok = Tok::Equals; bump(); return;
            default: break;
        }
        if (c == '-' && pos + 1 < s.size() && s[pos + 1] == '>') {
            tok = Tok::Arrow;
            bump(2);
            return;
        }
        if (!ident_char(c)) throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        size_t start = pos;
        while (pos < s.size() && ident_char(s[pos])) bump();
        tok = Tok::Ident;
        text = s.substr(start, pos - start);
    }

    std::string expect_ident(const std::string& what) {
        if (tok != Tok::Ident) fail("expected " + what);
        std::string out = text;
        advance();
        return out;
    }

    void expect(Tok t, const std::string& what) {
        if (tok != t) fail("expected " + what);
        advance();
    }

    void expect_keyword(const std::string& kw) {
        if (tok != Tok::Ident || text != kw) fail("expected '" + kw + "'");
        advance();
    }

    bool at_keyword(const std::string& kw) const { return tok == Tok::Ident && text == kw; }

    uint32_t expect_arity() {
        if (tok != Tok::Ident || text.empty() ||
            !std::all_of(text.begin(), text.end(),
                         [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            fail("expected a non-negative arity");
        unsigned long v = std::stoul(text);
        advance();
        return static_cast<uint32_t>(v);
    }
};

// Header shared by both formats: Ops, Automaton, States, Final States.
struct Header {
    Signature sig;
    std::string name;
    std::vector<std::string> state_names;
    std::vector<uint32_t> finals;
};

Header parse_header(Lexer& lx) {
    Header h;
    lx.expect_keyword("Ops");
    while (lx.tok == Tok::Ident && !lx.at_keyword("Automaton")) {
        std::string name = lx.expect_ident("a symbol name");
        lx.expect(Tok::Colon, "':' after symbol name");
        uint32_t arity = lx.expect_arity();
        if (h.sig.find(name)) lx.fail("duplicate symbol '" + name + "'");
        h.sig.add(name, arity);
    }
    lx.expect_keyword("Automaton");
    h.name = lx.expect_ident("an automaton name");

    std::unordered_map<std::string, uint32_t> state_ids;
    lx.expect_keyword("States");
    while (lx.tok == Tok::Ident && !lx.at_keyword("Final")) {
        std::string name = lx.expect_ident("a state name");
        if (state_ids.count(name)) lx.fail("duplicate state '" + name + "'");
        if (h.sig.find(name)) lx.fail("state '" + name + "' clashes with a symbol name");
        state_ids.emplace(name, static_cast<uint32_t>(h.state_names.size()));
        h.state_names.push_back(name);
    }
    lx.expect_keyword("Final");
    lx.expect_keyword("States");
    while (lx.tok == Tok::Ident && !lx.at_keyword("Transitions")) {
        std::string name = lx.expect_ident("a state name");
        auto it = state_ids.find(name);
        if (it == state_ids.end()) lx.fail("undeclared final state '" + name + "'");
        h.finals.push_back(it->second);
    }
    std::sort(h.finals.begin(), h.finals.end());
    h.finals.erase(std::unique(h.finals.begin(), h.finals.end()), h.finals.end());
    lx.expect_keyword("Transitions");
    return h;
}

uint32_t lookup_state(Lexer& lx, const std::vector<std::string>& names,
                      const std::string& name) {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<uint32_t>(i);
    lx.fail("undeclared state '" + name + "'");
}

SymbolId lookup_symbol(Lexer& lx, const Signature& sig, const std::string& name) {
    auto f = sig.find(name);
    if (!f) lx.fail("undeclared symbol '" + name + "'");
    return *f;
}

}  // namespace

Fta parse_timbuk(const std::string& text) {
    Lexer lx(text);
    Header h = parse_header(lx);

    Fta fta;
    fta.sig = std::move(h.sig);
    fta.name = std::move(h.name);
    fta.state_names = h.state_names;
    fta.finals.assign(h.finals.begin(), h.finals.end());

    while (lx.tok != Tok::End) {
        std::string fname = lx.expect_ident("a transition");
        SymbolId f = lookup_symbol(lx, fta.sig, fname);
        std::vector<StateId> args;
        if (lx.tok == Tok::LParen) {
            lx.advance();
            if (lx.tok != Tok::RParen) {
                while (true) {
                    args.push_back(
                        lookup_state(lx, fta.state_names, lx.expect_ident("a state name")));
                    if (lx.tok == Tok::Comma) {
                        lx.advance();
                        continue;
                    }
                    break;
                }
            }
            lx.expect(Tok::RParen, "')'");
        }
        if (args.size() != fta.sig.arity(f))
            lx.fail("symbol '" + fname + "' has arity " + std::to_string(fta.sig.arity(f)) +
                    ", transition uses " + std::to_string(args.size()) + " arguments");
        lx.expect(Tok::Arrow, "'->'");
        StateId rhs = lookup_state(lx, fta.state_names, lx.expect_ident("a state name"));
        fta.add_transition(f, std::move(args), rhs);
    }
    return fta;
}

std::string serialize_timbuk(const Fta& fta) {
    std::ostringstream os;
    os << "Ops";
    for (const Symbol& s : fta.sig.symbols()) os << ' ' << s.name << ':' << s.arity;
    os << "\n\nAutomaton " << fta.name << "\n\nStates";
    for (const std::string& n : fta.state_names) os << ' ' << n;
    os << "\n\nFinal States";
    for (StateId q : fta.finals) os << ' ' << fta.state_names[q];
    os << "\n\nTransitions\n";

    std::vector<std::tuple<SymbolId, std::vector<StateId>, StateId>> rows;
    rows.reserve(fta.delta.size());
    for (const Transition& t : fta.delta) rows.emplace_back(t.func, t.args, t.rhs);
    std::sort(rows.begin(), rows.end());
    for (const auto& [f, args, rhs] : rows) {
        os << fta.sig.name(f);
        if (!args.empty()) {
            os << '(';
            for (size_t i = 0; i < args.size(); ++i) {
                if (i) os << ',';
                os << fta.state_names[args[i]];
            }
            os << ')';
        }
        os << " -> " << fta.state_names[rhs] << '\n';
    }
    return os.str();
}

Dfta parse_product(const std::string& text) {
    Lexer lx(text);
    Header h = parse_header(lx);

    Dfta d;
    d.sig = std::move(h.sig);
    d.name = std::move(h.name);
    d.state_names = h.state_names;
    d.finals.assign(h.finals.begin(), h.finals.end());
    const uint32_t nd_states = static_cast<uint32_t>(d.state_names.size());

    while (lx.tok != Tok::End && !lx.at_keyword("StateMap")) {
        std::string fname = lx.expect_ident("a transition");
        SymbolId f = lookup_symbol(lx, d.sig, fname);
        ProductTransition pt;
        pt.func = f;
        if (lx.tok == Tok::LParen) {
            lx.advance();
            if (lx.tok != Tok::RParen) {
                while (true) {
                    ArgSet a;
                    a.states = DynBitset(nd_states);
                    if (lx.tok == Tok::LBrace) {
                        lx.advance();
                        bool empty = true;
                        while (lx.tok == Tok::Ident) {
                            a.states.set(
                            lookup_state(lx, d.state_names, lx.expect_ident("a state name")));
                            empty = false;
                            if (lx.tok == Tok::Comma)
                                lx.advance();
                            else
                                break;
                        }
                        if (empty) lx.fail("empty brace set");
                        lx.expect(Tok::RBrace, "'}'");
                    } else if (lx.tok == Tok::Ident && lx.text == "_") {
                        a.dont_care = true;
                        lx.advance();
                    } else {
                        lx.fail("expected '{' or '_' in a product argument");
                    }
                    pt.args.push_back(std::move(a));
                    if (lx.tok == Tok::Comma) {
                        lx.advance();
                        continue;
                    }
                    break;
                }
            }
            lx.expect(Tok::RParen, "')'");
        }
        if (pt.args.size() != d.sig.arity(f))
            lx.fail("symbol '" + fname + "' has arity " + std::to_string(d.sig.arity(f)) +
                    ", transition uses " + std::to_string(pt.args.size()) + " arguments");
        lx.expect(Tok::Arrow, "'->'");
        pt.rhs = lookup_state(lx, d.state_names, lx.expect_ident("a state name"));
        d.delta.push_back(std::move(pt));
    }

    if (lx.at_keyword("StateMap")) {
        lx.advance();
        d.state_members.assign(nd_states, {});
        std::unordered_map<std::string, StateId> source_ids;
        while (lx.tok == Tok::Ident) {
            uint32_t q = lookup_state(lx, d.state_names, lx.expect_ident("a DFTA state name"));
            lx.expect(Tok::Equals, "'='");
            lx.expect(Tok::LBrace, "'{'");
            std::vector<StateId> members;
            while (lx.tok == Tok::Ident) {
                std::string m = lx.expect_ident("a source state name");
                auto [it, fresh] = source_ids.emplace(
                    m, static_cast<StateId>(d.source_state_names.size()));
                if (fresh) d.source_state_names.push_back(m);
                members.push_back(it->second);
                if (lx.tok == Tok::Comma)
                    lx.advance();
                else
                    break;
            }
            lx.expect(Tok::RBrace, "'}'");
            std::sort(members.begin(), members.end());
            d.state_members[q] = std::move(members);
        }
        if (lx.tok != Tok::End) lx.fail("unexpected input after StateMap");
    }
    return d;
}

namespace {

// Canonical sort key for a product transition within one automaton.
std::tuple<SymbolId, std::vector<std::vector<uint32_t>>, uint32_t> product_key(
    const ProductTransition& pt, size_t num_states) {
    std::vector<std::vector<uint32_t>> args;
    for (const ArgSet& a : pt.args) {
        if (a.dont_care) {
            // sorts after every explicit set of the same size budget
            args.push_back({UINT32_MAX});
        } else {
            args.push_back(a.states.members());
        }
    }
    (void)num_states;
    return {pt.func, std::move(args), pt.rhs};
}

}  // namespace

std::string serialize_product(const Dfta& dfta) {
    std::ostringstream os;
    os << "Ops";
    for (const Symbol& s : dfta.sig.symbols()) os << ' ' << s.name << ':' << s.arity;
    os << "\n\nAutomaton " << dfta.name << "\n\nStates";
    for (const std::string& n : dfta.state_names) os << ' ' << n;
    os << "\n\nFinal States";
    for (uint32_t q : dfta.finals) os << ' ' << dfta.state_names[q];
    os << "\n\nTransitions\n";

    std::vector<size_t> order(dfta.delta.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<std::tuple<SymbolId, std::vector<std::vector<uint32_t>>, uint32_t>> keys;
    keys.reserve(dfta.delta.size());
    for (const ProductTransition& pt : dfta.delta)
        keys.push_back(product_key(pt, dfta.num_states()));
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return keys[a] < keys[b]; });

    for (size_t i : order) {
        const ProductTransition& pt = dfta.delta[i];
        os << dfta.sig.name(pt.func);
        if (!pt.args.empty()) {
            os << '(';
            for (size_t j = 0; j < pt.args.size(); ++j) {
                if (j) os << ',';
                if (pt.args[j].dont_care) {
                    os << '_';
                } else {
                    os << '{';
                    bool first = true;
                    pt.args[j].states.for_each([&](uint32_t q) {
                        if (!first) os << ',';
                        first = false;
                        os << dfta.state_names[q];
                    });
                    os << '}';
                }
            }
            os << ')';
        }
        os << " -> " << dfta.state_names[pt.rhs] << '\n';
    }

    bool has_members = false;
    for (const auto& m : dfta.state_members)
        if (!m.empty()) has_members = true;
    if (has_members) {
        os << "\nStateMap\n";
        for (uint32_t q = 0; q < dfta.num_states(); ++q) {
            os << dfta.state_names[q] << " = {";
            bool first = true;
            for (StateId s : dfta.state_members[q]) {
                if (!first) os << ',';
                first = false;
                os << dfta.source_state_names[s];
            }
            os << "}\n";
        }
    }
    return os.str();
}

StatsRecord stats_record(const std::string& name, const std::string& mode, const Fta& input,
                         const Dfta* output, double time_millis, bool timed_out) {
    StatsRecord rec;
    rec.name = name;
    rec.mode = mode;
    rec.size_q = input.num_states();
    rec.size_delta = input.delta.size();
    rec.size_sigma = input.sig.size();
    rec.time_millis = time_millis;
    rec.timed_out = timed_out;
    if (output && !timed_out) {
        rec.size_qd = output->num_states();
        if (!output->states_only) {
            rec.size_delta_pi = output->delta.size();
            rec.est_delta_d = estimate_expanded_count(*output);
        }
        if (output->completed_with_any)
            rec.exact_completed_delta_d =
                completed_transition_count(output->sig, output->num_states());
    }
    return rec;
}

std::string to_json(const StatsRecord& rec) {
    nlohmann::json j;
    j["name"] = rec.name;
    j["mode"] = rec.mode;
    j["sizeQ"] = rec.size_q;
    j["sizeDelta"] = rec.size_delta;
    j["sizeSigma"] = rec.size_sigma;
    if (rec.size_qd) j["sizeQd"] = *rec.size_qd;
    if (rec.size_delta_pi) j["sizeDeltaPi"] = *rec.size_delta_pi;
    if (rec.est_delta_d) j["estDeltaD"] = *rec.est_delta_d;
    if (rec.exact_completed_delta_d) j["exactCompletedDeltaD"] = *rec.exact_completed_delta_d;
    j["timeMillis"] = rec.time_millis;
    j["timedOut"] = rec.timed_out;
    if (rec.error) j["error"] = *rec.error;
    return j.dump();
}

StatsRecord stats_from_json(const std::string& line) {
    nlohmann::json j = nlohmann::json::parse(line);
    StatsRecord rec;
    rec.name = j.at("name").get<std::string>();
    rec.mode = j.at("mode").get<std::string>();
    rec.size_q = j.at("sizeQ").get<uint64_t>();
    rec.size_delta = j.at("sizeDelta").get<uint64_t>();
    rec.size_sigma = j.at("sizeSigma").get<uint64_t>();
    if (j.contains("sizeQd")) rec.size_qd = j["sizeQd"].get<uint64_t>();
    if (j.contains("sizeDeltaPi")) rec.size_delta_pi = j["sizeDeltaPi"].get<uint64_t>();
    if (j.contains("estDeltaD")) rec.est_delta_d = j["estDeltaD"].get<uint64_t>();
    if (j.contains("exactCompletedDeltaD"))
        rec.exact_completed_delta_d = j["exactCompletedDeltaD"].get<uint64_t>();
    rec.time_millis = j.at("timeMillis").get<double>();
    rec.timed_out = j.at("timedOut").get<bool>();
    if (j.contains("error")) rec.error = j["error"].get<std::string>();
    return rec;
}

}  // namespace treedet

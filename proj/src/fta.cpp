#include "treedet/fta.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "treedet/errors.hpp"

namespace treedet {

Signature::Signature(std::vector<Symbol> symbols) {
    for (auto& s : symbols) add(s.name, s.arity);
}

SymbolId Signature::add(const std::string& name, uint32_t arity) {
    if (name.empty()) throw InputError("symbol name must be non-empty");
    if (find(name)) throw InputError("duplicate symbol '" + name + "'");
    symbols_.push_back(Symbol{name, arity});
    return static_cast<SymbolId>(symbols_.size() - 1);
}

std::optional<SymbolId> Signature::find(const std::string& name) const {
    for (size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i].name == name) return static_cast<SymbolId>(i);
    return std::nullopt;
}

uint32_t Signature::max_arity() const {
    uint32_t m = 0;
    for (const Symbol& s : symbols_) m = std::max(m, s.arity);
    return m;
}

StateId Fta::add_state(const std::string& display_name) {
    state_names.push_back(display_name);
    return static_cast<StateId>(state_names.size() - 1);
}

std::optional<StateId> Fta::find_state(const std::string& display_name) const {
    for (size_t i = 0; i < state_names.size(); ++i)
        if (state_names[i] == display_name) return static_cast<StateId>(i);
    return std::nullopt;
}

bool Fta::is_final(StateId q) const {
    return std::binary_search(finals.begin(), finals.end(), q);
}

void Fta::set_final(StateId q) {
    auto it = std::lower_bound(finals.begin(), finals.end(), q);
    if (it == finals.end() || *it != q) finals.insert(it, q);
}

void Fta::add_transition(SymbolId f, std::vector<StateId> args, StateId rhs) {
    Transition t{f, std::move(args), rhs};
    if (std::find(delta.begin(), delta.end(), t) == delta.end())
        delta.push_back(std::move(t));
}

bool Fta::operator==(const Fta& o) const {
    if (sig != o.sig || state_names != o.state_names) return false;
    if (finals != o.finals) return false;
    // Transition sets compared order-insensitively.
    if (delta.size() != o.delta.size()) return false;
    auto key = [](const Transition& t) { return std::tuple(t.func, t.args, t.rhs); };
    std::vector<std::tuple<SymbolId, std::vector<StateId>, StateId>> a, b;
    for (const auto& t : delta) a.push_back(key(t));
    for (const auto& t : o.delta) b.push_back(key(t));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

std::vector<std::string> validate(const Fta& fta) {
    std::vector<std::string> diags;
    const size_t nq = fta.num_states();

    std::unordered_set<std::string> sym_names;
    for (const Symbol& s : fta.sig.symbols()) {
        if (s.name.empty()) diags.push_back("empty symbol name in signature");
        if (!sym_names.insert(s.name).second)
            diags.push_back("duplicate symbol '" + s.name + "' in signature");
    }

    std::unordered_set<std::string> state_names;
    for (size_t i = 0; i < nq; ++i) {
        const std::string& n = fta.state_names[i];
        if (n.empty()) diags.push_back("empty state name at index " + std::to_string(i));
        if (!state_names.insert(n).second)
            diags.push_back("duplicate state name '" + n + "'");
        if (sym_names.count(n))
            diags.push_back("state '" + n + "' clashes with a symbol name");
    }

    for (StateId q : fta.finals)
        if (q >= nq)
            diags.push_back("final state index " + std::to_string(q) + " not in Q");

    for (const Transition& t : fta.delta) {
        if (t.func >= fta.sig.size()) {
            diags.push_back("transition uses unknown symbol id " + std::to_string(t.func));
            continue;
        }
        const Symbol& f = fta.sig.at(t.func);
        if (t.args.size() != f.arity)
            diags.push_back("transition for '" + f.name + "' has " +
                            std::to_string(t.args.size()) + " arguments, arity is " +
                            std::to_string(f.arity));
        for (StateId q : t.args)
            if (q >= nq)
                diags.push_back("transition for '" + f.name + "' uses unknown state index " +
                                std::to_string(q));
        if (t.rhs >= nq)
            diags.push_back("transition for '" + f.name + "' targets unknown state index " +
                            std::to_string(t.rhs));
    }
    return diags;
}

namespace {

bool ident_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ',' &&
           c != '{' && c != '}' && c != ':' && c != '%' && c != '-' && c != '>' && c != '<' &&
           c != ';' && c != '=';
}

struct TermCursor {
    const std::string& s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    std::string ident() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && ident_char(s[pos])) ++pos;
        if (pos == start)
            throw ParseError("expected a symbol name", 1, static_cast<int>(pos) + 1);
        return s.substr(start, pos - start);
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
};

Term parse_term_at(const Signature& sig, TermCursor& cur) {
    std::string name = cur.ident();
    auto f = sig.find(name);
    if (!f) throw InputError("unknown symbol '" + name + "'");
    Term t(*f);
    if (cur.eat('(')) {
        if (!cur.eat(')')) {
            do {
                t.children.push_back(parse_term_at(sig, cur));
            } while (cur.eat(','));
            if (!cur.eat(')'))
                throw ParseError("expected ')'", 1, static_cast<int>(cur.pos) + 1);
        }
    }
    if (t.children.size() != sig.arity(*f))
        throw InputError("symbol '" + name + "' has arity " + std::to_string(sig.arity(*f)) +
                         ", got " + std::to_string(t.children.size()) + " arguments");
    return t;
}

}  // namespace

Term parse_term(const Signature& sig, const std::string& text) {
    TermCursor cur{text};
    Term t = parse_term_at(sig, cur);
    if (!cur.eof())
        throw ParseError("trailing input after term", 1, static_cast<int>(cur.pos) + 1);
    return t;
}

std::string to_string(const Signature& sig, const Term& t) {
    std::string out = sig.name(t.root);
    if (!t.children.empty()) {
        out += '(';
        for (size_t i = 0; i < t.children.size(); ++i) {
            if (i) out += ',';
            out += to_string(sig, t.children[i]);
        }
        out += ')';
    }
    return out;
}

}  // namespace treedet

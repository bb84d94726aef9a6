#include "pgonal/family.hpp"

#include "pgonal/recipe.hpp"

#include <cctype>
#include <stdexcept>

namespace pgonal {

namespace {

struct FamNode {
    enum class Kind { Cyclic, Dihedral, A4, S4, A5, Product, SemiDirect };
    Kind kind;
    long long n = 0;               // cyclic/dihedral parameter, resolved
    std::vector<FamNode> factors;  // product factors / SD normal part
    long long m = 0;               // SD acting cyclic order
};

class FamParser {
public:
    FamParser(const std::string& s, const IntEnv& env) : s_(s), env_(env) {}

    FamNode parse() {
        FamNode n = expr();
        skip();
        if (pos_ < s_.size()) throw std::domain_error("trailing input in family: " + s_);
        return n;
    }

private:
    FamNode expr() {
        FamNode first = term();
        std::vector<FamNode> factors{std::move(first)};
        for (;;) {
            skip();
            if (pos_ < s_.size() && s_[pos_] == 'x') {
                ++pos_;
                factors.push_back(term());
            } else {
                break;
            }
        }
        if (factors.size() == 1) return std::move(factors[0]);
        FamNode prod;
        prod.kind = FamNode::Kind::Product;
        prod.factors = std::move(factors);
        return prod;
    }

    FamNode term() {
        skip();
        if (accept_word("SD(")) {
            FamNode sd;
            sd.kind = FamNode::Kind::SemiDirect;
            sd.factors.push_back(expr());
            skip();
            expect(',');
            FamNode top = term();
            if (top.kind != FamNode::Kind::Cyclic)
                throw std::domain_error("SD acting part must be cyclic: " + s_);
            sd.m = top.n;
            skip();
            expect(')');
            return sd;
        }
        if (accept_word("A4")) return simple(FamNode::Kind::A4);
        if (accept_word("S4")) return simple(FamNode::Kind::S4);
        if (accept_word("A5")) return simple(FamNode::Kind::A5);
        if (accept_word("C[")) return bracket(FamNode::Kind::Cyclic);
        if (accept_word("D[")) return bracket(FamNode::Kind::Dihedral);
        if (accept_word("(")) {
            FamNode inner = expr();
            skip();
            expect(')');
            return inner;
        }
        throw std::domain_error("malformed family expression: " + s_);
    }

    FamNode simple(FamNode::Kind k) {
        FamNode n;
        n.kind = k;
        return n;
    }

    FamNode bracket(FamNode::Kind k) {
        size_t start = pos_;
        int depth = 1;
        while (pos_ < s_.size() && depth > 0) {
            if (s_[pos_] == '[') ++depth;
            if (s_[pos_] == ']') --depth;
            ++pos_;
        }
        if (depth != 0) throw std::domain_error("missing ']' in family: " + s_);
        FamNode n;
        n.kind = k;
        n.n = eval_int_expr(s_.substr(start, pos_ - 1 - start), env_);
        if (n.n < 1) throw std::domain_error("family parameter must be positive: " + s_);
        return n;
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    void expect(char c) {
        if (pos_ >= s_.size() || s_[pos_] != c)
            throw std::domain_error(std::string("expected '") + c + "' in family: " + s_);
        ++pos_;
    }
    bool accept_word(const std::string& w) {
        skip();
        if (s_.compare(pos_, w.size(), w) == 0) { pos_ += w.size(); return true; }
        return false;
    }

    const std::string& s_;
    const IntEnv& env_;
    size_t pos_ = 0;
};

Table bare_cyclic(long long n) { return build_table(cyclic_recipe(static_cast<int>(n), "u")); }
Table bare_dihedral(long long n) {
    return build_table(dihedral_recipe(static_cast<int>(n), "u", "v"));
}
Table bare_named(FamNode::Kind k) {
    switch (k) {
        case FamNode::Kind::A4: return build_table(named_recipe(RecipeNode::Kind::A4, "u", "v"));
        case FamNode::Kind::S4: return build_table(named_recipe(RecipeNode::Kind::S4, "u", "v"));
        default: return build_table(named_recipe(RecipeNode::Kind::A5, "u", "v"));
    }
}

/// Direct product of bare tables (names and words are not propagated;
/// candidates are only used for isomorphism tests).
Table bare_direct(const Table& a, const Table& b) {
    Table t;
    t.n = a.n * b.n;
    t.mul.assign(static_cast<size_t>(t.n) * t.n, 0);
    t.inv.assign(t.n, 0);
    auto idx = [&](int x, int y) { return x * b.n + y; };
    for (int x1 = 0; x1 < a.n; ++x1)
        for (int y1 = 0; y1 < b.n; ++y1)
            for (int x2 = 0; x2 < a.n; ++x2)
                for (int y2 = 0; y2 < b.n; ++y2)
                    t.mul[static_cast<size_t>(idx(x1, y1)) * t.n + idx(x2, y2)] =
                        idx(a.at(x1, x2), b.at(y1, y2));
    for (int x = 0; x < a.n; ++x)
        for (int y = 0; y < b.n; ++y) t.inv[idx(x, y)] = idx(a.inv[x], b.inv[y]);
    t.id = idx(a.id, b.id);
    t.words.assign(t.n, "");
    return t;
}

/// N x| C_m with the C_m generator acting by the automorphism `aut`.
Table bare_semidirect_cyclic(const Table& nt, int m, const std::vector<int>& aut) {
    Table t;
    t.n = nt.n * m;
    t.mul.assign(static_cast<size_t>(t.n) * t.n, 0);
    t.inv.assign(t.n, 0);
    // powers of the automorphism
    std::vector<std::vector<int>> pw(m);
    pw[0].resize(nt.n);
    for (int x = 0; x < nt.n; ++x) pw[0][x] = x;
    for (int c = 1; c < m; ++c) {
        pw[c].resize(nt.n);
        for (int x = 0; x < nt.n; ++x) pw[c][x] = aut[pw[c - 1][x]];
    }
    auto idx = [&](int x, int c) { return x * m + c; };
    for (int x1 = 0; x1 < nt.n; ++x1)
        for (int c1 = 0; c1 < m; ++c1)
            for (int x2 = 0; x2 < nt.n; ++x2)
                for (int c2 = 0; c2 < m; ++c2)
                    t.mul[static_cast<size_t>(idx(x1, c1)) * t.n + idx(x2, c2)] =
                        idx(nt.at(x1, pw[c1][x2]), (c1 + c2) % m);
    for (int x = 0; x < nt.n; ++x)
        for (int c = 0; c < m; ++c) {
            int ci = (m - c) % m;
            t.inv[idx(x, c)] = idx(pw[ci][nt.inv[x]], ci);
        }
    t.id = idx(nt.id, 0);
    t.words.assign(t.n, "");
    return t;
}

std::vector<Table> instantiate(const FamNode& node) {
    switch (node.kind) {
        case FamNode::Kind::Cyclic: return {bare_cyclic(node.n)};
        case FamNode::Kind::Dihedral: return {bare_dihedral(node.n)};
        case FamNode::Kind::A4:
        case FamNode::Kind::S4:
        case FamNode::Kind::A5: return {bare_named(node.kind)};
        case FamNode::Kind::Product: {
            std::vector<Table> acc = instantiate(node.factors[0]);
            for (size_t f = 1; f < node.factors.size(); ++f) {
                std::vector<Table> next;
                for (const Table& a : acc)
                    for (const Table& b : instantiate(node.factors[f]))
                        next.push_back(bare_direct(a, b));
                acc = std::move(next);
            }
            return acc;
        }
        case FamNode::Kind::SemiDirect: {
            std::vector<Table> out;
            for (const Table& nt : instantiate(node.factors[0])) {
                auto autos = automorphisms_of_order_dividing(nt, static_cast<int>(node.m));
                for (const auto& a : autos)
                    out.push_back(bare_semidirect_cyclic(nt, static_cast<int>(node.m), a));
            }
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

} // namespace

bool matches_family(const Table& target, const std::string& family_expr, const IntEnv& env) {
    FamNode ast = FamParser(family_expr, env).parse();
    for (const Table& cand : instantiate(ast)) {
        if (cand.n != target.n) continue;
        if (is_isomorphic(target, cand).isomorphic) return true;
    }
    return false;
}

std::string identify_family(const Table& g) {
    const long long n = g.n;
    std::vector<std::string> candidates;
    auto add = [&](const std::string& s) { candidates.push_back(s); };
    auto num = [](long long v) { return std::to_string(v); };

    add("C[" + num(n) + "]");
    if (n == 12) add("A4");
    if (n == 24) { add("S4"); add("A4 x C[2]"); }
    if (n == 48) add("S4 x C[2]");
    if (n == 60) add("A5");
    if (n == 120) add("A5 x C[2]");
    if (n % 2 == 0) {
        add("D[" + num(n / 2) + "]");
        add("C[" + num(n / 2) + "] x C[2]");
    }
    if (n % 4 == 0) {
        add("D[" + num(n / 4) + "] x C[2]");
        add("C[" + num(n / 4) + "] x C[2] x C[2]");
    }
    if (n % 8 == 0) {
        add("D[" + num(n / 8) + "] x C[2] x C[2]");
        add("C[" + num(n / 8) + "] x C[2] x C[2] x C[2]");
    }
    if (n % 16 == 0) add("D[" + num(n / 16) + "] x C[2] x C[2] x C[2]");
    if (n % 12 == 0 && n > 12) add("C[" + num(n / 12) + "] x A4");
    if (n % 24 == 0 && n > 24) { add("D[" + num(n / 24) + "] x A4"); add("C[" + num(n / 24) + "] x S4"); }
    if (n % 48 == 0 && n > 48) add("D[" + num(n / 48) + "] x S4");
    if (n % 60 == 0 && n > 60) add("C[" + num(n / 60) + "] x A5");
    if (n % 120 == 0 && n > 120) add("D[" + num(n / 120) + "] x A5");
    if (n % 4 == 0) {
        add("SD(C[" + num(n / 2) + "],C[2])");
        add("SD(D[" + num(n / 4) + "],C[2])");
        add("SD(C[" + num(n / 4) + "] x C[2],C[2])");
    }
    if (n % 8 == 0) add("SD(C[" + num(n / 8) + "] x C[2] x C[2],C[2])");
    for (long long q = 3; q <= 6; ++q) {
        if (n % (2 * q) == 0 && n / (2 * q) > 1) {
            add("SD(D[" + num(n / (2 * q)) + "],C[" + num(q) + "])");
            add("SD(C[" + num(n / q) + "],C[" + num(q) + "])");
        }
    }

    for (const std::string& cand : candidates) {
        try {
            if (matches_family(g, cand)) return cand;
        } catch (const std::domain_error&) {
            // candidate out of bounds; skip
        }
    }
    return "unrecognized";
}

std::optional<std::string> spherical_family_member(const Table& g) {
    const long long n = g.n;
    std::vector<std::string> candidates;
    auto num = [](long long v) { return std::to_string(v); };
    if (n % 2 == 0) {
        candidates.push_back("D[" + num(n / 2) + "]");
        candidates.push_back("C[" + num(n / 2) + "] x C[2]");
    }
    if (n % 4 == 0) candidates.push_back("SD(D[" + num(n / 4) + "],C[2])");
    if (n == 24) { candidates.push_back("S4"); candidates.push_back("A4 x C[2]"); }
    if (n == 48) candidates.push_back("S4 x C[2]");
    if (n == 120) candidates.push_back("A5 x C[2]");
    for (const std::string& cand : candidates)
        if (matches_family(g, cand)) return cand;
    return std::nullopt;
}

} // namespace pgonal

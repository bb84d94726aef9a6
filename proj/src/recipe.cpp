#include "pgonal/recipe.hpp"

#include "pgonal/signature.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <numeric>
#include <set>

namespace pgonal {

// ---------------------------------------------------------------------------
// Integer expressions

namespace {

class ExprCursor {
public:
    ExprCursor(const std::string& s, const IntEnv& env) : s_(s), env_(env) {}

    long long parse() {
        long long v = sum();
        skip();
        if (pos_ < s_.size()) throw std::domain_error("trailing input in expression: " + s_);
        return v;
    }

    long long sum() {
        long long v = product();
        for (;;) {
            skip();
            if (accept('+')) v += product();
            else if (accept('-')) v -= product();
            else return v;
        }
    }
    long long product() {
        long long v = unary();
        for (;;) {
            skip();
            if (accept('*')) {
                v *= unary();
            } else if (accept('/')) {
                long long d = unary();
                if (d == 0) throw std::domain_error("division by zero in expression: " + s_);
                if (v % d != 0)
                    throw std::domain_error("non-exact division in expression: " + s_);
                v /= d;
            } else {
                return v;
            }
        }
    }
    long long unary() {
        skip();
        if (accept('-')) return -unary();
        return primary();
    }
    long long primary() {
        skip();
        if (accept('(')) {
            long long v = sum();
            skip();
            if (!accept(')')) throw std::domain_error("missing ')' in expression: " + s_);
            return v;
        }
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return std::stoll(s_.substr(start, pos_ - start));
        }
        if (pos_ < s_.size() &&
            (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                        s_[pos_] == '_'))
                ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            auto it = env_.find(name);
            if (it == env_.end())
                throw std::domain_error("unknown variable '" + name + "' in expression: " + s_);
            return it->second;
        }
        throw std::domain_error("malformed expression: " + s_);
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
        return false;
    }

    const std::string& s_;
    const IntEnv& env_;
    size_t pos_ = 0;
};

} // namespace

long long eval_int_expr(const std::string& text, const IntEnv& env) {
    return ExprCursor(text, env).parse();
}

// ---------------------------------------------------------------------------
// Words

namespace {

class WordCursor {
public:
    WordCursor(const Table& g, const std::string& s, const IntEnv& env)
        : g_(g), s_(s), env_(env) {}

    int parse() {
        int v = word();
        skip();
        if (pos_ < s_.size()) throw std::domain_error("trailing input in word: " + s_);
        return v;
    }

private:
    int word() {
        int v = factor();
        for (;;) {
            skip();
            if (accept('*')) v = g_.at(v, factor());
            else return v;
        }
    }
    int factor() {
        int base = atom();
        skip();
        if (accept('^')) {
            long long e = exponent();
            return g_.power(base, e);
        }
        return base;
    }
    int atom() {
        skip();
        if (accept('(')) {
            int v = word();
            skip();
            if (!accept(')')) throw std::domain_error("missing ')' in word: " + s_);
            return v;
        }
        if (pos_ < s_.size() && s_[pos_] == '1') { ++pos_; return g_.id; }
        if (pos_ < s_.size() &&
            (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                        s_[pos_] == '_'))
                ++pos_;
            return g_.named_element(s_.substr(start, pos_ - start));
        }
        throw std::domain_error("malformed word: " + s_);
    }
    long long exponent() {
        skip();
        if (accept('(')) {
            // balanced integer expression
            size_t start = pos_;
            int depth = 1;
            while (pos_ < s_.size() && depth > 0) {
                if (s_[pos_] == '(') ++depth;
                if (s_[pos_] == ')') --depth;
                ++pos_;
            }
            if (depth != 0) throw std::domain_error("missing ')' in word exponent: " + s_);
            return eval_int_expr(s_.substr(start, pos_ - 1 - start), env_);
        }
        size_t start = pos_;
        if (accept('-')) {}
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) throw std::domain_error("missing exponent in word: " + s_);
        return std::stoll(s_.substr(start, pos_ - start));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
        return false;
    }

    const Table& g_;
    const std::string& s_;
    const IntEnv& env_;
    size_t pos_ = 0;
};

} // namespace

int eval_word(const Table& g, const std::string& text, const IntEnv& env) {
    return WordCursor(g, text, env).parse();
}

// ---------------------------------------------------------------------------
// Recipe constructors

RecipePtr cyclic_recipe(int n, const std::string& gen) {
    auto r = std::make_shared<RecipeNode>();
    r->kind = RecipeNode::Kind::Cyclic;
    r->order = n;
    r->gen1 = gen;
    return r;
}

RecipePtr dihedral_recipe(int n, const std::string& rot, const std::string& ref) {
    auto r = std::make_shared<RecipeNode>();
    r->kind = RecipeNode::Kind::Dihedral;
    r->order = n;
    r->gen1 = rot;
    r->gen2 = ref;
    return r;
}

RecipePtr direct_recipe(RecipePtr a, RecipePtr b) {
    auto r = std::make_shared<RecipeNode>();
    r->kind = RecipeNode::Kind::Direct;
    r->left = std::move(a);
    r->right = std::move(b);
    return r;
}

RecipePtr semidirect_recipe(RecipePtr normal, RecipePtr acting,
                            std::map<std::string, std::map<std::string, std::string>> action) {
    auto r = std::make_shared<RecipeNode>();
    r->kind = RecipeNode::Kind::Semidirect;
    r->left = std::move(normal);
    r->right = std::move(acting);
    r->action = std::move(action);
    return r;
}

RecipePtr named_recipe(RecipeNode::Kind kind, const std::string& alpha, const std::string& tau) {
    auto r = std::make_shared<RecipeNode>();
    r->kind = kind;
    r->gen1 = alpha;
    r->gen2 = tau;
    return r;
}

// ---------------------------------------------------------------------------
// Table builders

namespace {

constexpr int kMaxGroupOrder = 10000;

std::string power_word(const std::string& gen, int e) {
    if (e == 0) return "1";
    if (e == 1) return gen;
    return gen + "^" + std::to_string(e);
}

std::string join_words(const std::string& a, const std::string& b) {
    if (a == "1") return b;
    if (b == "1") return a;
    return a + "*" + b;
}

Table cyclic_table(int n, const std::string& gen) {
    if (n < 1) throw std::domain_error("cyclic order must be positive");
    Table t;
    t.n = n;
    t.mul.assign(static_cast<size_t>(n) * n, 0);
    t.inv.assign(n, 0);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) t.mul[static_cast<size_t>(a) * n + b] = (a + b) % n;
        t.inv[a] = (n - a) % n;
    }
    t.id = 0;
    t.named[gen] = n > 1 ? 1 : 0;
    t.words.resize(n);
    for (int a = 0; a < n; ++a) t.words[a] = power_word(gen, a);
    return t;
}

Table dihedral_table(int n, const std::string& rot, const std::string& ref) {
    if (n < 1) throw std::domain_error("dihedral rotation order must be positive");
    // element r^i s^f  <->  index f*n + i
    Table t;
    t.n = 2 * n;
    t.mul.assign(static_cast<size_t>(t.n) * t.n, 0);
    t.inv.assign(t.n, 0);
    auto idx = [n](int i, int f) { return f * n + i; };
    for (int f1 = 0; f1 < 2; ++f1)
        for (int i1 = 0; i1 < n; ++i1)
            for (int f2 = 0; f2 < 2; ++f2)
                for (int i2 = 0; i2 < n; ++i2) {
                    int i = f1 ? (i1 - i2 % n + n) % n : (i1 + i2) % n;
                    t.mul[static_cast<size_t>(idx(i1, f1)) * t.n + idx(i2, f2)] =
                        idx(i, f1 ^ f2);
                }
    for (int f = 0; f < 2; ++f)
        for (int i = 0; i < n; ++i) t.inv[idx(i, f)] = f ? idx(i, f) : idx((n - i) % n, 0);
    t.id = 0;
    t.named[rot] = n > 1 ? idx(1, 0) : idx(0, 0);
    t.named[ref] = idx(0, 1);
    t.words.resize(t.n);
    for (int f = 0; f < 2; ++f)
        for (int i = 0; i < n; ++i)
            t.words[idx(i, f)] = f ? join_words(power_word(rot, i), ref) : power_word(rot, i);
    return t;
}

/// Lifts the component generator names into a product built as idx = x*right_n + y.
void merge_names(Table& t, const Table& left_part, const Table& right_part) {
    for (const auto& [name, g] : left_part.named) {
        if (t.named.count(name))
            throw std::domain_error("generator name clash in product: " + name);
        t.named[name] = g * right_part.n + right_part.id;
    }
    for (const auto& [name, g] : right_part.named) {
        if (t.named.count(name))
            throw std::domain_error("generator name clash in product: " + name);
        t.named[name] = left_part.id * right_part.n + g;
    }
}

Table direct_table(const Table& a, const Table& b) {
    Table t;
    if (static_cast<long long>(a.n) * b.n > kMaxGroupOrder)
        throw std::domain_error("group order exceeds the realization bound");
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
    merge_names(t, a, b);
    t.words.resize(t.n);
    for (int x = 0; x < a.n; ++x)
        for (int y = 0; y < b.n; ++y) t.words[idx(x, y)] = join_words(a.words[x], b.words[y]);
    return t;
}

struct NamedFactorization {
    std::vector<int> bfs_order;
    std::vector<int> parent;
    std::vector<int> slot;
    std::vector<int> gens;
};

NamedFactorization factorize_over_named(const Table& t) {
    NamedFactorization f;
    for (const auto& [name, g] : t.named) f.gens.push_back(g);
    f.parent.assign(t.n, -2);
    f.slot.assign(t.n, -1);
    f.parent[t.id] = -1;
    f.bfs_order.push_back(t.id);
    for (size_t done = 0; done < f.bfs_order.size(); ++done) {
        int x = f.bfs_order[done];
        for (size_t s = 0; s < f.gens.size(); ++s) {
            int y = t.at(x, f.gens[s]);
            if (f.parent[y] == -2) {
                f.parent[y] = x;
                f.slot[y] = static_cast<int>(s);
                f.bfs_order.push_back(y);
            }
        }
    }
    if (f.bfs_order.size() != static_cast<size_t>(t.n))
        throw std::domain_error("named generators do not generate the group");
    return f;
}

/// Extends generator images to an endomorphism along a factorization and
/// verifies it is an automorphism.
std::vector<int> extend_automorphism(const Table& t, const NamedFactorization& fact,
                                     const std::vector<int>& gen_images) {
    std::vector<int> endo(t.n, -1);
    endo[t.id] = t.id;
    for (int x : fact.bfs_order) {
        if (x == t.id) continue;
        endo[x] = t.at(endo[fact.parent[x]], gen_images[static_cast<size_t>(fact.slot[x])]);
    }
    std::vector<bool> hit(t.n, false);
    for (int x = 0; x < t.n; ++x) {
        if (endo[x] < 0 || hit[endo[x]])
            throw std::domain_error("action image is not a bijection");
        hit[endo[x]] = true;
    }
    for (int x = 0; x < t.n; ++x)
        for (int y = 0; y < t.n; ++y)
            if (endo[t.at(x, y)] != t.at(endo[x], endo[y]))
                throw std::domain_error("action image is not an automorphism");
    return endo;
}

Table semidirect_table(const Table& nt, const Table& ht,
                       const std::map<std::string, std::map<std::string, std::string>>& action) {
    if (static_cast<long long>(nt.n) * ht.n > kMaxGroupOrder)
        throw std::domain_error("group order exceeds the realization bound");

    NamedFactorization nfact = factorize_over_named(nt);
    NamedFactorization hfact = factorize_over_named(ht);

    // Automorphism of the normal part for each named generator of the acting part.
    std::map<int, std::vector<int>> gen_autos; // acting element -> automorphism
    for (const auto& [hname, helem] : ht.named) {
        auto it = action.find(hname);
        if (it == action.end())
            throw std::domain_error("semidirect action missing for generator " + hname);
        std::vector<int> images;
        for (int gslot : nfact.gens) {
            // find the name of this slot
            std::string gname;
            for (const auto& [nname, nelem] : nt.named)
                if (nelem == gslot && it->second.count(nname)) { gname = nname; break; }
            if (gname.empty()) {
                for (const auto& [nname, nelem] : nt.named)
                    if (nelem == gslot) { gname = nname; break; }
                throw std::domain_error("semidirect action missing image for generator " + gname);
            }
            images.push_back(eval_word(nt, it->second.at(gname)));
        }
        gen_autos[helem] = extend_automorphism(nt, nfact, images);
    }

    // Extend to the whole acting group and verify the action is a homomorphism.
    std::vector<std::vector<int>> alpha(ht.n);
    std::vector<int> identity(nt.n);
    std::iota(identity.begin(), identity.end(), 0);
    alpha[ht.id] = identity;
    for (int h : hfact.bfs_order) {
        if (h == ht.id) continue;
        const auto& parent = alpha[hfact.parent[h]];
        const auto& gen = gen_autos.at(hfact.gens[static_cast<size_t>(hfact.slot[h])]);
        std::vector<int> comp(nt.n);
        for (int x = 0; x < nt.n; ++x) comp[x] = parent[gen[x]];
        alpha[h] = std::move(comp);
    }
    for (int h1 = 0; h1 < ht.n; ++h1)
        for (int h2 = 0; h2 < ht.n; ++h2) {
            const auto& lhs = alpha[ht.at(h1, h2)];
            const auto& a1 = alpha[h1];
            const auto& a2 = alpha[h2];
            for (int x = 0; x < nt.n; ++x)
                if (lhs[x] != a1[a2[x]])
                    throw std::domain_error(
                        "semidirect action is not a homomorphism (inconsistent generator images)");
        }

    Table t;
    t.n = nt.n * ht.n;
    t.mul.assign(static_cast<size_t>(t.n) * t.n, 0);
    t.inv.assign(t.n, 0);
    auto idx = [&](int x, int h) { return x * ht.n + h; };
    for (int x1 = 0; x1 < nt.n; ++x1)
        for (int h1 = 0; h1 < ht.n; ++h1)
            for (int x2 = 0; x2 < nt.n; ++x2)
                for (int h2 = 0; h2 < ht.n; ++h2)
                    t.mul[static_cast<size_t>(idx(x1, h1)) * t.n + idx(x2, h2)] =
                        idx(nt.at(x1, alpha[h1][x2]), ht.at(h1, h2));
    for (int x = 0; x < nt.n; ++x)
        for (int h = 0; h < ht.n; ++h) {
            int hi = ht.inv[h];
            t.inv[idx(x, h)] = idx(alpha[hi][nt.inv[x]], hi);
        }
    t.id = idx(nt.id, ht.id);
    merge_names(t, nt, ht);
    t.words.resize(t.n);
    for (int x = 0; x < nt.n; ++x)
        for (int h = 0; h < ht.n; ++h)
            t.words[idx(x, h)] = join_words(nt.words[x], ht.words[h]);
    return t;
}

using Perm = std::array<int, 5>;

Perm compose(const Perm& a, const Perm& b) { // apply a first, then b
    Perm c;
    for (int i = 0; i < 5; ++i) c[i] = b[a[i]];
    return c;
}

Table permutation_table(const std::vector<Perm>& gens, int expected_order,
                        const std::string& alpha_name, const std::string& tau_name,
                        int alpha_order, int prod_order) {
    Perm id{0, 1, 2, 3, 4};
    std::set<Perm> seen{id};
    std::vector<Perm> frontier{id};
    while (!frontier.empty()) {
        std::vector<Perm> next;
        for (const Perm& x : frontier)
            for (const Perm& g : gens) {
                Perm y = compose(x, g);
                if (seen.insert(y).second) next.push_back(y);
            }
        frontier = std::move(next);
    }
    std::vector<Perm> elems(seen.begin(), seen.end()); // lexicographic, identity first
    if (static_cast<int>(elems.size()) != expected_order)
        throw std::logic_error("permutation group closure has unexpected order");
    std::map<Perm, int> index;
    for (size_t i = 0; i < elems.size(); ++i) index[elems[i]] = static_cast<int>(i);

    Table t;
    t.n = expected_order;
    t.mul.assign(static_cast<size_t>(t.n) * t.n, 0);
    t.inv.assign(t.n, 0);
    for (int a = 0; a < t.n; ++a) {
        for (int b = 0; b < t.n; ++b)
            t.mul[static_cast<size_t>(a) * t.n + b] = index.at(compose(elems[a], elems[b]));
        Perm inv;
        for (int i = 0; i < 5; ++i) inv[elems[a][i]] = i;
        t.inv[a] = index.at(inv);
    }
    t.id = index.at(id);

    // Locate canonical (alpha, tau) with the presentation orders
    // alpha^alpha_order = tau^2 = (alpha tau)^prod_order = 1.
    int alpha = -1, tau = -1;
    for (int a = 0; a < t.n && alpha < 0; ++a) {
        if (t.order_of(a) != alpha_order) continue;
        for (int s = 0; s < t.n; ++s) {
            if (t.order_of(s) != 2) continue;
            if (t.order_of(t.at(a, s)) != prod_order) continue;
            if (subgroup_generated(t, {a, s}).order() != t.n) continue;
            alpha = a;
            tau = s;
            break;
        }
    }
    if (alpha < 0) throw std::logic_error("presentation generators not found");
    t.named[alpha_name] = alpha;
    t.named[tau_name] = tau;

    // Words over (alpha, tau)
    t.words.assign(t.n, "");
    t.words[t.id] = "1";
    std::vector<std::pair<std::string, int>> named{{alpha_name, alpha}, {tau_name, tau}};
    std::vector<int> order_bfs{t.id};
    for (size_t done = 0; done < order_bfs.size(); ++done) {
        int x = order_bfs[done];
        for (const auto& [gname, g] : named) {
            int y = t.at(x, g);
            if (t.words[y].empty()) {
                t.words[y] = join_words(t.words[x], gname);
                order_bfs.push_back(y);
            }
        }
    }
    return t;
}

} // namespace

Table build_table(const RecipePtr& node) {
    if (!node) throw std::domain_error("empty recipe");
    switch (node->kind) {
        case RecipeNode::Kind::Cyclic: return cyclic_table(node->order, node->gen1);
        case RecipeNode::Kind::Dihedral:
            return dihedral_table(node->order, node->gen1, node->gen2);
        case RecipeNode::Kind::Direct:
            return direct_table(build_table(node->left), build_table(node->right));
        case RecipeNode::Kind::Semidirect:
            return semidirect_table(build_table(node->left), build_table(node->right),
                                    node->action);
        case RecipeNode::Kind::A4:
            return permutation_table({{1, 2, 0, 3, 4}, {1, 0, 3, 2, 4}}, 12, node->gen1,
                                     node->gen2, 3, 3);
        case RecipeNode::Kind::S4:
            return permutation_table({{1, 2, 3, 0, 4}, {1, 0, 2, 3, 4}}, 24, node->gen1,
                                     node->gen2, 3, 4);
        case RecipeNode::Kind::A5:
            return permutation_table({{1, 2, 3, 4, 0}, {1, 2, 0, 3, 4}}, 60, node->gen1,
                                     node->gen2, 5, 3);
    }
    throw std::logic_error("unreachable");
}

SignedGroup realize(const GroupRecipe& recipe) {
    SignedGroup g;
    g.table = build_table(recipe.group);
    Table& t = g.table;

    for (const auto& [name, word] : recipe.aliases) {
        if (t.named.count(name)) throw std::domain_error("alias name clash: " + name);
        t.named[name] = eval_word(t, word);
    }

    // Orientation character from the anticonformal generator set.
    std::map<int, int> gen_sign; // generator element -> +-1 (by its primary name)
    std::set<std::string> anti(recipe.anticonformal.begin(), recipe.anticonformal.end());
    for (const auto& name : recipe.anticonformal)
        if (!t.named.count(name))
            throw std::domain_error("anticonformal generator is not named: " + name);
    std::vector<std::pair<int, int>> signed_gens; // (element, sign)
    for (const auto& [name, elem] : t.named) {
        if (recipe.aliases.count(name)) continue; // aliases are derived, not generators
        signed_gens.push_back({elem, anti.count(name) ? -1 : 1});
    }
    g.w.assign(t.n, 0);
    g.w[t.id] = 1;
    std::vector<int> frontier{t.id};
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int x : frontier)
            for (const auto& [gen, sign] : signed_gens) {
                int y = t.at(x, gen);
                if (g.w[y] == 0) { g.w[y] = g.w[x] * sign; next.push_back(y); }
            }
        frontier = std::move(next);
    }
    for (int x = 0; x < t.n; ++x) {
        if (g.w[x] == 0)
            throw std::domain_error("named generators do not generate the group");
        for (const auto& [gen, sign] : signed_gens)
            if (g.w[t.at(x, gen)] != g.w[x] * sign)
                throw std::domain_error("orientation character is not multiplicative");
    }
    int kernel = 0;
    for (int x = 0; x < t.n; ++x)
        if (g.w[x] == 1) ++kernel;
    if (kernel * 2 != t.n)
        throw std::domain_error("anticonformal set fails the index-2 condition");

    g.phi = eval_word(t, recipe.phi_word);
    g.p = t.order_of(g.phi);
    if (!is_odd_prime(g.p))
        throw std::domain_error("p-gonality word has non-prime or even order " +
                                std::to_string(g.p));
    if (g.w[g.phi] != 1) throw std::domain_error("p-gonality element must be conformal");
    Subgroup phi_sub = subgroup_generated(t, {g.phi});
    if (!is_normal(t, phi_sub))
        throw std::domain_error("p-gonality subgroup is not normal");
    return g;
}

SignedGroup dihedral_target(int p) {
    if (!is_odd_prime(p)) throw std::domain_error("p must be an odd prime");
    GroupRecipe r;
    r.group = dihedral_recipe(p, "r", "s");
    r.anticonformal = {"s"};
    r.phi_word = "r";
    return realize(r);
}

SignedGroup cyclic_target(int p) {
    if (!is_odd_prime(p)) throw std::domain_error("p must be an odd prime");
    GroupRecipe r;
    r.group = direct_recipe(cyclic_recipe(p, "r"), cyclic_recipe(2, "s"));
    r.anticonformal = {"s"};
    r.phi_word = "r";
    return realize(r);
}

// ---------------------------------------------------------------------------
// JSON serialization

namespace {

nlohmann::ordered_json node_to_json(const RecipePtr& node) {
    nlohmann::ordered_json j;
    switch (node->kind) {
        case RecipeNode::Kind::Cyclic:
            j["kind"] = "cyclic";
            j["order"] = node->order;
            j["gen"] = node->gen1;
            break;
        case RecipeNode::Kind::Dihedral:
            j["kind"] = "dihedral";
            j["order"] = node->order;
            j["rot"] = node->gen1;
            j["ref"] = node->gen2;
            break;
        case RecipeNode::Kind::Direct:
            j["kind"] = "direct";
            j["left"] = node_to_json(node->left);
            j["right"] = node_to_json(node->right);
            break;
        case RecipeNode::Kind::Semidirect:
            j["kind"] = "semidirect";
            j["normal"] = node_to_json(node->left);
            j["acting"] = node_to_json(node->right);
            j["action"] = node->action;
            break;
        case RecipeNode::Kind::A4:
        case RecipeNode::Kind::S4:
        case RecipeNode::Kind::A5:
            j["kind"] = node->kind == RecipeNode::Kind::A4   ? "A4"
                        : node->kind == RecipeNode::Kind::S4 ? "S4"
                                                             : "A5";
            j["alpha"] = node->gen1;
            j["tau"] = node->gen2;
            break;
    }
    return j;
}

RecipePtr node_from_json(const nlohmann::json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "cyclic") return cyclic_recipe(j.at("order").get<int>(), j.at("gen"));
    if (kind == "dihedral")
        return dihedral_recipe(j.at("order").get<int>(), j.at("rot"), j.at("ref"));
    if (kind == "direct")
        return direct_recipe(node_from_json(j.at("left")), node_from_json(j.at("right")));
    if (kind == "semidirect") {
        std::map<std::string, std::map<std::string, std::string>> action =
            j.at("action").get<std::map<std::string, std::map<std::string, std::string>>>();
        return semidirect_recipe(node_from_json(j.at("normal")), node_from_json(j.at("acting")),
                                 std::move(action));
    }
    if (kind == "A4") return named_recipe(RecipeNode::Kind::A4, j.at("alpha"), j.at("tau"));
    if (kind == "S4") return named_recipe(RecipeNode::Kind::S4, j.at("alpha"), j.at("tau"));
    if (kind == "A5") return named_recipe(RecipeNode::Kind::A5, j.at("alpha"), j.at("tau"));
    throw std::domain_error("unknown recipe kind: " + kind);
}

} // namespace

nlohmann::ordered_json recipe_to_json(const GroupRecipe& recipe) {
    nlohmann::ordered_json j;
    j["group"] = node_to_json(recipe.group);
    j["anticonformal"] = recipe.anticonformal;
    j["phi"] = recipe.phi_word;
    if (!recipe.aliases.empty()) j["aliases"] = recipe.aliases;
    return j;
}

GroupRecipe recipe_from_json(const nlohmann::json& j) {
    GroupRecipe r;
    r.group = node_from_json(j.at("group"));
    r.anticonformal = j.at("anticonformal").get<std::vector<std::string>>();
    r.phi_word = j.at("phi").get<std::string>();
    if (j.count("aliases"))
        r.aliases = j.at("aliases").get<std::map<std::string, std::string>>();
    return r;
}

// ---------------------------------------------------------------------------
// Case constructors

namespace {

long long modpow(long long b, long long e, long long m) {
    b %= m;
    if (b < 0) b += m;
    long long acc = 1 % m;
    while (e > 0) {
        if (e & 1) acc = acc * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return acc;
}

std::optional<long long> modinv(long long a, long long m) {
    long long g = std::gcd(((a % m) + m) % m, m);
    if (g != 1) return std::nullopt;
    // m is small; brute force is fine
    long long an = ((a % m) + m) % m;
    for (long long x = 1; x < m; ++x)
        if (an * x % m == 1) return x;
    return std::nullopt;
}

int require(const std::optional<int>& v, const std::string& name, const std::string& cid) {
    if (!v) throw InadmissibleParams("case " + cid + " requires parameter " + name);
    return *v;
}

void check(bool cond, const std::string& msg) {
    if (!cond) throw InadmissibleParams(msg);
}

int norm_mod(int v, int m) {
    int r = v % m;
    return r < 0 ? r + m : r;
}

RecipePtr v4_recipe() {
    return direct_recipe(cyclic_recipe(2, "t1"), cyclic_recipe(2, "t2"));
}

RecipePtr e1_core() {
    // (C2 x C2) ><| C9: the order-9 generator cycles the three involutions.
    return semidirect_recipe(v4_recipe(), cyclic_recipe(9, "fh"),
                             {{"fh", {{"t1", "t2"}, {"t2", "t1*t2"}}}});
}

} // namespace

std::string CaseParams::describe() const {
    std::string out = "p=" + std::to_string(p);
    if (q) out += ",q=" + std::to_string(*q);
    if (i) out += ",i=" + std::to_string(*i);
    if (j) out += ",j=" + std::to_string(*j);
    if (k) out += ",k=" + std::to_string(*k);
    if (rho) out += ",rho=" + std::to_string(*rho);
    if (!variant.empty()) out += ",variant=" + variant;
    if (!subcase.empty()) out += ",subcase=" + subcase;
    return out;
}

CaseRealization make_case(const std::string& cid, const CaseParams& params) {
    const int p = params.p;
    check(is_odd_prime(p), "p must be an odd prime");
    CaseRealization out;
    IntEnv& env = out.env;
    env["p"] = p;

    auto with_q = [&]() {
        int q = require(params.q, "q", cid);
        check(q >= 2, "q must be at least 2");
        env["q"] = q;
        if (q % 2 == 0) env["q2"] = q / 2;
        if ((p * q) % 2 == 0) env["pq2"] = p * q / 2;
        return q;
    };
    auto with_i = [&](int q) {
        int i = norm_mod(require(params.i, "i", cid), p);
        check(i != 0, "i must be a unit mod p");
        check(modpow(i, q, p) == 1, "i^q must be 1 mod p");
        env["i"] = i;
        if (q % 2 == 0) {
            long long iq2 = modpow(i, q / 2, p);
            env["iq2"] = iq2;
            if (auto h = modinv(iq2 + 1, p)) env["h"] = *h;
        }
        return i;
    };

    GroupRecipe& r = out.recipe;
    r.anticonformal = {"s"};
    r.phi_word = "f";

    if (cid == "1a") {
        int q = with_q();
        (void)q;
        r.group = direct_recipe(cyclic_recipe(p * q, "fh"), cyclic_recipe(2, "s"));
        r.phi_word = "fh^" + std::to_string(q);
    } else if (cid == "1b") {
        int q = with_q();
        r.group = dihedral_recipe(p * q, "fh", "s");
        r.phi_word = "fh^" + std::to_string(q);
    } else if (cid == "2a" || cid == "2b") {
        int q = with_q();
        check((q % 2 == 1) == (cid == "2a"), "case " + cid + " fixes the parity of q");
        r.group = direct_recipe(dihedral_recipe(p * q, "fh", "rho"), cyclic_recipe(2, "s"));
        r.phi_word = "fh^" + std::to_string(q);
    } else if (cid == "2c") {
        int q = with_q();
        check(q % 2 == 1, "case 2c is realized for odd q");
        int pq = p * q;
        int j = norm_mod(require(params.j, "j", cid), pq);
        env["j"] = j;
        env["j2"] = static_cast<long long>(j) * ((pq + 1) / 2) % pq;
        r.group = semidirect_recipe(
            dihedral_recipe(pq, "fh", "rho"), cyclic_recipe(2, "s"),
            {{"s", {{"fh", "fh^" + std::to_string(pq - 1)},
                    {"rho", "rho*fh^" + std::to_string(j)}}}});
        r.phi_word = "fh^" + std::to_string(q);
    } else if (cid == "3a") {
        int q = with_q();
        int i = with_i(q);
        r.group = direct_recipe(
            semidirect_recipe(cyclic_recipe(p, "f"), cyclic_recipe(q, "a"),
                              {{"a", {{"f", "f^" + std::to_string(i)}}}}),
            cyclic_recipe(2, "s"));
    } else if (cid == "3b-a" || cid == "3b-b" || cid == "3b-c") {
        int q = with_q();
        int i = with_i(q);
        bool invert_f = (cid != "3b-c");
        bool invert_a = (cid != "3b-a");
        if (invert_a)
            check(static_cast<long long>(i) * i % p == 1,
                  "inverting the rotation requires i^2 = 1 mod p");
        std::map<std::string, std::string> act;
        act["f"] = invert_f ? "f^" + std::to_string(p - 1) : "f";
        act["a"] = invert_a ? "a^" + std::to_string(q - 1) : "a";
        r.group = semidirect_recipe(
            semidirect_recipe(cyclic_recipe(p, "f"), cyclic_recipe(q, "a"),
                              {{"a", {{"f", "f^" + std::to_string(i)}}}}),
            cyclic_recipe(2, "s"), {{"s", act}});
    } else if (cid == "4a" || cid == "4b-a" || cid == "4b-b" || cid == "4b-c" ||
               cid == "4c-a" || cid == "4c-c") {
        int q = with_q();
        int i = with_i(q);
        check(static_cast<long long>(i) * i % p == 1,
              "a dihedral action on the p-gonality part requires i^2 = 1 mod p");

        // reflection action on f: +1 (commutes) or -1 (inverts)
        int delta = 1;
        if (cid == "4a") {
            check(params.subcase == "a" || params.subcase == "b",
                  "case 4a requires subcase a or b");
            delta = params.subcase == "a" ? 1 : -1;
        } else if (cid == "4c-a" || cid == "4c-c") {
            delta = params.rho.value_or(1);
            check(delta == 1 || delta == -1, "rho twist must be +1 or -1");
            env["rho_twist"] = delta;
        }
        RecipePtr inner = semidirect_recipe(
            cyclic_recipe(p, "f"), dihedral_recipe(q, "a", "rho"),
            {{"a", {{"f", "f^" + std::to_string(i)}}},
             {"rho", {{"f", delta == 1 ? "f" : "f^" + std::to_string(p - 1)}}}});

        if (cid == "4a") {
            r.group = direct_recipe(inner, cyclic_recipe(2, "s"));
        } else {
            bool sigma_inverts_f = (cid[1] == 'b'); // 4b-* invert, 4c-* centralize
            int k = 0;
            if (cid == "4b-a" || cid == "4c-a") {
                k = norm_mod(require(params.k, "k", cid), q);
                if (q % 2 == 0) check(k % 2 == 0, "k must be even for even q");
                env["k"] = k;
                env["k2"] = (q % 2 == 1) ? static_cast<long long>(k) * ((q + 1) / 2) % q : k / 2;
            } else if (cid == "4b-c" || cid == "4c-c") {
                check(q % 2 == 0, "case " + cid + " requires even q");
                k = q / 2;
                env["k"] = k;
            }
            check(modpow(i, k, p) == 1, "the twist k must satisfy i^k = 1 mod p");
            std::map<std::string, std::string> act;
            act["f"] = sigma_inverts_f ? "f^" + std::to_string(p - 1) : "f";
            act["a"] = (cid == "4b-a" || cid == "4c-a") ? "a^" + std::to_string(q - 1) : "a";
            act["rho"] = k == 0 ? "rho" : "rho*a^" + std::to_string(k);
            r.group = semidirect_recipe(inner, cyclic_recipe(2, "s"), {{"s", act}});
        }
    } else if (cid == "5a") {
        r.group = semidirect_recipe(
            cyclic_recipe(p, "f"), named_recipe(RecipeNode::Kind::S4, "a", "t"),
            {{"a", {{"f", "f"}}}, {"t", {{"f", "f^" + std::to_string(p - 1)}}}});
        r.anticonformal = {"t"};
    } else if (cid == "5b" || cid == "5c" || cid == "5d") {
        check(params.variant == "d" || params.variant == "c",
              "case " + cid + " requires variant d (dihedral pair) or c (cyclic pair)");
        RecipeNode::Kind kind = cid == "5b"   ? RecipeNode::Kind::A4
                                : cid == "5c" ? RecipeNode::Kind::A5
                                              : RecipeNode::Kind::S4;
        RecipePtr pair_part =
            params.variant == "d"
                ? dihedral_recipe(p, "f", "s")
                : direct_recipe(cyclic_recipe(p, "f"), cyclic_recipe(2, "s"));
        r.group = direct_recipe(pair_part, named_recipe(kind, "a", "t"));
    } else if (cid == "E1") {
        check(p == 3, "exceptional case 1 exists only for p = 3");
        check(params.variant == "d" || params.variant == "c",
              "case E1 requires variant d or c");
        if (params.variant == "d") {
            r.group = semidirect_recipe(
                e1_core(), cyclic_recipe(2, "s"),
                {{"s", {{"fh", "fh^8"}, {"t1", "t1"}, {"t2", "t1*t2"}}}});
        } else {
            r.group = direct_recipe(e1_core(), cyclic_recipe(2, "s"));
        }
        r.phi_word = "fh^3";
    } else if (cid == "E2") {
        check(p % 6 == 1, "exceptional case 2 requires p = 1 mod 6");
        int i;
        if (params.i) {
            i = norm_mod(*params.i, p);
            check(i != 1 && modpow(i, 3, p) == 1, "i must be a nontrivial cube root of 1 mod p");
        } else {
            i = 0;
            for (int c = 2; c < p; ++c)
                if (modpow(c, 3, p) == 1) { i = c; break; }
        }
        env["i"] = i;
        r.group = semidirect_recipe(
            direct_recipe(cyclic_recipe(p, "f"), v4_recipe()), cyclic_recipe(6, "a"),
            {{"a", {{"f", "f^" + std::to_string(i)}, {"t1", "t2"}, {"t2", "t1*t2"}}}});
        r.anticonformal = {"a"};
        r.aliases["s"] = "a^3";
    } else if (cid == "E3") {
        check(p == 3, "exceptional case 3 exists only for p = 3");
        RecipePtr core = semidirect_recipe(
            e1_core(), cyclic_recipe(2, "a"),
            {{"a", {{"fh", "fh^8"}, {"t1", "t1"}, {"t2", "t1*t2"}}}});
        r.group = direct_recipe(core, cyclic_recipe(2, "s"));
        r.phi_word = "fh^3";
    } else {
        throw std::domain_error("unknown case id: " + cid);
    }
    return out;
}

std::vector<CaseParams> enumerate_case_params(const std::string& cid,
                                              const std::vector<int>& ps, int q_max) {
    std::vector<CaseParams> out;
    if (ps.empty()) return out;
    auto admissible = [&](const CaseParams& cp) {
        try {
            make_case(cid, cp);
            return true;
        } catch (const InadmissibleParams&) {
            return false;
        }
    };
    auto push = [&](CaseParams cp) {
        if (admissible(cp)) out.push_back(std::move(cp));
    };

    if (cid == "E1" || cid == "E3") {
        if (cid == "E1") {
            for (const char* v : {"d", "c"}) {
                CaseParams cp;
                cp.p = 3;
                cp.variant = v;
                push(cp);
            }
        } else {
            CaseParams cp;
            cp.p = 3;
            push(cp);
        }
        return out;
    }
    if (cid == "E2") {
        // the smallest prime admissible for this family, plus any budgeted ones
        std::vector<int> es;
        for (int p : ps)
            if (p % 6 == 1) es.push_back(p);
        if (es.empty()) es.push_back(7);
        for (int p : es)
            for (int i = 2; i < p; ++i) {
                CaseParams cp;
                cp.p = p;
                cp.i = i;
                push(cp);
            }
        return out;
    }

    for (int p : ps) {
        if (cid == "5a") {
            CaseParams cp;
            cp.p = p;
            push(cp);
            continue;
        }
        if (cid == "5b" || cid == "5c" || cid == "5d") {
            for (const char* v : {"d", "c"}) {
                CaseParams cp;
                cp.p = p;
                cp.variant = v;
                push(cp);
            }
            continue;
        }
        for (int q = 2; q <= q_max; ++q) {
            if (cid == "1a" || cid == "1b") {
                CaseParams cp;
                cp.p = p;
                cp.q = q;
                push(cp);
            } else if (cid == "2a" || cid == "2b") {
                CaseParams cp;
                cp.p = p;
                cp.q = q;
                push(cp);
            } else if (cid == "2c") {
                for (int j : {0, 1}) {
                    CaseParams cp;
                    cp.p = p;
                    cp.q = q;
                    cp.j = j;
                    push(cp);
                }
            } else if (cid == "3a" || cid == "3b-a" || cid == "3b-b" || cid == "3b-c") {
                for (int i = 1; i < p; ++i) {
                    CaseParams cp;
                    cp.p = p;
                    cp.q = q;
                    cp.i = i;
                    push(cp);
                }
            } else if (cid == "4a") {
                for (const char* sub : {"a", "b"})
                    for (int i : {1, p - 1}) {
                        CaseParams cp;
                        cp.p = p;
                        cp.q = q;
                        cp.i = i;
                        cp.subcase = sub;
                        push(cp);
                    }
            } else if (cid == "4b-a") {
                for (int i : {1, p - 1})
                    for (int k = 0; k < q; ++k) {
                        CaseParams cp;
                        cp.p = p;
                        cp.q = q;
                        cp.i = i;
                        cp.k = k;
                        push(cp);
                    }
            } else if (cid == "4b-b" || cid == "4b-c") {
                for (int i : {1, p - 1}) {
                    CaseParams cp;
                    cp.p = p;
                    cp.q = q;
                    cp.i = i;
                    push(cp);
                }
            } else if (cid == "4c-a") {
                for (int i : {1, p - 1})
                    for (int k = 0; k < q; ++k)
                        for (int d : {1, -1}) {
                            CaseParams cp;
                            cp.p = p;
                            cp.q = q;
                            cp.i = i;
                            cp.k = k;
                            cp.rho = d;
                            push(cp);
                        }
            } else if (cid == "4c-c") {
                for (int i : {1, p - 1})
                    for (int d : {1, -1}) {
                        CaseParams cp;
                        cp.p = p;
                        cp.q = q;
                        cp.i = i;
                        cp.rho = d;
                        push(cp);
                    }
            }
        }
    }
    return out;
}

} // namespace pgonal

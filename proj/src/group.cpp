#include "pgonal/group.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace pgonal {

int Table::power(int g, long long e) const {
    if (n == 0) throw std::logic_error("empty table");
    long long k = e;
    int base = g;
    if (k < 0) { base = inv[g]; k = -k; }
    int acc = id;
    while (k > 0) {
        if (k & 1) acc = at(acc, base);
        base = at(base, base);
        k >>= 1;
    }
    return acc;
}

int Table::order_of(int g) const {
    int acc = g, k = 1;
    while (acc != id) { acc = at(acc, g); ++k; }
    return k;
}

int Table::named_element(const std::string& name) const {
    auto it = named.find(name);
    if (it == named.end()) throw std::domain_error("unknown generator name: " + name);
    return it->second;
}

bool Subgroup::contains(int g) const {
    return std::binary_search(elements.begin(), elements.end(), g);
}

int element_order(const Table& g, int x) { return g.order_of(x); }

std::vector<std::vector<int>> conjugacy_classes(const Table& g) {
    std::vector<bool> seen(g.n, false);
    std::vector<std::vector<int>> classes;
    for (int x = 0; x < g.n; ++x) {
        if (seen[x]) continue;
        std::vector<int> cls;
        for (int c = 0; c < g.n; ++c) {
            int y = g.at(g.at(c, x), g.inv[c]);
            if (!seen[y]) { seen[y] = true; cls.push_back(y); }
        }
        std::sort(cls.begin(), cls.end());
        classes.push_back(std::move(cls));
    }
    std::sort(classes.begin(), classes.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.front() < b.front();
    });
    return classes;
}

Subgroup subgroup_generated(const Table& g, const std::vector<int>& gens) {
    std::vector<bool> in(g.n, false);
    std::vector<int> frontier{g.id};
    in[g.id] = true;
    std::vector<int> all{g.id};
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int x : frontier)
            for (int s : gens) {
                int y = g.at(x, s);
                if (!in[y]) { in[y] = true; next.push_back(y); all.push_back(y); }
            }
        frontier = std::move(next);
    }
    std::sort(all.begin(), all.end());
    Subgroup h;
    h.elements = std::move(all);
    h.generators = gens;
    return h;
}

namespace {

bool conjugate_equals(const Table& g, int c, const Subgroup& h) {
    for (int x : h.elements)
        if (!h.contains(g.at(g.at(c, x), g.inv[c]))) return false;
    return true;
}

/// Greedy witness generating set for a sorted element set.
std::vector<int> witness_generators(const Table& g, const std::vector<int>& elements) {
    std::vector<int> gens;
    Subgroup cur = subgroup_generated(g, {});
    for (int x : elements) {
        if (cur.contains(x)) continue;
        gens.push_back(x);
        cur = subgroup_generated(g, gens);
        if (cur.order() == static_cast<int>(elements.size())) break;
    }
    return gens;
}

} // namespace

Subgroup normalizer(const Table& g, const Subgroup& h) {
    std::vector<int> elems;
    for (int c = 0; c < g.n; ++c)
        if (conjugate_equals(g, c, h)) elems.push_back(c);
    Subgroup out;
    out.elements = std::move(elems);
    out.generators = witness_generators(g, out.elements);
    return out;
}

Subgroup centralizer(const Table& g, const std::vector<int>& elems) {
    std::vector<int> out;
    for (int c = 0; c < g.n; ++c) {
        bool ok = true;
        for (int x : elems)
            if (g.at(c, x) != g.at(x, c)) { ok = false; break; }
        if (ok) out.push_back(c);
    }
    Subgroup s;
    s.elements = std::move(out);
    s.generators = witness_generators(g, s.elements);
    return s;
}

bool is_normal(const Table& g, const Subgroup& h) {
    for (int c = 0; c < g.n; ++c)
        if (!conjugate_equals(g, c, h)) return false;
    return true;
}

Table quotient_by_normal(const Table& g, const Subgroup& n) {
    if (!is_normal(g, n)) throw std::domain_error("quotient by a non-normal subgroup");
    std::vector<int> coset(g.n, -1); // element -> coset index
    std::vector<int> reps;
    for (int x = 0; x < g.n; ++x) {
        if (coset[x] != -1) continue;
        int c = static_cast<int>(reps.size());
        reps.push_back(x);
        for (int h : n.elements) coset[g.at(x, h)] = c;
    }
    Table q;
    q.n = static_cast<int>(reps.size());
    q.mul.assign(static_cast<size_t>(q.n) * q.n, 0);
    q.inv.assign(q.n, 0);
    for (int a = 0; a < q.n; ++a)
        for (int b = 0; b < q.n; ++b)
            q.mul[static_cast<size_t>(a) * q.n + b] = coset[g.at(reps[a], reps[b])];
    q.id = coset[g.id];
    for (int a = 0; a < q.n; ++a) q.inv[a] = coset[g.inv[reps[a]]];
    q.words.resize(q.n);
    for (int a = 0; a < q.n; ++a) q.words[a] = "[" + g.words[reps[a]] + "]";
    return q;
}

std::vector<int> anticonformal_involutions(const SignedGroup& g) {
    std::vector<int> out;
    for (int x = 0; x < g.n(); ++x)
        if (g.w[x] == -1 && x != g.id() && g.mul(x, x) == g.id()) out.push_back(x);
    return out;
}

Table subgroup_table(const Table& g, const Subgroup& h) {
    std::vector<int> local(g.n, -1);
    for (size_t i = 0; i < h.elements.size(); ++i) local[h.elements[i]] = static_cast<int>(i);
    Table t;
    t.n = h.order();
    t.mul.assign(static_cast<size_t>(t.n) * t.n, 0);
    t.inv.assign(t.n, 0);
    for (int a = 0; a < t.n; ++a) {
        for (int b = 0; b < t.n; ++b) {
            int prod = g.at(h.elements[a], h.elements[b]);
            int idx = local[prod];
            if (idx < 0) throw std::logic_error("subgroup set is not closed");
            t.mul[static_cast<size_t>(a) * t.n + b] = idx;
        }
        t.inv[a] = local[g.inv[h.elements[a]]];
    }
    t.id = local[g.id];
    t.words.resize(t.n);
    for (int a = 0; a < t.n; ++a) t.words[a] = g.words[h.elements[a]];
    return t;
}

GroupInvariants group_invariants(const Table& g) {
    GroupInvariants inv;
    inv.order = g.n;
    inv.abelian = true;
    for (int a = 0; a < g.n && inv.abelian; ++a)
        for (int b = a + 1; b < g.n; ++b)
            if (g.at(a, b) != g.at(b, a)) { inv.abelian = false; break; }
    int center = 0;
    for (int a = 0; a < g.n; ++a) {
        bool central = true;
        for (int b = 0; b < g.n; ++b)
            if (g.at(a, b) != g.at(b, a)) { central = false; break; }
        if (central) ++center;
    }
    inv.center_size = center;
    inv.class_count = static_cast<int>(conjugacy_classes(g).size());
    std::map<int, int> hist;
    for (int a = 0; a < g.n; ++a) ++hist[g.order_of(a)];
    inv.order_histogram.assign(hist.begin(), hist.end());
    return inv;
}

// ---------------------------------------------------------------------------
// Isomorphism testing

namespace {

/// Minimal-ish generating set found greedily over ascending element indices.
std::vector<int> greedy_generators(const Table& g) {
    std::vector<int> gens;
    Subgroup cur = subgroup_generated(g, {});
    for (int x = 0; x < g.n && cur.order() < g.n; ++x) {
        if (cur.contains(x)) continue;
        gens.push_back(x);
        cur = subgroup_generated(g, gens);
    }
    // Drop redundant generators picked up early.
    for (size_t i = 0; i < gens.size();) {
        std::vector<int> rest;
        for (size_t j = 0; j < gens.size(); ++j)
            if (j != i) rest.push_back(gens[j]);
        if (!rest.empty() && subgroup_generated(g, rest).order() == g.n) {
            gens = std::move(rest);
        } else {
            ++i;
        }
    }
    return gens;
}

/// Per-element refinement key: (order, conjugacy class size, centralizer order).
std::vector<std::array<int, 3>> element_keys(const Table& g) {
    std::vector<std::array<int, 3>> keys(g.n);
    auto classes = conjugacy_classes(g);
    std::vector<int> class_size(g.n, 0);
    for (const auto& cls : classes)
        for (int x : cls) class_size[x] = static_cast<int>(cls.size());
    for (int x = 0; x < g.n; ++x) {
        int cent = 0;
        for (int c = 0; c < g.n; ++c)
            if (g.at(c, x) == g.at(x, c)) ++cent;
        keys[x] = {g.order_of(x), class_size[x], cent};
    }
    return keys;
}

/// BFS factorization: for each element a word (parent, generator-slot) so
/// images extend along words.
struct Factorization {
    std::vector<int> parent; // -1 for identity
    std::vector<int> via;    // generator slot used
};

Factorization factorize(const Table& g, const std::vector<int>& gens) {
    Factorization f;
    f.parent.assign(g.n, -2);
    f.via.assign(g.n, -1);
    f.parent[g.id] = -1;
    std::vector<int> frontier{g.id};
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int x : frontier)
            for (size_t s = 0; s < gens.size(); ++s) {
                int y = g.at(x, gens[s]);
                if (f.parent[y] == -2) {
                    f.parent[y] = x;
                    f.via[y] = static_cast<int>(s);
                    next.push_back(y);
                }
            }
        frontier = std::move(next);
    }
    return f;
}

bool try_assignment(const Table& g, const Table& h, const std::vector<int>& gens,
                    const Factorization& fact, const std::vector<int>& images,
                    std::vector<int>& map_out) {
    // Build candidate map along BFS order, then verify multiplicativity.
    std::vector<int> f(g.n, -1);
    f[g.id] = h.id;
    // process in BFS-discovery order: repeated sweeps are fine at this scale
    std::vector<int> order;
    order.reserve(g.n);
    {
        std::vector<bool> placed(g.n, false);
        placed[g.id] = true;
        order.push_back(g.id);
        for (size_t done = 0; done < order.size(); ++done) {
            int x = order[done];
            for (size_t s = 0; s < gens.size(); ++s) {
                int y = g.at(x, gens[s]);
                if (!placed[y] && fact.parent[y] == x && fact.via[y] == static_cast<int>(s)) {
                    placed[y] = true;
                    order.push_back(y);
                }
            }
        }
        if (order.size() != static_cast<size_t>(g.n)) return false;
    }
    for (int x : order) {
        if (x == g.id) continue;
        f[x] = h.at(f[fact.parent[x]], images[static_cast<size_t>(fact.via[x])]);
    }
    // bijectivity
    std::vector<bool> hit(h.n, false);
    for (int x = 0; x < g.n; ++x) {
        if (f[x] < 0 || hit[f[x]]) return false;
        hit[f[x]] = true;
    }
    // multiplicativity
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b)
            if (f[g.at(a, b)] != h.at(f[a], f[b])) return false;
    map_out = std::move(f);
    return true;
}

bool search_images(const Table& g, const Table& h, const std::vector<int>& gens,
                   const Factorization& fact,
                   const std::vector<std::vector<int>>& candidates, size_t depth,
                   std::vector<int>& images, std::vector<int>& map_out) {
    if (depth == gens.size())
        return try_assignment(g, h, gens, fact, images, map_out);
    for (int cand : candidates[depth]) {
        images[depth] = cand;
        // cheap prune: orders of pairwise products must agree with G
        bool ok = true;
        for (size_t before = 0; before < depth && ok; ++before) {
            int gp = g.at(gens[before], gens[depth]);
            int hp = h.at(images[before], cand);
            if (g.order_of(gp) != h.order_of(hp)) ok = false;
        }
        if (!ok) continue;
        if (search_images(g, h, gens, fact, candidates, depth + 1, images, map_out)) return true;
    }
    return false;
}

} // namespace

namespace {

void enumerate_automorphisms(const Table& g, const std::vector<int>& gens,
                             const Factorization& fact,
                             const std::vector<std::vector<int>>& candidates, size_t depth,
                             std::vector<int>& images, int order_divides,
                             std::vector<std::vector<int>>& out) {
    if (depth == gens.size()) {
        std::vector<int> map;
        if (!try_assignment(g, g, gens, fact, images, map)) return;
        if (order_divides > 0) {
            // order of the permutation must divide order_divides
            std::vector<int> acc(map);
            bool identity = true;
            for (int x = 0; x < g.n; ++x)
                if (acc[x] != x) { identity = false; break; }
            int steps = 1;
            while (!identity && steps <= order_divides) {
                std::vector<int> next(g.n);
                for (int x = 0; x < g.n; ++x) next[x] = map[acc[x]];
                acc = std::move(next);
                ++steps;
                identity = true;
                for (int x = 0; x < g.n; ++x)
                    if (acc[x] != x) { identity = false; break; }
            }
            if (!identity || order_divides % steps != 0) return;
        }
        out.push_back(std::move(map));
        return;
    }
    for (int cand : candidates[depth]) {
        images[depth] = cand;
        bool ok = true;
        for (size_t before = 0; before < depth && ok; ++before) {
            int gp = g.at(gens[before], gens[depth]);
            int hp = g.at(images[before], cand);
            if (g.order_of(gp) != g.order_of(hp)) ok = false;
        }
        if (!ok) continue;
        enumerate_automorphisms(g, gens, fact, candidates, depth + 1, images, order_divides, out);
    }
}

} // namespace

std::vector<std::vector<int>> automorphisms_of_order_dividing(const Table& g, int m) {
    std::vector<std::vector<int>> out;
    std::vector<int> gens = greedy_generators(g);
    if (gens.empty()) {
        out.push_back({g.id});
        return out;
    }
    Factorization fact = factorize(g, gens);
    auto keys = element_keys(g);
    std::vector<std::vector<int>> candidates(gens.size());
    for (size_t s = 0; s < gens.size(); ++s)
        for (int y = 0; y < g.n; ++y)
            if (keys[y] == keys[gens[s]]) candidates[s].push_back(y);
    std::vector<int> images(gens.size(), -1);
    enumerate_automorphisms(g, gens, fact, candidates, 0, images, m, out);
    return out;
}

IsoResult is_isomorphic(const Table& g, const Table& h, int bound) {
    if (g.n > bound || h.n > bound)
        throw std::domain_error("isomorphism test bound exceeded");
    IsoResult res;
    if (g.n != h.n) return res;
    if (group_invariants(g) != group_invariants(h)) return res;

    std::vector<int> gens = greedy_generators(g);
    if (gens.empty()) { // trivial group
        res.isomorphic = true;
        return res;
    }
    Factorization fact = factorize(g, gens);
    auto gkeys = element_keys(g);
    auto hkeys = element_keys(h);
    std::vector<std::vector<int>> candidates(gens.size());
    for (size_t s = 0; s < gens.size(); ++s) {
        for (int y = 0; y < h.n; ++y)
            if (hkeys[y] == gkeys[gens[s]]) candidates[s].push_back(y);
        if (candidates[s].empty()) return res;
    }
    std::vector<int> images(gens.size(), -1), full_map;
    if (search_images(g, h, gens, fact, candidates, 0, images, full_map)) {
        res.isomorphic = true;
        for (size_t s = 0; s < gens.size(); ++s)
            res.generator_map.push_back({gens[s], images[s]});
    }
    return res;
}

} // namespace pgonal

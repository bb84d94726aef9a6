#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pgonal {

/// A finite group as an explicit multiplication table. Elements are indices
/// 0..n-1; every element carries a canonical word over the named generators
/// (used for serialization and reports).
struct Table {
    int n = 0;
    std::vector<int> mul;             // n*n, row-major: mul[a*n+b] = a*b
    std::vector<int> inv;
    int id = 0;
    std::map<std::string, int> named; // generator name -> element index
    std::vector<std::string> words;   // canonical word per element ("1" for identity)

    int at(int a, int b) const { return mul[static_cast<size_t>(a) * n + b]; }
    int power(int g, long long e) const;
    int order_of(int g) const;
    int named_element(const std::string& name) const;
};

/// A finite group of conformal/anticonformal automorphisms: a Table together
/// with the orientation character w (multiplicative onto {+1,-1}, kernel of
/// index 2) and the distinguished p-gonality element phi of odd prime order,
/// generating a normal subgroup.
struct SignedGroup {
    Table table;
    std::vector<int> w; // +1 / -1 per element
    int phi = 0;
    int p = 0;          // order of phi

    int n() const { return table.n; }
    int mul(int a, int b) const { return table.at(a, b); }
    int inv(int g) const { return table.inv[g]; }
    int id() const { return table.id; }
    int conj(int g, int x) const { return mul(mul(g, x), inv(g)); } // g x g^-1
    const std::string& word(int g) const { return table.words[g]; }
};

struct Subgroup {
    std::vector<int> elements;   // sorted
    std::vector<int> generators; // witness generating set

    int order() const { return static_cast<int>(elements.size()); }
    bool contains(int g) const;

    friend bool operator==(const Subgroup& a, const Subgroup& b) {
        return a.elements == b.elements;
    }
};

struct IsoResult {
    bool isomorphic = false;
    // witness: generator-image pairs (element of G, element of H)
    std::vector<std::pair<int, int>> generator_map;
};

// ---------------------------------------------------------------------------
// Queries (all read-only; SignedGroup/Table are immutable once built)

int element_order(const Table& g, int x);
inline int element_order(const SignedGroup& g, int x) { return element_order(g.table, x); }

/// Conjugacy classes as a canonical partition: classes sorted by
/// (size, least member), members sorted ascending.
std::vector<std::vector<int>> conjugacy_classes(const Table& g);
inline std::vector<std::vector<int>> conjugacy_classes(const SignedGroup& g) {
    return conjugacy_classes(g.table);
}

Subgroup subgroup_generated(const Table& g, const std::vector<int>& gens);
inline Subgroup subgroup_generated(const SignedGroup& g, const std::vector<int>& gens) {
    return subgroup_generated(g.table, gens);
}

Subgroup normalizer(const Table& g, const Subgroup& h);
inline Subgroup normalizer(const SignedGroup& g, const Subgroup& h) {
    return normalizer(g.table, h);
}

Subgroup centralizer(const Table& g, const std::vector<int>& elems);
inline Subgroup centralizer(const SignedGroup& g, const std::vector<int>& elems) {
    return centralizer(g.table, elems);
}

bool is_normal(const Table& g, const Subgroup& h);
inline bool is_normal(const SignedGroup& g, const Subgroup& h) { return is_normal(g.table, h); }

/// Coset multiplication table of G/N; throws if N is not normal.
Table quotient_by_normal(const Table& g, const Subgroup& n);
inline Table quotient_by_normal(const SignedGroup& g, const Subgroup& n) {
    return quotient_by_normal(g.table, n);
}

/// Elements g with w(g) = -1 and g^2 = 1, ascending.
std::vector<int> anticonformal_involutions(const SignedGroup& g);

/// Restriction of a group to a subgroup, as a Table of its own
/// (element words are inherited from the parent).
Table subgroup_table(const Table& g, const Subgroup& h);

/// Decision via invariant prefilter, then backtracking over generator images.
/// Throws when either order exceeds `bound`.
IsoResult is_isomorphic(const Table& g, const Table& h, int bound = 2000);

/// All automorphisms of `g` whose order divides m, as permutations of the
/// element set; m = 0 means every automorphism.
std::vector<std::vector<int>> automorphisms_of_order_dividing(const Table& g, int m);

/// Structural invariants used by the isomorphism prefilter; exposed for tests.
struct GroupInvariants {
    int order = 0;
    bool abelian = false;
    int center_size = 0;
    int class_count = 0;
    std::vector<std::pair<int, int>> order_histogram; // (element order, count)
    friend bool operator==(const GroupInvariants&, const GroupInvariants&) = default;
};
GroupInvariants group_invariants(const Table& g);

} // namespace pgonal

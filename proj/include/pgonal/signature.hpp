#pragma once

#include "pgonal/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pgonal {

/// The combinatorial signature of an NEC group: orbifold genus, orientability,
/// proper periods and period cycles. A Fuchsian (orientation-preserving)
/// signature is the special case orientable + no period cycles.
struct NecSignature {
    bool orientable = true;
    int genus = 0;
    std::vector<int> proper_periods;
    std::vector<std::vector<int>> period_cycles; // an empty inner vector is the "(-)" cycle

    int cycle_count() const { return static_cast<int>(period_cycles.size()); }
    bool is_fuchsian() const { return orientable && period_cycles.empty(); }

    friend bool operator==(const NecSignature& a, const NecSignature& b) {
        return a.orientable == b.orientable && a.genus == b.genus &&
               a.proper_periods == b.proper_periods && a.period_cycles == b.period_cycles;
    }
};

/// Normalised hyperbolic area: the value stored is mu(Gamma) / (2*pi).
struct ExactArea {
    Rational value;
    friend bool operator==(const ExactArea& a, const ExactArea& b) { return a.value == b.value; }
};

struct Violation {
    std::string code;    // "period_below_two" | "nonpositive_area" | "negative_genus"
    std::string detail;
};

struct ParseError : std::runtime_error {
    size_t position;
    ParseError(const std::string& msg, size_t pos)
        : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

// ---------------------------------------------------------------------------
// Canonical presentation

enum class GenKind { Elliptic, Connector, Reflection, HyperbolicA, HyperbolicB, Glide };

struct GeneratorRef {
    GenKind kind;
    int i = 0; // 1-based index (cycle index for reflections)
    int j = 0; // reflection position within the cycle, 0..s_i

    bool orientation_reversing() const {
        return kind == GenKind::Reflection || kind == GenKind::Glide;
    }
    std::string name() const;

    friend bool operator==(const GeneratorRef& a, const GeneratorRef& b) {
        return a.kind == b.kind && a.i == b.i && a.j == b.j;
    }
};

struct Letter {
    GeneratorRef gen;
    int exponent = 1;
};

using Word = std::vector<Letter>;

std::string word_name(const Word& w);

struct CanonicalPresentation {
    std::vector<GeneratorRef> generators; // in canonical order
    std::vector<Word> relators;           // in canonical order, long relator last
};

// ---------------------------------------------------------------------------
// Operations

/// Parses the textual signature grammar, e.g. "(0,+,[3,3],{(3,3,3,3)})",
/// "(2,[-])" or "(0,+,[3,3,3],{(-)})". Whitespace-insensitive.
NecSignature parse_signature(const std::string& text);

/// Canonical text form; parse_signature(format_signature(s)) == s.
std::string format_signature(const NecSignature& sig);

/// mu/(2*pi) = eps*h - 2 + k + sum(1 - 1/m_i) + (1/2) sum(1 - 1/n_ij),
/// eps = 2 for orientable, 1 otherwise. May be non-positive; validate rejects that.
ExactArea area(const NecSignature& sig);

/// Empty list means the signature is valid: periods >= 2, genus >= 0, area > 0.
std::vector<Violation> validate(const NecSignature& sig);

CanonicalPresentation canonical_presentation(const NecSignature& sig);

/// Index [super : sub] = area(sub)/area(super); requires area(super) > 0.
Rational rh_index(const ExactArea& sub, const ExactArea& super);

/// Fuchsian signature (0,[p,...,p]) with u = 2g/(p-1) + 2 periods,
/// the one admitting an index-p surface kernel of genus g.
/// Throws when (p-1) does not divide 2g.
NecSignature cyclic_p_gonal_signature(int p, long long genus);

enum class TargetFamily {
    DpOrC2p, // bordered signature (0,+,[p^u],{(p^v)}): try both D_p and C_2p targets
    C2pOnly  // empty-cycle signature (0,+,[p^u],{(-)})
};

struct TaggedSignature {
    NecSignature sig;
    TargetFamily tag;
};

/// All NEC signatures admitting an index-2p surface kernel of genus g:
/// (0,+,[p^u],{(p^v)}) with (p-1)(2u+v-2) = 2g and v >= 1, plus the
/// empty-cycle family (0,+,[p^u],{(-)}) with (p-1)(u-1) = g when it exists.
std::vector<TaggedSignature> real_cyclic_signatures(int p, long long genus);

/// Genus g with 2g - 2 = group_order * area(sig); throws when no such
/// non-negative integer exists.
long long kernel_surface_genus(const NecSignature& sig, long long group_order);

/// Helper shared by several modules.
bool is_odd_prime(int p);

} // namespace pgonal

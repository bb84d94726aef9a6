#pragma once

#include "pgonal/epi.hpp"

#include <json.hpp>

#include <set>
#include <string>
#include <vector>

namespace pgonal {

enum class SpeciesSign { Plus, Minus, None };

/// The species of a symmetry: number of ovals (fixed-point curves) and
/// whether they separate the surface. k = 0 iff the sign is None.
struct SpeciesResult {
    long long ovals = 0;
    SpeciesSign sign = SpeciesSign::None;

    long long value() const {
        return sign == SpeciesSign::None ? 0 : (sign == SpeciesSign::Plus ? ovals : -ovals);
    }
    std::string str() const {
        if (sign == SpeciesSign::None) return "0";
        return (sign == SpeciesSign::Plus ? "+" : "-") + std::to_string(ovals);
    }
    friend bool operator==(const SpeciesResult& a, const SpeciesResult& b) {
        return a.ovals == b.ovals && a.sign == b.sign;
    }
};

/// Species of the symmetry sigma for an epimorphism onto a dihedral D_p or
/// cyclic C_2p target.
///
/// Ovals: a non-empty period cycle gives 1 oval; the empty cycle gives p
/// ovals when the connector maps to the identity and 1 oval otherwise.
/// Sign: always + for the C_2p target (odd subgroup index). For D_p the sign
/// is - iff proper periods exist, or the connector image is nontrivial, or
/// the reflections hit more than two distinct involutions.
SpeciesResult species(const SurfaceKernelEpi& epi, int sigma);

/// Coset graph of <sigma> in the target: one edge per canonical generator and
/// coset, carrying the generator's orientation flag.
struct SchreierGraph {
    int vertices = 0;
    struct Edge {
        int from = 0, to = 0;
        std::string generator;
        bool reversing = false;
    };
    std::vector<Edge> edges;
};

SchreierGraph schreier_graph(const SurfaceKernelEpi& epi, int sigma);

/// Orientability test on the coset graph: the sign is - iff some cycle
/// crosses an odd number of orientation-reversing edges. Dihedral targets only.
SpeciesSign schreier_sign_test(const SurfaceKernelEpi& epi, int sigma);

/// {-1, -p} for odd genus, {+1, -1, +p, -p} for even genus;
/// requires g >= (p-1)^2 + 1.
std::set<long long> allowed_species(int p, long long g);

// ---------------------------------------------------------------------------
// Exhaustive sweep

struct SpeciesRecord {
    std::string signature;
    std::string target;    // "D_p" or "C_2p"
    int epi_index = 0;
    SurfaceKernelEpi epi;
    SpeciesResult result;
    bool consistent = true;
};

struct Finding {
    std::string kind; // species_out_of_range | sign_rule_disagreement | zero_ovals
    std::string detail;
    nlohmann::ordered_json evidence;
};

struct SweepReport {
    int p = 0;
    long long genus = 0;
    std::vector<SpeciesRecord> records;
    std::vector<Finding> findings;
    std::set<long long> species_seen;

    nlohmann::ordered_json to_json() const;
    std::string render_text() const;
};

/// Enumerates every surface-kernel epimorphism onto D_p and C_2p over all
/// admissible signatures for (p, g), computes species, cross-checks the
/// dihedral sign rule against the coset-graph test, and records every
/// deviation as a finding (the sweep itself always completes).
SweepReport verify_theorem2(int p, long long g, const EnumOptions& options = {});

} // namespace pgonal

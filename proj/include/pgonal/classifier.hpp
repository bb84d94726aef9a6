#pragma once

#include "pgonal/group.hpp"
#include "pgonal/recipe.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace pgonal {

enum class PairType { Dp, C2p };

/// Dp when sigma inverts phi, C2p when sigma centralizes it. Anything else
/// would contradict the normality of <phi> for an involution and is
/// reported as a structural error.
PairType pair_type(const SignedGroup& g, int sigma);

/// One conjugacy class of anticonformal involutions with the data the
/// classification needs: the pair type of <phi, sigma> and both normalizers,
/// each with a structural identification.
struct SymmetryClass {
    int representative = 0;
    std::vector<int> members;
    PairType pair = PairType::Dp;
    Subgroup n_sigma;
    Subgroup n_phi_sigma;
    std::string n_sigma_family;
    std::string n_phi_sigma_family;
};

/// Anticonformal involutions partitioned into conjugacy classes, sorted by
/// (size, least member); empty when the group has no anticonformal
/// involutions.
std::vector<SymmetryClass> classify_symmetries(const SignedGroup& g);

// ---------------------------------------------------------------------------
// Ledger

struct ExpectedClass {
    std::string rep;    // word over the case generators
    std::string family; // family expression, or "G" for the whole group
    std::string pair;   // "", "Dp" or "C2p"
};

struct ClaimSet {
    std::vector<std::string> when; // condition tokens, all required; empty = always
    int class_count = 0;
    std::vector<ExpectedClass> classes;
};

struct LedgerEntry {
    std::string id;
    std::string note;   // the claim being verified, in plain words
    std::string domain; // parameter domain description
    std::vector<ClaimSet> claim_sets;
};

/// Loads the bundled ledger (or an override file). Throws on malformed data
/// or duplicate ids.
std::vector<LedgerEntry> ledger_entries(const std::string& path = std::string());

const LedgerEntry& find_entry(const std::vector<LedgerEntry>& entries, const std::string& id);

// ---------------------------------------------------------------------------
// Verification

struct ClaimRecord {
    std::string kind; // class_count | representative | pair_type | normalizer | coverage
    std::string subject;  // representative word where applicable
    std::string expected;
    std::string computed;
    bool match = false;
    std::string via;     // which normalizer matched, for normalizer claims
    std::string witness; // evidence accompanying a mismatch
};

struct ClassSummary {
    std::string rep_word;
    int size = 0;
    std::string pair;
    int n_sigma_order = 0;
    std::string n_sigma_family;
    int n_phi_sigma_order = 0;
    std::string n_phi_sigma_family;
};

struct CaseReport {
    std::string id;
    std::string params;
    int group_order = 0;
    std::string quotient_family; // spherical identification of G/<phi>
    std::vector<ClassSummary> classes;
    std::vector<ClaimRecord> claims;
    std::string error; // non-empty on internal failure

    int mismatches() const;
};

struct VerifyBudget {
    std::vector<int> ps{3, 5};
    int q_max = 6;
    int jobs = 1;
};

struct VerificationReport {
    std::vector<CaseReport> cases;
    int total_claims = 0;
    int matches = 0;
    int mismatch_count = 0;
    int errors = 0;

    void finalize();
    nlohmann::ordered_json to_json() const;
    std::string render_text() const;
};

CaseReport verify_case(const LedgerEntry& entry, const CaseParams& params);

/// Runs every ledger entry over every admissible in-budget parameter tuple.
/// Deterministic: entry order times parameter order, independent of jobs.
VerificationReport verify_all(const std::vector<LedgerEntry>& entries,
                              const VerifyBudget& budget = {});

} // namespace pgonal

#pragma once

#include "pgonal/group.hpp"

#include <json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pgonal {

/// Environment for integer expressions inside words ("fh^(p*q/2)").
using IntEnv = std::map<std::string, long long>;

/// Evaluates an integer expression with +, -, *, exact /, parentheses and
/// environment variables. Division with a remainder is an error.
long long eval_int_expr(const std::string& text, const IntEnv& env);

/// Evaluates a word like "s*fh^3" or "s*(t*a)^2" to an element index.
/// "1" denotes the identity.
int eval_word(const Table& g, const std::string& text, const IntEnv& env = {});

// ---------------------------------------------------------------------------
// Recipes

struct RecipeNode;
using RecipePtr = std::shared_ptr<RecipeNode>;

struct RecipeNode {
    enum class Kind { Cyclic, Dihedral, Direct, Semidirect, A4, S4, A5 };
    Kind kind;
    int order = 0;              // cyclic order / dihedral rotation order
    std::string gen1, gen2;     // cyclic: gen1; dihedral: gen1=rotation, gen2=reflection;
                                // A4/S4/A5: gen1=alpha, gen2=tau
    RecipePtr left, right;      // direct: factors; semidirect: left=normal, right=acting
    // acting generator name -> (normal generator name -> image word over the normal part)
    std::map<std::string, std::map<std::string, std::string>> action;
};

RecipePtr cyclic_recipe(int n, const std::string& gen);
RecipePtr dihedral_recipe(int n, const std::string& rot, const std::string& ref);
RecipePtr direct_recipe(RecipePtr a, RecipePtr b);
RecipePtr semidirect_recipe(RecipePtr normal, RecipePtr acting,
                            std::map<std::string, std::map<std::string, std::string>> action);
RecipePtr named_recipe(RecipeNode::Kind kind, const std::string& alpha, const std::string& tau);

/// Full construction data for a SignedGroup: the bare group, which generators
/// are anticonformal, the p-gonality word and optional extra named elements.
struct GroupRecipe {
    RecipePtr group;
    std::vector<std::string> anticonformal;
    std::string phi_word;
    std::map<std::string, std::string> aliases; // extra name -> word
};

/// Builds the bare multiplication table (no orientation data).
Table build_table(const RecipePtr& node);

/// Realizes the full recipe, verifying: the semidirect actions are
/// automorphisms and the action maps are homomorphisms; the orientation
/// character is multiplicative with an index-2 kernel; phi has odd prime
/// order and generates a normal subgroup.
SignedGroup realize(const GroupRecipe& recipe);

/// D_p with reflections anticonformal, phi = r.
SignedGroup dihedral_target(int p);
/// C_2p = C_p x C_2 with the order-2 factor anticonformal, phi = r.
SignedGroup cyclic_target(int p);

nlohmann::ordered_json recipe_to_json(const GroupRecipe& recipe);
GroupRecipe recipe_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Case constructors for the classification ledger

struct CaseParams {
    int p = 3;
    std::optional<int> q, i, j, k;
    std::optional<int> rho;    // +1 / -1 twist of the reflection action on phi
    std::string variant;       // "d" / "c" where a case covers both pair types
    std::string subcase;       // "a" / "b" for the merged case 4a

    std::string describe() const;
};

struct InadmissibleParams : std::domain_error {
    using std::domain_error::domain_error;
};

struct CaseRealization {
    GroupRecipe recipe;
    IntEnv env; // p, q, i, j, k plus derived quantities (q2, k2, j2, r0, h, pq2)
};

/// Recipe + word environment for one ledger case; throws InadmissibleParams
/// when the parameters violate the case's modular constraints.
CaseRealization make_case(const std::string& case_id, const CaseParams& params);

/// All admissible parameter tuples for a case within the budget
/// (p values and maximal q), in deterministic order.
std::vector<CaseParams> enumerate_case_params(const std::string& case_id,
                                              const std::vector<int>& ps, int q_max);

} // namespace pgonal

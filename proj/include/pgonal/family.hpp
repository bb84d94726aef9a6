#pragma once

#include "pgonal/group.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pgonal {

/// Family expressions name finite group families:
///   expr   := term (" x " term)*                      direct product
///   term   := "C[" n "]" | "D[" n "]" | "A4" | "S4" | "A5"
///           | "SD(" expr "," "C[" m "]" ")"           any semidirect product
///           | "(" expr ")"
/// where n, m are integer expressions over the parameter environment.
/// SD(N, C[m]) matches every extension N x| C_m, the direct product included.

/// True when `target` is isomorphic to some instantiation of the family.
bool matches_family(const Table& target, const std::string& family_expr,
                    const std::map<std::string, long long>& env = {});

/// Best-effort structural name for a group ("D[15]", "C[3] x C[2] x C[2]",
/// "SD(C[6] x C[2],C[2])", ...) or "unrecognized".
std::string identify_family(const Table& g);

/// The family of finite groups of conformal/anticonformal sphere
/// automorphisms that `g` belongs to, if any: one of D[q], C[q] x C[2],
/// SD(D[q],C[2]), A4 x C[2], S4, S4 x C[2], A5 x C[2].
std::optional<std::string> spherical_family_member(const Table& g);

} // namespace pgonal

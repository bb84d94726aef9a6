#pragma once

#include "pgonal/group.hpp"
#include "pgonal/signature.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pgonal {

/// A surface-kernel epimorphism: images of the canonical generators of the
/// NEC group with the given signature in a signed target group, satisfying
/// - every relator maps to the identity,
/// - the images generate the target,
/// - torsion is preserved exactly (elliptic images of order m_i, reflection
///   images of order 2, adjacent reflection products of order n_ij),
/// - orientation is respected (reflections anticonformal, the rest conformal).
struct SurfaceKernelEpi {
    NecSignature sig;
    // shared across all epimorphisms of one enumeration
    std::shared_ptr<const CanonicalPresentation> pres;
    std::shared_ptr<const SignedGroup> target;
    std::vector<int> images; // aligned with pres->generators

    int image_of(const GeneratorRef& gen) const;
    int connector_image() const; // image of e_1 (requires one period cycle)
};

struct KernelCheck {
    bool ok = true;
    std::string violation; // names the first failing condition/relator
};

KernelCheck check_surface_kernel(const SurfaceKernelEpi& epi);

struct EnumOptions {
    long long budget = 50'000'000; // bound on the raw assignment space
    int jobs = 1;
};

/// The complete duplicate-free list of surface-kernel epimorphisms from the
/// NEC group with signature `sig` (orbifold genus 0) onto `target`, in
/// canonical (lexicographic image tuple) order. Deterministic across runs
/// and worker counts.
std::vector<SurfaceKernelEpi> enumerate_surface_kernel_epis(
    const NecSignature& sig, std::shared_ptr<const SignedGroup> target,
    const EnumOptions& options = {});

long long kernel_genus(const SurfaceKernelEpi& epi);

/// The bordered construction: signature (0,+,[p,p],{(p^v)}) with
/// v = 2(g-p+1)/(p-1), onto D_p. Elliptic images r and r^mu, alternating
/// reflection images s, sr, connector r^eps with 1+eps+mu = 0 mod p and the
/// cycle-closing relator satisfied; eps and mu take the least non-negative
/// admissible values.
SurfaceKernelEpi theta1(int p, long long g);

/// Signature (0,+,[-],{(p^v)}) with v = 2(g+p-1)/(p-1), g even, onto D_p:
/// alternating reflections s, sr, connector to the identity.
SurfaceKernelEpi theta2(int p, long long g);

enum class ThetaTarget { Dp, C2p };

/// Signature (0,+,[p^u],{(-)}) with u = g/(p-1)+1, g even. The single
/// reflection maps to the anticonformal involution; elliptic images are
/// powers of r closing the long relator against the connector image
/// (identity for the D_p target, any power of r for C_2p).
SurfaceKernelEpi theta3(int p, long long g, ThetaTarget target,
                        const std::string& connector_word = "1");

/// Permutation action of each canonical generator image on the right cosets
/// of H, by right multiplication. coset 0 contains the identity.
std::vector<std::vector<int>> coset_action(const SurfaceKernelEpi& epi, const Subgroup& h);

nlohmann::ordered_json epi_to_json(const SurfaceKernelEpi& epi, const std::string& group_name);

} // namespace pgonal

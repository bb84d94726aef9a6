#include "pgonal/species.hpp"

#include "pgonal/parallel.hpp"
#include "pgonal/recipe.hpp"

#include <algorithm>
#include <map>

namespace pgonal {

namespace {

enum class TargetKind { Dihedral, Cyclic };

TargetKind classify_target(const SignedGroup& g) {
    if (g.n() != 2 * g.p)
        throw std::domain_error("species rules apply to targets of order 2p only");
    // C_2p is abelian, D_p is not (p odd prime)
    for (int x = 0; x < g.n(); ++x)
        if (g.mul(x, g.phi) != g.mul(g.phi, x)) return TargetKind::Dihedral;
    return TargetKind::Cyclic;
}

void validate_sigma(const SignedGroup& g, int sigma) {
    if (sigma < 0 || sigma >= g.n() || sigma == g.id() || g.mul(sigma, sigma) != g.id() ||
        g.w[sigma] != -1)
        throw std::domain_error("sigma must be an anticonformal involution of the target");
}

int distinct_reflection_images(const SurfaceKernelEpi& epi) {
    std::set<int> seen;
    for (size_t i = 0; i < epi.pres->generators.size(); ++i)
        if (epi.pres->generators[i].kind == GenKind::Reflection) seen.insert(epi.images[i]);
    return static_cast<int>(seen.size());
}

} // namespace

SpeciesResult species(const SurfaceKernelEpi& epi, int sigma) {
    const SignedGroup& g = *epi.target;
    TargetKind kind = classify_target(g);
    validate_sigma(g, sigma);
    if (epi.sig.cycle_count() != 1)
        throw std::domain_error("species rules require exactly one period cycle");

    bool empty_cycle = epi.sig.period_cycles[0].empty();
    int e_img = epi.connector_image();

    SpeciesResult out;
    out.ovals = (!empty_cycle || e_img != g.id()) ? 1 : g.p;

    if (kind == TargetKind::Cyclic) {
        out.sign = SpeciesSign::Plus; // the preimage subgroup has odd index p
        return out;
    }
    bool has_periods = !epi.sig.proper_periods.empty();
    bool connector_nontrivial = e_img != g.id();
    bool many_involutions = distinct_reflection_images(epi) > 2;
    out.sign = (has_periods || connector_nontrivial || many_involutions) ? SpeciesSign::Minus
                                                                         : SpeciesSign::Plus;
    return out;
}

SchreierGraph schreier_graph(const SurfaceKernelEpi& epi, int sigma) {
    const SignedGroup& g = *epi.target;
    validate_sigma(g, sigma);
    Subgroup h = subgroup_generated(g, {sigma});
    std::vector<int> coset_of(g.n(), -1);
    std::vector<int> reps;
    for (int x = 0; x < g.n(); ++x) {
        if (coset_of[x] != -1) continue;
        int c = static_cast<int>(reps.size());
        reps.push_back(x);
        for (int e : h.elements) coset_of[g.mul(e, x)] = c;
    }
    SchreierGraph graph;
    graph.vertices = static_cast<int>(reps.size());
    for (size_t i = 0; i < epi.pres->generators.size(); ++i) {
        const GeneratorRef& gen = epi.pres->generators[i];
        for (int v = 0; v < graph.vertices; ++v) {
            int to = coset_of[g.mul(reps[static_cast<size_t>(v)], epi.images[i])];
            graph.edges.push_back({v, to, gen.name(), gen.orientation_reversing()});
        }
    }
    return graph;
}

SpeciesSign schreier_sign_test(const SurfaceKernelEpi& epi, int sigma) {
    const SignedGroup& g = *epi.target;
    if (classify_target(g) != TargetKind::Dihedral)
        throw std::domain_error("the coset-graph sign test applies to dihedral targets only");
    SchreierGraph graph = schreier_graph(epi, sigma);

    // Parity 2-colouring: a conflict means some cycle (never a loop) crosses
    // an odd number of orientation-reversing edges, so the quotient surface
    // is non-orientable. Loops are excluded: a reflection fixing a coset
    // yields a boundary component of the quotient, not a cross-cap.
    std::vector<std::vector<std::pair<int, int>>> adj(graph.vertices); // (to, weight)
    for (const auto& e : graph.edges) {
        if (e.from == e.to) continue;
        int w = e.reversing ? 1 : 0;
        adj[e.from].push_back({e.to, w});
        adj[e.to].push_back({e.from, w});
    }
    std::vector<int> parity(graph.vertices, -1);
    for (int root = 0; root < graph.vertices; ++root) {
        if (parity[root] != -1) continue;
        parity[root] = 0;
        std::vector<int> stack{root};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (auto [to, w] : adj[v]) {
                int want = parity[v] ^ w;
                if (parity[to] == -1) {
                    parity[to] = want;
                    stack.push_back(to);
                } else if (parity[to] != want) {
                    return SpeciesSign::Minus;
                }
            }
        }
    }
    return SpeciesSign::Plus;
}

std::set<long long> allowed_species(int p, long long g) {
    if (!is_odd_prime(p)) throw std::domain_error("p must be an odd prime");
    long long bound = static_cast<long long>(p - 1) * (p - 1) + 1;
    if (g < bound)
        throw std::domain_error("genus below the uniqueness bound (p-1)^2 + 1");
    if (g % 2 == 1) return {-1, -p};
    return {1, -1, p, -p};
}

// ---------------------------------------------------------------------------
// Sweep

nlohmann::ordered_json SweepReport::to_json() const {
    nlohmann::ordered_json j;
    j["p"] = p;
    j["genus"] = genus;
    j["records"] = nlohmann::ordered_json::array();
    for (const auto& rec : records) {
        nlohmann::ordered_json r;
        r["signature"] = rec.signature;
        r["target"] = rec.target;
        r["epi"] = rec.epi_index;
        r["species"] = rec.result.str();
        r["consistent"] = rec.consistent;
        j["records"].push_back(std::move(r));
    }
    j["species_seen"] = nlohmann::ordered_json::array();
    for (long long v : species_seen) j["species_seen"].push_back(v);
    j["findings"] = nlohmann::ordered_json::array();
    for (const auto& f : findings) {
        nlohmann::ordered_json r;
        r["kind"] = f.kind;
        r["detail"] = f.detail;
        r["evidence"] = f.evidence;
        j["findings"].push_back(std::move(r));
    }
    return j;
}

std::string SweepReport::render_text() const {
    std::string out = "species sweep p=" + std::to_string(p) + " genus=" + std::to_string(genus) +
                      ": " + std::to_string(records.size()) + " epimorphisms\n";
    std::map<std::string, std::map<std::string, int>> by_sig;
    for (const auto& rec : records)
        ++by_sig[rec.signature + " -> " + rec.target][rec.result.str()];
    for (const auto& [key, counts] : by_sig) {
        out += "  " + key + ":";
        for (const auto& [sp, count] : counts)
            out += " " + sp + " (x" + std::to_string(count) + ")";
        out += "\n";
    }
    out += "  species seen:";
    for (long long v : species_seen) out += " " + std::to_string(v);
    out += "\n  findings: " + std::to_string(findings.size()) + "\n";
    for (const auto& f : findings) out += "  FINDING " + f.kind + ": " + f.detail + "\n";
    return out;
}

SweepReport verify_theorem2(int p, long long g, const EnumOptions& options) {
    SweepReport report;
    report.p = p;
    report.genus = g;
    std::set<long long> allowed = allowed_species(p, g);

    auto dp = std::make_shared<SignedGroup>(dihedral_target(p));
    auto c2p = std::make_shared<SignedGroup>(cyclic_target(p));
    std::vector<std::pair<std::shared_ptr<SignedGroup>, std::string>> targets;
    targets.push_back({dp, "D_p"});
    targets.push_back({c2p, "C_2p"});

    for (const TaggedSignature& tagged : real_cyclic_signatures(p, g)) {
        for (const auto& [target, name] : targets) {
            std::vector<SurfaceKernelEpi> epis =
                enumerate_surface_kernel_epis(tagged.sig, target, options);
            int sigma = target->table.named_element("s");
            for (size_t i = 0; i < epis.size(); ++i) {
                SpeciesRecord rec;
                rec.signature = format_signature(tagged.sig);
                rec.target = name;
                rec.epi_index = static_cast<int>(i);
                rec.epi = epis[i];
                rec.result = species(epis[i], sigma);
                rec.consistent = allowed.count(rec.result.value()) > 0;
                report.species_seen.insert(rec.result.value());
                if (rec.result.ovals == 0)
                    report.findings.push_back({"zero_ovals",
                                               "fixed-point-free symmetry encountered",
                                               epi_to_json(epis[i], name)});
                if (!rec.consistent)
                    report.findings.push_back(
                        {"species_out_of_range",
                         "species " + rec.result.str() + " outside the allowed set",
                         epi_to_json(epis[i], name)});
                if (name == "D_p") {
                    SpeciesSign graph_sign = schreier_sign_test(epis[i], sigma);
                    if (graph_sign != rec.result.sign) {
                        nlohmann::ordered_json evidence = epi_to_json(epis[i], name);
                        evidence["condition_sign"] =
                            rec.result.sign == SpeciesSign::Plus ? "+" : "-";
                        evidence["graph_sign"] = graph_sign == SpeciesSign::Plus ? "+" : "-";
                        report.findings.push_back(
                            {"sign_rule_disagreement",
                             "three-condition sign differs from the coset-graph sign",
                             std::move(evidence)});
                    }
                }
                report.records.push_back(std::move(rec));
            }
        }
    }
    return report;
}

} // namespace pgonal

#include "pgonal/epi.hpp"

#include "pgonal/parallel.hpp"
#include "pgonal/recipe.hpp"

#include <algorithm>
#include <map>

namespace pgonal {

namespace {

int generator_index(const CanonicalPresentation& pres, const GeneratorRef& gen) {
    for (size_t i = 0; i < pres.generators.size(); ++i)
        if (pres.generators[i] == gen) return static_cast<int>(i);
    throw std::logic_error("generator not in presentation: " + gen.name());
}

int eval_relator(const SignedGroup& g, const CanonicalPresentation& pres,
                 const std::vector<int>& images, const Word& w) {
    int acc = g.id();
    for (const Letter& l : w) {
        int img = images[static_cast<size_t>(generator_index(pres, l.gen))];
        acc = g.mul(acc, g.table.power(img, l.exponent));
    }
    return acc;
}

} // namespace

int SurfaceKernelEpi::image_of(const GeneratorRef& gen) const {
    return images[static_cast<size_t>(generator_index(*pres, gen))];
}

int SurfaceKernelEpi::connector_image() const {
    return image_of({GenKind::Connector, 1, 0});
}

KernelCheck check_surface_kernel(const SurfaceKernelEpi& epi) {
    const SignedGroup& g = *epi.target;
    const auto& pres = *epi.pres;
    if (epi.images.size() != pres.generators.size())
        return {false, "images missing for some generators"};

    // exact torsion
    const auto& periods = epi.sig.proper_periods;
    for (size_t i = 0; i < periods.size(); ++i) {
        GeneratorRef x{GenKind::Elliptic, static_cast<int>(i) + 1, 0};
        int ord = element_order(g, epi.image_of(x));
        if (ord != periods[i])
            return {false, "torsion: " + x.name() + " maps to an element of order " +
                               std::to_string(ord) + ", expected " + std::to_string(periods[i])};
    }
    for (int c = 1; c <= epi.sig.cycle_count(); ++c) {
        const auto& cyc = epi.sig.period_cycles[c - 1];
        int s = static_cast<int>(cyc.size());
        for (int j = 0; j <= s; ++j) {
            GeneratorRef ref{GenKind::Reflection, c, j};
            int ord = element_order(g, epi.image_of(ref));
            if (ord != 2)
                return {false, "torsion: " + ref.name() + " maps to an element of order " +
                                   std::to_string(ord) + ", expected 2"};
        }
        for (int j = 1; j <= s; ++j) {
            int prod = g.mul(epi.image_of({GenKind::Reflection, c, j - 1}),
                             epi.image_of({GenKind::Reflection, c, j}));
            int ord = element_order(g, prod);
            if (ord != cyc[j - 1])
                return {false, "torsion: c" + std::to_string(c) + "," + std::to_string(j - 1) +
                                   " c" + std::to_string(c) + "," + std::to_string(j) +
                                   " maps to an element of order " + std::to_string(ord) +
                                   ", expected " + std::to_string(cyc[j - 1])};
        }
    }

    // orientation compatibility
    for (size_t i = 0; i < pres.generators.size(); ++i) {
        const GeneratorRef& gen = pres.generators[i];
        int want = gen.orientation_reversing() ? -1 : 1;
        if (g.w[epi.images[i]] != want)
            return {false, "orientation: " + gen.name() + " maps to a " +
                               (want == -1 ? "conformal" : "anticonformal") + " element"};
    }

    // relators
    for (const Word& rel : pres.relators)
        if (eval_relator(g, pres, epi.images, rel) != g.id())
            return {false, "relator " + word_name(rel) + " does not map to the identity"};

    // surjectivity
    std::vector<int> gens(epi.images.begin(), epi.images.end());
    if (subgroup_generated(g, gens).order() != g.n())
        return {false, "images do not generate the target group"};

    return {};
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

struct SearchPlan {
    // generator order: x_1..x_r, e_1..e_k, then reflections cycle by cycle
    std::vector<std::vector<int>> candidates; // per generator
    int r = 0, k = 0;
    std::vector<int> cycle_first;  // index of c_{i,0} per cycle
    std::vector<int> cycle_last;   // index of c_{i,s_i}
    std::vector<std::vector<int>> link_periods;
};

SearchPlan make_plan(const NecSignature& sig, const SignedGroup& g) {
    SearchPlan plan;
    plan.r = static_cast<int>(sig.proper_periods.size());
    plan.k = sig.cycle_count();
    plan.link_periods = sig.period_cycles;

    auto conformal_of_order = [&](int m) {
        std::vector<int> out;
        for (int x = 0; x < g.n(); ++x)
            if (g.w[x] == 1 && element_order(g, x) == m) out.push_back(x);
        return out;
    };
    std::vector<int> anticonformal_inv = anticonformal_involutions(g);
    std::vector<int> conformal_all;
    for (int x = 0; x < g.n(); ++x)
        if (g.w[x] == 1) conformal_all.push_back(x);

    for (int m : sig.proper_periods) plan.candidates.push_back(conformal_of_order(m));
    for (int i = 0; i < plan.k; ++i) plan.candidates.push_back(conformal_all);
    int pos = plan.r + plan.k;
    for (int i = 0; i < plan.k; ++i) {
        int s = static_cast<int>(sig.period_cycles[i].size());
        plan.cycle_first.push_back(pos);
        for (int j = 0; j <= s; ++j) {
            plan.candidates.push_back(anticonformal_inv);
            ++pos;
        }
        plan.cycle_last.push_back(pos - 1);
    }
    return plan;
}

struct Searcher {
    const SignedGroup& g;
    const SearchPlan& plan;
    std::vector<int> assignment;
    std::vector<SurfaceKernelEpi>* out;
    const NecSignature& sig;
    std::shared_ptr<const CanonicalPresentation> pres;

    bool admissible(int depth, int value) const {
        // link-period constraint against the previous reflection
        for (size_t cyc = 0; cyc < plan.cycle_first.size(); ++cyc) {
            int first = plan.cycle_first[cyc];
            int last = plan.cycle_last[cyc];
            if (depth > first && depth <= last) {
                int n = plan.link_periods[cyc][static_cast<size_t>(depth - first - 1)];
                int prod = g.mul(assignment[static_cast<size_t>(depth - 1)], value);
                if (element_order(g, prod) != n) return false;
            }
            if (depth == last) {
                // connecting relator c_{i,0} e_i^-1 c_{i,s_i} e_i = 1
                int e = assignment[static_cast<size_t>(plan.r + static_cast<int>(cyc))];
                int c0 = depth == first ? value : assignment[static_cast<size_t>(first)];
                int lhs = g.mul(g.mul(g.mul(c0, g.inv(e)), value), e);
                if (lhs != g.id()) return false;
            }
        }
        // long relator once all x's and e's are placed (h = 0)
        int last_free = plan.k > 0 ? plan.r + plan.k - 1 : plan.r - 1;
        if (depth == last_free && last_free >= 0) {
            int acc = g.id();
            for (int i = 0; i <= last_free; ++i)
                acc = g.mul(acc, i == depth ? value : assignment[static_cast<size_t>(i)]);
            if (acc != g.id()) return false;
        }
        return true;
    }

    void dfs(size_t depth) {
        if (depth == plan.candidates.size()) {
            std::vector<int> gens(assignment.begin(), assignment.end());
            if (subgroup_generated(g, gens).order() != g.n()) return;
            SurfaceKernelEpi epi;
            epi.sig = sig;
            epi.pres = pres;
            epi.images = assignment;
            out->push_back(std::move(epi));
            return;
        }
        for (int cand : plan.candidates[depth]) {
            if (!admissible(static_cast<int>(depth), cand)) continue;
            assignment[depth] = cand;
            dfs(depth + 1);
        }
    }
};

} // namespace

std::vector<SurfaceKernelEpi> enumerate_surface_kernel_epis(
    const NecSignature& sig, std::shared_ptr<const SignedGroup> target,
    const EnumOptions& options) {
    if (sig.genus != 0 || !sig.orientable)
        throw std::domain_error("enumeration supports orbifold genus 0 only");
    auto violations = validate(sig);
    if (!violations.empty())
        throw std::domain_error("invalid signature: " + violations.front().detail);

    const SignedGroup& g = *target;
    SearchPlan plan = make_plan(sig, g);
    auto pres = std::make_shared<const CanonicalPresentation>(canonical_presentation(sig));

    // Search-space estimate with the link-period constraint folded in: after
    // the first reflection of a cycle, only images whose product with the
    // previous one has the right order remain.
    long long space = 1;
    auto charge = [&](long long factor) {
        space *= std::max<long long>(1, factor);
        if (space > options.budget)
            throw std::domain_error("enumeration budget exceeded (assignment space too large)");
    };
    for (int idx = 0; idx < plan.r + plan.k; ++idx) {
        if (plan.candidates[static_cast<size_t>(idx)].empty()) return {};
        charge(static_cast<long long>(plan.candidates[static_cast<size_t>(idx)].size()));
    }
    for (size_t cyc = 0; cyc < plan.cycle_first.size(); ++cyc) {
        const auto& pool = plan.candidates[static_cast<size_t>(plan.cycle_first[cyc])];
        if (pool.empty()) return {};
        charge(static_cast<long long>(pool.size()));
        for (size_t j = 0; j < plan.link_periods[cyc].size(); ++j) {
            int n = plan.link_periods[cyc][j];
            long long branching = 0;
            for (int t : pool) {
                long long count = 0;
                for (int u : pool)
                    if (element_order(g, g.mul(t, u)) == n) ++count;
                branching = std::max(branching, count);
            }
            if (branching == 0) return {};
            charge(branching);
        }
    }

    std::vector<SurfaceKernelEpi> all;
    if (plan.candidates.empty()) return all;

    int jobs = std::max(1, options.jobs);
    auto run_prefix = [&](int first_value) {
        std::vector<SurfaceKernelEpi> local;
        Searcher s{g, plan, std::vector<int>(plan.candidates.size(), -1), &local, sig, pres};
        if (s.admissible(0, first_value)) {
            s.assignment[0] = first_value;
            s.dfs(1);
        }
        return local;
    };
    std::vector<std::vector<SurfaceKernelEpi>> parts =
        parallel_map<int, std::vector<SurfaceKernelEpi>>(plan.candidates[0], run_prefix, jobs);
    for (auto& part : parts)
        for (auto& epi : part) {
            epi.target = target;
            all.push_back(std::move(epi));
        }
    std::sort(all.begin(), all.end(),
              [](const SurfaceKernelEpi& a, const SurfaceKernelEpi& b) {
                  return a.images < b.images;
              });
    return all;
}

long long kernel_genus(const SurfaceKernelEpi& epi) {
    return kernel_surface_genus(epi.sig, epi.target->n());
}

// ---------------------------------------------------------------------------
// Explicit constructions

namespace {

SurfaceKernelEpi finish_construction(SurfaceKernelEpi epi, const std::string& label) {
    KernelCheck check = check_surface_kernel(epi);
    if (!check.ok)
        throw std::domain_error(label + " construction fails validation: " + check.violation);
    return epi;
}

} // namespace

SurfaceKernelEpi theta1(int p, long long g) {
    if (!is_odd_prime(p)) throw std::domain_error("p must be an odd prime");
    if ((2 * (g - p + 1)) % (p - 1) != 0)
        throw std::domain_error("theta1 requires (p-1) | 2(g-p+1)");
    long long v = 2 * (g - p + 1) / (p - 1);
    if (v < 1) throw std::domain_error("theta1 requires at least one link period");

    SurfaceKernelEpi epi;
    epi.sig.orientable = true;
    epi.sig.genus = 0;
    epi.sig.proper_periods = {p, p};
    epi.sig.period_cycles.push_back(std::vector<int>(static_cast<size_t>(v), p));
    epi.pres = std::make_shared<const CanonicalPresentation>(canonical_presentation(epi.sig));
    epi.target = std::make_shared<SignedGroup>(dihedral_target(p));
    const SignedGroup& t = *epi.target;
    int r = t.table.named_element("r");
    int s = t.table.named_element("s");
    int sr = t.mul(s, r);

    // wrap condition: c_0 e^-1 c_v e = 1 with alternating c_j in {s, sr}
    long long eps = (v % 2 == 0) ? 0 : (p - 1) / 2;
    long long mu = ((-1 - eps) % p + p) % p;

    epi.images.assign(epi.pres->generators.size(), -1);
    auto set = [&](GeneratorRef gen, int val) {
        for (size_t i = 0; i < epi.pres->generators.size(); ++i)
            if (epi.pres->generators[i] == gen) epi.images[i] = val;
    };
    set({GenKind::Elliptic, 1, 0}, r);
    set({GenKind::Elliptic, 2, 0}, t.table.power(r, mu));
    set({GenKind::Connector, 1, 0}, t.table.power(r, eps));
    for (int j = 0; j <= v; ++j)
        set({GenKind::Reflection, 1, j}, j % 2 == 0 ? s : sr);
    return finish_construction(std::move(epi), "theta1");
}

SurfaceKernelEpi theta2(int p, long long g) {
    if (!is_odd_prime(p)) throw std::domain_error("p must be an odd prime");
    if (g % 2 != 0) throw std::domain_error("theta2 requires even genus");
    if ((2 * (g + p - 1)) % (p - 1) != 0)
        throw std::domain_error("theta2 requires (p-1) | 2(g+p-1)");
    long long v = 2 * (g + p - 1) / (p - 1);
    if (v % 2 != 0)
        throw std::domain_error(
            "theta2 alternation cannot close: the link-period count is odd");

    SurfaceKernelEpi epi;
    epi.sig.orientable = true;
    epi.sig.genus = 0;
    epi.sig.period_cycles.push_back(std::vector<int>(static_cast<size_t>(v), p));
    epi.pres = std::make_shared<const CanonicalPresentation>(canonical_presentation(epi.sig));
    epi.target = std::make_shared<SignedGroup>(dihedral_target(p));
    const SignedGroup& t = *epi.target;
    int s = t.table.named_element("s");
    int sr = t.mul(s, t.table.named_element("r"));

    epi.images.assign(epi.pres->generators.size(), -1);
    epi.images[0] = t.id(); // e_1
    for (int j = 0; j <= v; ++j)
        epi.images[static_cast<size_t>(1 + j)] = j % 2 == 0 ? s : sr;
    return finish_construction(std::move(epi), "theta2");
}

SurfaceKernelEpi theta3(int p, long long g, ThetaTarget target, const std::string& connector_word) {
    if (!is_odd_prime(p)) throw std::domain_error("p must be an odd prime");
    if (g % 2 != 0) throw std::domain_error("theta3 requires even genus");
    if (g % (p - 1) != 0) throw std::domain_error("theta3 requires (p-1) | g");
    long long u = g / (p - 1) + 1;
    if (u < 2) throw std::domain_error("theta3 requires at least two proper periods");

    SurfaceKernelEpi epi;
    epi.sig.orientable = true;
    epi.sig.genus = 0;
    epi.sig.proper_periods.assign(static_cast<size_t>(u), p);
    epi.sig.period_cycles.push_back({});
    epi.pres = std::make_shared<const CanonicalPresentation>(canonical_presentation(epi.sig));
    epi.target = std::make_shared<SignedGroup>(
        target == ThetaTarget::Dp ? dihedral_target(p) : cyclic_target(p));
    const SignedGroup& t = *epi.target;
    int r = t.table.named_element("r");
    int s = t.table.named_element("s");

    int conn = eval_word(t.table, connector_word);
    // connector must be a power of r; the dihedral target forces the identity
    long long m = -1;
    for (long long e = 0; e < p; ++e)
        if (t.table.power(r, e) == conn) { m = e; break; }
    if (m < 0) throw std::domain_error("theta3 connector image must be a power of r");
    if (target == ThetaTarget::Dp && m != 0)
        throw std::domain_error(
            "theta3 onto the dihedral target requires the connector to map to the identity");

    // elliptic exponents in {1..p-1} summing to -m mod p
    std::vector<long long> exps(static_cast<size_t>(u), 1);
    long long last = (((-m - (u - 1)) % p) + p) % p;
    if (last == 0) {
        exps[static_cast<size_t>(u - 2)] = 2;
        last = (((-m - (u - 2) - 2) % p) + p) % p;
    }
    exps[static_cast<size_t>(u - 1)] = last;

    epi.images.assign(epi.pres->generators.size(), -1);
    for (long long i = 0; i < u; ++i)
        epi.images[static_cast<size_t>(i)] = t.table.power(r, exps[static_cast<size_t>(i)]);
    epi.images[static_cast<size_t>(u)] = conn;  // e_1
    epi.images[static_cast<size_t>(u + 1)] = s; // c_{1,0}
    return finish_construction(std::move(epi), "theta3");
}

std::vector<std::vector<int>> coset_action(const SurfaceKernelEpi& epi, const Subgroup& h) {
    const SignedGroup& g = *epi.target;
    std::vector<int> coset_of(g.n(), -1);
    std::vector<int> reps;
    for (int x = 0; x < g.n(); ++x) {
        if (coset_of[x] != -1) continue;
        int c = static_cast<int>(reps.size());
        reps.push_back(x);
        for (int e : h.elements) coset_of[g.mul(e, x)] = c; // right coset H x
    }
    std::vector<std::vector<int>> perms;
    for (size_t i = 0; i < epi.pres->generators.size(); ++i) {
        std::vector<int> perm(reps.size());
        for (size_t c = 0; c < reps.size(); ++c)
            perm[c] = coset_of[g.mul(reps[c], epi.images[i])];
        perms.push_back(std::move(perm));
    }
    return perms;
}

nlohmann::ordered_json epi_to_json(const SurfaceKernelEpi& epi, const std::string& group_name) {
    nlohmann::ordered_json j;
    j["signature"] = format_signature(epi.sig);
    j["group"] = group_name;
    nlohmann::ordered_json images = nlohmann::ordered_json::object();
    for (size_t i = 0; i < epi.pres->generators.size(); ++i)
        images[epi.pres->generators[i].name()] = epi.target->word(epi.images[i]);
    j["images"] = images;
    return j;
}

} // namespace pgonal

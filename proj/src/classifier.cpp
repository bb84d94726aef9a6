#include "pgonal/classifier.hpp"

#include "pgonal/family.hpp"
#include "pgonal/parallel.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace pgonal {

PairType pair_type(const SignedGroup& g, int sigma) {
    if (sigma == g.id() || g.mul(sigma, sigma) != g.id() || g.w[sigma] != -1)
        throw std::domain_error("pair type requires an anticonformal involution");
    int conj = g.conj(sigma, g.phi);
    if (conj == g.phi) return PairType::C2p;
    if (conj == g.inv(g.phi)) return PairType::Dp;
    throw std::domain_error(
        "structural error: sigma phi sigma is neither phi nor its inverse");
}

std::vector<SymmetryClass> classify_symmetries(const SignedGroup& g) {
    std::vector<int> involutions = anticonformal_involutions(g);
    std::vector<bool> seen(g.n(), false);
    std::vector<SymmetryClass> classes;
    for (int x : involutions) {
        if (seen[x]) continue;
        SymmetryClass cls;
        for (int c = 0; c < g.n(); ++c) {
            int y = g.conj(c, x);
            if (!seen[y]) {
                seen[y] = true;
                cls.members.push_back(y);
            }
        }
        std::sort(cls.members.begin(), cls.members.end());
        cls.representative = cls.members.front();
        classes.push_back(std::move(cls));
    }
    std::sort(classes.begin(), classes.end(), [](const SymmetryClass& a, const SymmetryClass& b) {
        if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
        return a.representative < b.representative;
    });
    for (SymmetryClass& cls : classes) {
        cls.pair = pair_type(g, cls.representative);
        cls.n_sigma = normalizer(g, subgroup_generated(g, {cls.representative}));
        cls.n_phi_sigma = normalizer(g, subgroup_generated(g, {g.phi, cls.representative}));
        cls.n_sigma_family = identify_family(subgroup_table(g.table, cls.n_sigma));
        cls.n_phi_sigma_family = identify_family(subgroup_table(g.table, cls.n_phi_sigma));
    }
    return classes;
}

// ---------------------------------------------------------------------------
// Ledger loading

std::vector<LedgerEntry> ledger_entries(const std::string& path) {
    std::string file = path.empty() ? PGONAL_LEDGER_FILE : path;
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open ledger file: " + file);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed ledger file " + file + ": " + e.what());
    }
    if (!j.is_object() || !j.count("entries"))
        throw std::runtime_error("malformed ledger file: missing entries");
    std::vector<LedgerEntry> out;
    for (const auto& je : j.at("entries")) {
        LedgerEntry entry;
        entry.id = je.at("id").get<std::string>();
        entry.note = je.value("note", std::string());
        entry.domain = je.value("domain", std::string());
        for (const auto& jc : je.at("claims")) {
            ClaimSet cs;
            if (jc.count("when")) cs.when = jc.at("when").get<std::vector<std::string>>();
            cs.class_count = jc.at("count").get<int>();
            for (const auto& jcls : jc.at("classes")) {
                ExpectedClass ec;
                ec.rep = jcls.at("rep").get<std::string>();
                ec.family = jcls.at("family").get<std::string>();
                ec.pair = jcls.value("pair", std::string());
                cs.classes.push_back(std::move(ec));
            }
            if (cs.class_count < 1 || static_cast<int>(cs.classes.size()) != cs.class_count)
                throw std::runtime_error("malformed ledger entry " + entry.id +
                                         ": class list does not match the stated count");
            entry.claim_sets.push_back(std::move(cs));
        }
        if (entry.claim_sets.empty())
            throw std::runtime_error("malformed ledger entry " + entry.id + ": no claims");
        for (const auto& prev : out)
            if (prev.id == entry.id)
                throw std::runtime_error("duplicate ledger entry id: " + entry.id);
        out.push_back(std::move(entry));
    }
    return out;
}

const LedgerEntry& find_entry(const std::vector<LedgerEntry>& entries, const std::string& id) {
    for (const auto& e : entries)
        if (e.id == id) return e;
    throw std::domain_error("no ledger entry with id " + id);
}

// ---------------------------------------------------------------------------
// Condition evaluation

namespace {

bool condition_holds(const std::string& token, const CaseParams& params, const IntEnv& env) {
    auto get = [&](const std::string& name) -> std::optional<long long> {
        auto it = env.find(name);
        if (it == env.end()) return std::nullopt;
        return it->second;
    };
    long long p = params.p;
    if (token == "always") return true;
    if (token == "q_odd") { auto q = get("q"); return q && *q % 2 == 1; }
    if (token == "q_even") { auto q = get("q"); return q && *q % 2 == 0; }
    if (token == "q_mod4_0") { auto q = get("q"); return q && *q % 4 == 0; }
    if (token == "q_mod4_2") { auto q = get("q"); return q && *q % 4 == 2; }
    if (token == "i_eq_1") { auto i = get("i"); return i && *i == 1; }
    if (token == "i_neq_1") { auto i = get("i"); return i && *i != 1; }
    if (token == "i_eq_m1") { auto i = get("i"); return i && *i == p - 1; }
    if (token == "i_neq_m1") { auto i = get("i"); return i && *i != p - 1; }
    if (token == "iq2_eq_1") { auto v = get("iq2"); return v && *v == 1; }
    if (token == "iq2_eq_m1") { auto v = get("iq2"); return v && *v == p - 1; }
    if (token == "iq2_neq_m1") { auto v = get("iq2"); return v && *v != p - 1; }
    if (token == "variant_d") return params.variant == "d";
    if (token == "variant_c") return params.variant == "c";
    if (token == "subcase_a") return params.subcase == "a";
    if (token == "subcase_b") return params.subcase == "b";
    throw std::runtime_error("unknown ledger condition token: " + token);
}

const ClaimSet* select_claim_set(const LedgerEntry& entry, const CaseParams& params,
                                 const IntEnv& env) {
    for (const ClaimSet& cs : entry.claim_sets) {
        bool all = true;
        for (const std::string& token : cs.when)
            if (!condition_holds(token, params, env)) { all = false; break; }
        if (all) return &cs;
    }
    return nullptr;
}

std::string group_brief(const SignedGroup& g, const Subgroup& h, const std::string& family) {
    std::string gens;
    for (int x : h.generators) {
        if (!gens.empty()) gens += ", ";
        gens += g.word(x);
    }
    return "order " + std::to_string(h.order()) + " = " + family + " = <" + gens + ">";
}

} // namespace

int CaseReport::mismatches() const {
    int n = 0;
    for (const auto& c : claims)
        if (!c.match) ++n;
    return n;
}

CaseReport verify_case(const LedgerEntry& entry, const CaseParams& params) {
    CaseReport report;
    report.id = entry.id;
    report.params = params.describe();
    try {
        CaseRealization realization = make_case(entry.id, params);
        SignedGroup g = realize(realization.recipe);
        report.group_order = g.n();

        Table quotient = quotient_by_normal(g, subgroup_generated(g, {g.phi}));
        auto spherical = spherical_family_member(quotient);
        report.quotient_family = spherical ? *spherical : "outside the spherical families";

        std::vector<SymmetryClass> classes = classify_symmetries(g);
        for (const SymmetryClass& cls : classes) {
            ClassSummary summary;
            summary.rep_word = g.word(cls.representative);
            summary.size = static_cast<int>(cls.members.size());
            summary.pair = cls.pair == PairType::Dp ? "Dp" : "C2p";
            summary.n_sigma_order = cls.n_sigma.order();
            summary.n_sigma_family = cls.n_sigma_family;
            summary.n_phi_sigma_order = cls.n_phi_sigma.order();
            summary.n_phi_sigma_family = cls.n_phi_sigma_family;
            report.classes.push_back(std::move(summary));
        }

        const ClaimSet* cs = select_claim_set(entry, params, realization.env);
        if (!cs) {
            report.error = "no claim set covers these parameters";
            return report;
        }

        // claim: number of conjugacy classes of symmetries
        {
            ClaimRecord rec;
            rec.kind = "class_count";
            rec.expected = std::to_string(cs->class_count);
            rec.computed = std::to_string(classes.size());
            rec.match = cs->class_count == static_cast<int>(classes.size());
            if (!rec.match) {
                std::string sizes;
                for (const auto& cls : classes)
                    sizes += (sizes.empty() ? "" : ", ") + g.word(cls.representative) + " (x" +
                             std::to_string(cls.members.size()) + ")";
                rec.witness = "computed classes: " + sizes;
            }
            report.claims.push_back(std::move(rec));
        }

        std::vector<int> class_of_rep(cs->classes.size(), -1);
        for (size_t e = 0; e < cs->classes.size(); ++e) {
            const ExpectedClass& expected = cs->classes[e];
            ClaimRecord rep_rec;
            rep_rec.kind = "representative";
            rep_rec.subject = expected.rep;
            rep_rec.expected = "an anticonformal involution of G";
            int elem = -1;
            try {
                elem = eval_word(g.table, expected.rep, realization.env);
            } catch (const std::exception& ex) {
                rep_rec.computed = std::string("word evaluation failed: ") + ex.what();
            }
            if (elem >= 0) {
                bool inv = elem != g.id() && g.mul(elem, elem) == g.id() && g.w[elem] == -1;
                rep_rec.computed = g.word(elem) + " (order " +
                                   std::to_string(element_order(g, elem)) +
                                   ", w=" + (g.w[elem] == 1 ? "+1" : "-1") + ")";
                rep_rec.match = inv;
                if (inv)
                    for (size_t c = 0; c < classes.size(); ++c)
                        if (std::binary_search(classes[c].members.begin(),
                                               classes[c].members.end(), elem))
                            class_of_rep[e] = static_cast<int>(c);
            }
            if (!rep_rec.match) rep_rec.witness = rep_rec.computed;
            report.claims.push_back(rep_rec);
            if (class_of_rep[e] < 0) continue;
            const SymmetryClass& cls = classes[static_cast<size_t>(class_of_rep[e])];

            if (!expected.pair.empty()) {
                ClaimRecord rec;
                rec.kind = "pair_type";
                rec.subject = expected.rep;
                rec.expected = expected.pair;
                rec.computed = cls.pair == PairType::Dp ? "Dp" : "C2p";
                rec.match = rec.expected == rec.computed;
                if (!rec.match)
                    rec.witness = "sigma = " + g.word(cls.representative) +
                                  ", sigma phi sigma = " +
                                  g.word(g.conj(cls.representative, g.phi));
                report.claims.push_back(std::move(rec));
            }

            ClaimRecord rec;
            rec.kind = "normalizer";
            rec.subject = expected.rep;
            rec.expected = expected.family;
            bool m_sigma = false, m_phi_sigma = false;
            if (expected.family == "G") {
                m_sigma = cls.n_sigma.order() == g.n();
                m_phi_sigma = cls.n_phi_sigma.order() == g.n();
            } else {
                Table t_sigma = subgroup_table(g.table, cls.n_sigma);
                Table t_phi_sigma = subgroup_table(g.table, cls.n_phi_sigma);
                m_sigma = matches_family(t_sigma, expected.family, realization.env);
                m_phi_sigma = matches_family(t_phi_sigma, expected.family, realization.env);
            }
            rec.match = m_sigma || m_phi_sigma;
            rec.via = m_sigma && m_phi_sigma ? "both"
                      : m_sigma              ? "N(<sigma>)"
                      : m_phi_sigma          ? "N(<phi,sigma>)"
                                             : "";
            rec.computed = "N(<sigma>) " + group_brief(g, cls.n_sigma, cls.n_sigma_family) +
                           "; N(<phi,sigma>) " +
                           group_brief(g, cls.n_phi_sigma, cls.n_phi_sigma_family);
            if (!rec.match) rec.witness = rec.computed;
            report.claims.push_back(std::move(rec));
        }

        // claim: the expected representatives cover the computed classes bijectively
        {
            ClaimRecord rec;
            rec.kind = "coverage";
            rec.expected = "each computed class contains exactly one stated representative";
            std::vector<int> hits(classes.size(), 0);
            bool all_resolved = true;
            for (int c : class_of_rep) {
                if (c < 0) all_resolved = false;
                else ++hits[static_cast<size_t>(c)];
            }
            bool bijective = all_resolved;
            std::string issues;
            for (size_t c = 0; c < hits.size(); ++c) {
                if (hits[c] == 1) continue;
                bijective = false;
                issues += (issues.empty() ? "" : "; ") + std::string("class of ") +
                          g.word(classes[c].representative) + " matched " +
                          std::to_string(hits[c]) + " representatives";
            }
            rec.match = bijective;
            rec.computed = bijective ? "bijective" : issues.empty() ? "unresolved representative"
                                                                    : issues;
            if (!rec.match) rec.witness = rec.computed;
            report.claims.push_back(std::move(rec));
        }
    } catch (const std::exception& ex) {
        report.error = ex.what();
    }
    return report;
}

// ---------------------------------------------------------------------------
// Aggregate runs

void VerificationReport::finalize() {
    total_claims = matches = mismatch_count = errors = 0;
    for (const auto& c : cases) {
        if (!c.error.empty()) ++errors;
        for (const auto& claim : c.claims) {
            ++total_claims;
            if (claim.match) ++matches;
            else ++mismatch_count;
        }
    }
}

nlohmann::ordered_json VerificationReport::to_json() const {
    nlohmann::ordered_json j;
    j["cases"] = nlohmann::ordered_json::array();
    for (const auto& c : cases) {
        nlohmann::ordered_json jc;
        jc["id"] = c.id;
        jc["params"] = c.params;
        jc["group_order"] = c.group_order;
        jc["quotient_family"] = c.quotient_family;
        jc["classes"] = nlohmann::ordered_json::array();
        for (const auto& cls : c.classes) {
            nlohmann::ordered_json js;
            js["rep"] = cls.rep_word;
            js["size"] = cls.size;
            js["pair"] = cls.pair;
            js["n_sigma"] = {{"order", cls.n_sigma_order}, {"family", cls.n_sigma_family}};
            js["n_phi_sigma"] = {{"order", cls.n_phi_sigma_order},
                                 {"family", cls.n_phi_sigma_family}};
            jc["classes"].push_back(std::move(js));
        }
        jc["claims"] = nlohmann::ordered_json::array();
        for (const auto& claim : c.claims) {
            nlohmann::ordered_json jr;
            jr["kind"] = claim.kind;
            if (!claim.subject.empty()) jr["subject"] = claim.subject;
            jr["expected"] = claim.expected;
            jr["computed"] = claim.computed;
            jr["status"] = claim.match ? "MATCH" : "MISMATCH";
            if (!claim.via.empty()) jr["via"] = claim.via;
            if (!claim.witness.empty()) jr["witness"] = claim.witness;
            jc["claims"].push_back(std::move(jr));
        }
        if (!c.error.empty()) jc["error"] = c.error;
        j["cases"].push_back(std::move(jc));
    }
    j["summary"] = {{"cases", cases.size()},
                    {"claims", total_claims},
                    {"matches", matches},
                    {"mismatches", mismatch_count},
                    {"errors", errors}};
    return j;
}

std::string VerificationReport::render_text() const {
    std::ostringstream os;
    for (const auto& c : cases) {
        os << c.id << " [" << c.params << "] |G|=" << c.group_order;
        if (!c.error.empty()) {
            os << " ERROR: " << c.error << "\n";
            continue;
        }
        os << " G/<phi>=" << c.quotient_family << "\n";
        for (const auto& claim : c.claims) {
            os << "  " << (claim.match ? "MATCH   " : "MISMATCH") << " " << claim.kind;
            if (!claim.subject.empty()) os << " [" << claim.subject << "]";
            os << ": expected " << claim.expected;
            if (!claim.via.empty()) os << " (via " << claim.via << ")";
            if (!claim.match) os << "; computed " << claim.computed;
            os << "\n";
        }
    }
    os << "summary: " << cases.size() << " case runs, " << total_claims << " claims, "
       << matches << " matches, " << mismatch_count << " mismatches, " << errors
       << " errors\n";
    return os.str();
}

VerificationReport verify_all(const std::vector<LedgerEntry>& entries,
                              const VerifyBudget& budget) {
    std::vector<std::pair<const LedgerEntry*, CaseParams>> work;
    for (const LedgerEntry& entry : entries)
        for (const CaseParams& params : enumerate_case_params(entry.id, budget.ps, budget.q_max))
            work.push_back({&entry, params});

    VerificationReport report;
    report.cases = parallel_map<std::pair<const LedgerEntry*, CaseParams>, CaseReport>(
        work,
        [](const std::pair<const LedgerEntry*, CaseParams>& item) {
            return verify_case(*item.first, item.second);
        },
        budget.jobs);
    report.finalize();
    return report;
}

} // namespace pgonal

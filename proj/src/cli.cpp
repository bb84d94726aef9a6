#include "pgonal/cli.hpp"

#include "pgonal/classifier.hpp"
#include "pgonal/epi.hpp"
#include "pgonal/family.hpp"
#include "pgonal/recipe.hpp"
#include "pgonal/signature.hpp"
#include "pgonal/species.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

namespace pgonal {

namespace {

struct CliState {
    bool json = false;
    int jobs = 1;
    std::string ledger_path;

    // group selection
    std::string group_spec;
    CaseParams params;
    std::optional<int> opt_q, opt_i, opt_j, opt_k, opt_rho;
    std::string opt_variant, opt_subcase;

    void collect_params() {
        params.q = opt_q;
        params.i = opt_i;
        params.j = opt_j;
        params.k = opt_k;
        params.rho = opt_rho;
        params.variant = opt_variant;
        params.subcase = opt_subcase;
    }
};

void add_param_flags(CLI::App* cmd, CliState& st) {
    cmd->add_option("--p", st.params.p, "parameter p (odd prime)");
    cmd->add_option("--q", st.opt_q, "parameter q");
    cmd->add_option("--i", st.opt_i, "action exponent i");
    cmd->add_option("--j", st.opt_j, "twist parameter j");
    cmd->add_option("--k", st.opt_k, "twist parameter k");
    cmd->add_option("--rho", st.opt_rho, "reflection action on phi (+1 or -1)");
    cmd->add_option("--variant", st.opt_variant, "case variant (d or c)");
    cmd->add_option("--subcase", st.opt_subcase, "case subcase (a or b)");
}

struct NamedGroup {
    std::shared_ptr<SignedGroup> group;
    std::string name;
    IntEnv env;
};

NamedGroup resolve_group(CliState& st) {
    st.collect_params();
    const std::string& spec = st.group_spec;
    NamedGroup out;
    if (spec.rfind("dp:", 0) == 0) {
        int p = std::stoi(spec.substr(3));
        out.group = std::make_shared<SignedGroup>(dihedral_target(p));
        out.name = "D_" + std::to_string(p);
        return out;
    }
    if (spec.rfind("c2p:", 0) == 0) {
        int p = std::stoi(spec.substr(4));
        out.group = std::make_shared<SignedGroup>(cyclic_target(p));
        out.name = "C_" + std::to_string(2 * p);
        return out;
    }
    if (spec.rfind("case:", 0) == 0) {
        std::string id = spec.substr(5);
        CaseRealization realization = make_case(id, st.params);
        out.group = std::make_shared<SignedGroup>(realize(realization.recipe));
        out.name = "case " + id + " (" + st.params.describe() + ")";
        out.env = realization.env;
        return out;
    }
    nlohmann::json j;
    if (!spec.empty() && spec.front() == '{') {
        j = nlohmann::json::parse(spec);
        out.name = "inline recipe";
    } else {
        std::string path = spec;
        if (!path.empty() && path.front() == '@') path = path.substr(1);
        std::ifstream in(path);
        if (!in) throw std::domain_error("cannot open recipe file: " + path);
        in >> j;
        out.name = path;
    }
    out.group = std::make_shared<SignedGroup>(realize(recipe_from_json(j)));
    return out;
}

std::string sign_str(PairType p) { return p == PairType::Dp ? "Dp" : "C2p"; }

} // namespace

CliResult run_cli(const std::vector<std::string>& args) {
    CliResult result;
    std::ostringstream out;
    CliState st;

    CLI::App app{"symmetries and automorphism groups of real cyclic p-gonal surfaces"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_flag("--json", st.json, "emit JSON instead of plain text");
    app.add_option("--jobs", st.jobs, "worker threads for sweeps")->default_val(1);
    app.add_option("--ledger", st.ledger_path, "override the bundled ledger file");

    // area SIG
    std::string sig_text;
    CLI::App* area_cmd = app.add_subcommand("area", "normalised hyperbolic area of a signature");
    area_cmd->add_option("signature", sig_text, "signature, e.g. \"(0,+,[3,3],{(3,3,3,3)})\"")
        ->required();

    // signatures --p --genus
    long long genus = 0;
    CLI::App* sigs_cmd =
        app.add_subcommand("signatures", "admissible signatures for a real cyclic p-gonal action");
    sigs_cmd->add_option("--p", st.params.p, "odd prime p")->required();
    sigs_cmd->add_option("--genus", genus, "surface genus")->required();

    // enumerate SIG --group
    CLI::App* enum_cmd =
        app.add_subcommand("enumerate", "all surface-kernel epimorphisms onto a group");
    enum_cmd->add_option("signature", sig_text, "NEC signature")->required();
    enum_cmd->add_option("--group", st.group_spec,
                         "target: dp:P, c2p:P, case:ID, @recipe.json or inline JSON")
        ->required();
    add_param_flags(enum_cmd, st);

    // species --construction ...
    std::string construction, target_letter = "d", connector = "1";
    CLI::App* species_cmd = app.add_subcommand("species", "species of an explicit construction");
    species_cmd->add_option("--construction", construction, "theta1, theta2 or theta3")
        ->required();
    species_cmd->add_option("--p", st.params.p, "odd prime p")->required();
    species_cmd->add_option("--genus", genus, "surface genus")->required();
    species_cmd->add_option("--target", target_letter, "theta3 target: d (D_p) or c (C_2p)");
    species_cmd->add_option("--connector", connector, "theta3 connector image word");

    // classify --group
    CLI::App* classify_cmd =
        app.add_subcommand("classify", "conjugacy classes of symmetries and their normalizers");
    classify_cmd->add_option("--group", st.group_spec, "group to classify")->required();
    add_param_flags(classify_cmd, st);

    // verify --case ID
    std::string case_id;
    CLI::App* verify_cmd = app.add_subcommand("verify", "verify one ledger case");
    verify_cmd->add_option("--case", case_id, "ledger entry id")->required();
    add_param_flags(verify_cmd, st);

    // verify-all
    std::vector<int> budget_ps{3, 5};
    int q_max = 6;
    CLI::App* verify_all_cmd = app.add_subcommand("verify-all", "verify the whole ledger");
    verify_all_cmd->add_option("--budget-p", budget_ps, "p values for parametric families");
    verify_all_cmd->add_option("--q-max", q_max, "largest q");

    // theorem2
    CLI::App* thm2_cmd =
        app.add_subcommand("theorem2", "exhaustive species sweep for one (p, genus)");
    thm2_cmd->add_option("--p", st.params.p, "odd prime p")->required();
    thm2_cmd->add_option("--genus", genus, "surface genus")->required();

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg;
        if (e.get_exit_code() == 0) {
            // --help
            result.out = app.help();
            return result;
        }
        result.err = std::string(e.what()) + "\n";
        result.exit_code = 2;
        return result;
    }

    try {
        if (*area_cmd) {
            NecSignature sig = parse_signature(sig_text);
            ExactArea a = area(sig);
            if (st.json) {
                nlohmann::ordered_json j;
                j["signature"] = format_signature(sig);
                j["area_over_2pi"] = a.value.str();
                out << j.dump(2) << "\n";
            } else {
                out << a.value.str() << " * 2π\n";
            }
        } else if (*sigs_cmd) {
            auto tagged = real_cyclic_signatures(st.params.p, genus);
            nlohmann::ordered_json j = nlohmann::ordered_json::array();
            for (const auto& ts : tagged) {
                std::string targets = ts.tag == TargetFamily::DpOrC2p ? "D_p|C_2p" : "C_2p";
                if (st.json) {
                    j.push_back({{"signature", format_signature(ts.sig)}, {"targets", targets}});
                } else {
                    out << format_signature(ts.sig) << "  targets: " << targets << "\n";
                }
            }
            if (st.json) out << j.dump(2) << "\n";
        } else if (*enum_cmd) {
            NamedGroup target = resolve_group(st);
            NecSignature sig = parse_signature(sig_text);
            EnumOptions options;
            options.jobs = st.jobs;
            auto epis = enumerate_surface_kernel_epis(sig, target.group, options);
            if (st.json) {
                nlohmann::ordered_json j = nlohmann::ordered_json::array();
                for (const auto& epi : epis) j.push_back(epi_to_json(epi, target.name));
                out << j.dump(2) << "\n";
            } else {
                out << epis.size() << " epimorphisms from " << format_signature(sig) << " onto "
                    << target.name << "\n";
                for (size_t i = 0; i < epis.size(); ++i) {
                    out << "  #" << i << ":";
                    for (size_t gidx = 0; gidx < epis[i].pres->generators.size(); ++gidx)
                        out << " " << epis[i].pres->generators[gidx].name() << "->"
                            << target.group->word(epis[i].images[gidx]);
                    out << "\n";
                }
            }
        } else if (*species_cmd) {
            SurfaceKernelEpi epi;
            if (construction == "theta1") epi = theta1(st.params.p, genus);
            else if (construction == "theta2") epi = theta2(st.params.p, genus);
            else if (construction == "theta3")
                epi = theta3(st.params.p, genus,
                             target_letter == "c" ? ThetaTarget::C2p : ThetaTarget::Dp, connector);
            else throw std::domain_error("unknown construction: " + construction);
            SpeciesResult sp = species(epi, epi.target->table.named_element("s"));
            if (st.json) {
                nlohmann::ordered_json j;
                j["construction"] = construction;
                j["p"] = st.params.p;
                j["genus"] = genus;
                j["signature"] = format_signature(epi.sig);
                j["species"] = sp.str();
                j["kernel_genus"] = kernel_genus(epi);
                out << j.dump(2) << "\n";
            } else {
                out << sp.str() << "\n";
            }
        } else if (*classify_cmd) {
            NamedGroup target = resolve_group(st);
            const SignedGroup& g = *target.group;
            auto classes = classify_symmetries(g);
            if (st.json) {
                nlohmann::ordered_json j;
                j["group"] = target.name;
                j["order"] = g.n();
                j["classes"] = nlohmann::ordered_json::array();
                for (const auto& cls : classes) {
                    nlohmann::ordered_json jc;
                    jc["rep"] = g.word(cls.representative);
                    jc["size"] = cls.members.size();
                    jc["pair"] = sign_str(cls.pair);
                    jc["n_sigma"] = {{"order", cls.n_sigma.order()},
                                     {"family", cls.n_sigma_family}};
                    jc["n_phi_sigma"] = {{"order", cls.n_phi_sigma.order()},
                                         {"family", cls.n_phi_sigma_family}};
                    j["classes"].push_back(std::move(jc));
                }
                out << j.dump(2) << "\n";
            } else {
                out << target.name << ": order " << g.n() << ", " << classes.size()
                    << " classes of symmetries\n";
                for (const auto& cls : classes)
                    out << "  rep " << g.word(cls.representative) << "  size "
                        << cls.members.size() << "  pair " << sign_str(cls.pair)
                        << "  N(<sigma>) order " << cls.n_sigma.order() << " ("
                        << cls.n_sigma_family << ")  N(<phi,sigma>) order "
                        << cls.n_phi_sigma.order() << " (" << cls.n_phi_sigma_family << ")\n";
            }
        } else if (*verify_cmd) {
            st.collect_params();
            auto entries = ledger_entries(st.ledger_path);
            const LedgerEntry& entry = find_entry(entries, case_id);
            CaseReport report = verify_case(entry, st.params);
            VerificationReport full;
            full.cases.push_back(report);
            full.finalize();
            if (st.json) out << full.to_json().dump(2) << "\n";
            else out << full.render_text();
            if (!report.error.empty()) result.exit_code = 1;
            else if (report.mismatches() > 0) result.exit_code = 3;
        } else if (*verify_all_cmd) {
            auto entries = ledger_entries(st.ledger_path);
            VerifyBudget budget;
            budget.ps = budget_ps;
            budget.q_max = q_max;
            budget.jobs = st.jobs;
            VerificationReport report = verify_all(entries, budget);
            if (st.json) out << report.to_json().dump(2) << "\n";
            else out << report.render_text();
            if (report.errors > 0) result.exit_code = 1;
            else if (report.mismatch_count > 0) result.exit_code = 3;
        } else if (*thm2_cmd) {
            EnumOptions options;
            options.jobs = st.jobs;
            SweepReport report = verify_theorem2(st.params.p, genus, options);
            if (st.json) out << report.to_json().dump(2) << "\n";
            else out << report.render_text();
            if (!report.findings.empty()) result.exit_code = 3;
        }
    } catch (const std::exception& ex) {
        result.err = std::string("error: ") + ex.what() + "\n";
        result.exit_code = 1;
        result.out = out.str();
        return result;
    }
    result.out = out.str();
    return result;
}

} // namespace pgonal

// Command line front end: load a scenario (builtin name or file), build the
// diagrams and run the checks, or print individual invariants.
//
// Exit codes: 0 everything verified, 1 a check failed, 2 bad input.

#include <CLI11.hpp>

#include <lowterm/diagrams.hpp>
#include <lowterm/scenario.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace lowterm;

Scenario load_scenario(const std::string& ref) {
    if (std::optional<Scenario> b = builtin_scenario(ref)) return std::move(*b);
    std::ifstream in(ref);
    if (!in) throw std::runtime_error("cannot open scenario '" + ref + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string vec_str(const IntVec& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += v[i].str();
    }
    return s + "]";
}

void print_checks(const VerificationReport& rep) {
    long pass = 0, review = 0, fail = 0;
    for (const CheckResult& c : rep.checks) {
        if (c.status == "pass")
            ++pass;
        else if (c.status == "review")
            ++review;
        else
            ++fail;
    }
    std::cout << "checks: " << rep.checks.size() << "  pass: " << pass << "  review: " << review
              << "  fail: " << fail << "\n";
    for (const CheckResult& c : rep.checks)
        if (c.status != "pass")
            std::cout << "  " << c.status << " " << c.kind << " at " << c.pos
                      << (c.note.empty() ? "" : "  (" + c.note + ")") << "\n";
}

int cmd_verify(const std::string& ref, bool with_variants, const std::string& json_path) {
    ScenarioEngine e(load_scenario(ref));
    Diagram d = build_main_diagram(e);
    VerificationReport rep = verify(d);
    append_chase_checks(rep, d);
    std::cout << render_grid(d) << "\n";
    print_checks(rep);
    bool ok = rep.pass;
    if (with_variants) {
        std::vector<std::pair<std::string, VariantData>> vs;
        vs.emplace_back("identity", e.variant_identity());
        vs.emplace_back("canonical", e.variant_canonical());
        vs.emplace_back("zero", e.variant_zero());
        for (auto& [nm, v] : vs) {
            Diagram vd = build_variant_diagram(e, v);
            VerificationReport vr = verify(vd);
            std::cout << "variant " << nm << ": " << (vr.pass ? "pass" : "FAIL") << " ("
                      << vr.checks.size() << " checks)\n";
            if (!vr.pass) ok = false;
        }
    }
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) throw std::runtime_error("cannot write '" + json_path + "'");
        out << report_json(rep).dump(2) << "\n";
        std::cout << "report written to " << json_path << "\n";
    }
    std::cout << (ok ? "PASS " : "FAIL ") << rep.scenario << "\n";
    return ok ? 0 : 1;
}

int cmd_chase(const std::string& ref, const std::string& position, bool enum_all) {
    ScenarioEngine e(load_scenario(ref));
    Diagram d = build_main_diagram(e);
    const ChaseRoute& r = d.route(position);
    if (enum_all) {
        ChaseSummary s = enumerate_route(d, r);
        std::cout << "route " << r.name << ": " << s.pairs << " compatible pairs, " << s.successes
                  << " chased, " << s.failures << " failed\n";
        return s.failures == 0 ? 0 : 1;
    }
    const FgAbMorphism& brow = d.arrow(r.beta_row);
    const FgAbMorphism& gcol = d.arrow(r.gamma_col);
    ChaseCertificate c = chase_along(d, r, IntVec(brow.src->ambient_rank(), Int(0)),
                                     IntVec(gcol.src->ambient_rank(), Int(0)));
    std::cout << "route " << r.name << " through " << r.meet_at << " (sign " << r.sign << ")\n"
              << "  beta  at " << r.beta_at << ": " << vec_str(c.beta) << "\n"
              << "  gamma at " << r.gamma_at << ": " << vec_str(c.gamma) << "\n"
              << "  alpha at " << r.alpha_at << ": " << vec_str(c.alpha) << "\n";
    bool ok = validate_certificate(d, c);
    std::cout << (ok ? "certificate valid" : "certificate INVALID") << "\n";
    ChaseSummary s = sample_route(d, r, 32, 0x10573);
    std::cout << "sampled: " << s.pairs << " compatible pairs, " << s.failures << " failures\n";
    return ok && s.failures == 0 ? 0 : 1;
}

int cmd_cohomology(const std::string& ref, long degree) {
    Scenario s = load_scenario(ref);
    CohomologyCache cache;
    std::vector<CohomPtr> hs = group_cohomology(s.g, s.m, degree, cache);
    for (long i = 0; i <= degree && i < static_cast<long>(hs.size()); ++i)
        std::cout << "H^" << i << "(" << s.g->name() << ", M) = " << hs[i]->group()->shape().str()
                  << "\n";
    return 0;
}

int cmd_ext(const std::string& ref, int t, long maxi) {
    ScenarioEngine e(load_scenario(ref));
    std::vector<CohomPtr> ex = e.ext_over_group(t, maxi);
    std::cout << "ext groups over the integral group ring, coefficient t = " << t << "\n";
    for (long i = 0; i < static_cast<long>(ex.size()); ++i)
        std::cout << "Ext^" << i << " = " << ex[i]->group()->shape().str() << "\n";
    return 0;
}

int cmd_lowterm(const std::string& ref, int t) {
    ScenarioEngine e(load_scenario(ref));
    LowTermData lt = e.low_term_sequence(t);
    const char* labels[7] = {"E2(1,0)", "E1    ", "E2(0,1)", "E2(2,0)", "E1^2  ", "E2(1,1)",
                             "E2(3,0)"};
    std::cout << "low-term sequence, t = " << t << ", exact starting from 0\n";
    for (size_t i = 0; i < lt.nodes.size(); ++i)
        std::cout << "  " << labels[i] << " = " << lt.nodes[i]->group()->shape().str() << "\n";
    return 0;
}

int cmd_report(const std::string& ref, const std::string& json_path) {
    ScenarioEngine e(load_scenario(ref));
    Diagram d = build_main_diagram(e);
    VerificationReport rep = verify(d);
    append_chase_checks(rep, d);
    nlohmann::ordered_json j = report_json(rep);
    if (json_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(json_path);
        if (!out) throw std::runtime_error("cannot write '" + json_path + "'");
        out << j.dump(2) << "\n";
        std::cout << "report written to " << json_path << "\n";
    }
    return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"builds and verifies low-term exact sequence diagrams for group extensions"};
    app.require_subcommand(1);

    std::string ref, json_path, position = "left";
    bool with_variants = false, enum_all = false;
    int t = 1;
    long degree = 2, maxi = 2;

    CLI::App* verify_cmd = app.add_subcommand("verify", "build the main diagram and run every check");
    verify_cmd->add_option("scenario", ref, "scenario file or builtin name")->required();
    verify_cmd->add_flag("--variant", with_variants, "also verify the three mapping-cone variants");
    verify_cmd->add_option("--json", json_path, "write the report as JSON to this path");

    CLI::App* chase_cmd =
        app.add_subcommand("chase", "produce and validate a diagram chase certificate");
    chase_cmd->add_option("scenario", ref, "scenario file or builtin name")->required();
    chase_cmd->add_option("--position", position, "left or right")
        ->check(CLI::IsMember({"left", "right"}));
    chase_cmd->add_flag("--enumerate", enum_all, "chase every compatible input pair");

    CLI::App* coh_cmd = app.add_subcommand("cohomology", "group cohomology of the scenario module");
    coh_cmd->add_option("scenario", ref, "scenario file or builtin name")->required();
    coh_cmd->add_option("--degree", degree, "highest degree to print")->check(CLI::Range(0l, 6l));

    CLI::App* ext_cmd = app.add_subcommand("ext", "ext groups of one coefficient in the module");
    ext_cmd->add_option("scenario", ref, "scenario file or builtin name")->required();
    ext_cmd->add_option("--t", t, "coefficient index (1, 2 or 3)")->check(CLI::Range(1, 3));
    ext_cmd->add_option("--max", maxi, "highest degree")->check(CLI::Range(0l, 6l));

    CLI::App* low_cmd = app.add_subcommand("lowterm", "the seven-term exact sequence");
    low_cmd->add_option("scenario", ref, "scenario file or builtin name")->required();
    low_cmd->add_option("--t", t, "coefficient index (1, 2 or 3)")->check(CLI::Range(1, 3));

    CLI::App* rep_cmd = app.add_subcommand("report", "full verification report as JSON");
    rep_cmd->add_option("scenario", ref, "scenario file or builtin name")->required();
    rep_cmd->add_option("--json", json_path, "write to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*verify_cmd) return cmd_verify(ref, with_variants, json_path);
        if (*chase_cmd) return cmd_chase(ref, position, enum_all);
        if (*coh_cmd) return cmd_cohomology(ref, degree);
        if (*ext_cmd) return cmd_ext(ref, t, maxi);
        if (*low_cmd) return cmd_lowterm(ref, t);
        if (*rep_cmd) return cmd_report(ref, json_path);
    } catch (const lowterm::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const lowterm::SemanticError& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return 2;
    } catch (const lowterm::InfiniteNode& e) {
        std::cerr << "cannot enumerate: node " << e.pos << " is infinite\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

#include <catch_amalgamated.hpp>

#include "lowterm/diagrams.hpp"

using namespace lowterm;

namespace {

Scenario coinduced_scenario() {
    Scenario s;
    s.name = "coinduced";
    s.g = cyclic_group(2);
    s.n = subgroup_from_elements(s.g, {0});
    s.m = trivial_module(s.g, cyclic_fgab(2));
    s.max_degree = 4;
    return s;
}

Scenario nonsplit_cyclic_scenario() {
    Scenario s;
    s.name = "nonsplit-cyclic";
    s.g = cyclic_group(4);
    s.n = subgroup_from_elements(s.g, {0, 2});
    s.m = trivial_module(s.g, cyclic_fgab(2));
    s.cocycle = {IntVec{Int(0)}, IntVec{Int(1)}};
    s.max_degree = 4;
    return s;
}

Scenario split_cyclic_scenario() {
    Scenario s = nonsplit_cyclic_scenario();
    s.name = "split-cyclic";
    s.cocycle.clear();
    return s;
}

Scenario ternary_scenario() {
    Scenario s;
    s.name = "ternary";
    s.g = cyclic_group(9);
    s.n = subgroup_from_elements(s.g, {0, 3, 6});
    s.m = trivial_module(s.g, cyclic_fgab(3));
    s.cocycle = {IntVec{Int(0)}, IntVec{Int(1)}, IntVec{Int(2)}};
    s.max_degree = 3;
    return s;
}

long count_kind(const VerificationReport& r, const std::string& kind, const std::string& status = "") {
    long n = 0;
    for (const CheckResult& c : r.checks)
        if (c.kind == kind && (status.empty() || c.status == status)) ++n;
    return n;
}

const CheckResult& check_at(const VerificationReport& r, const std::string& kind, const std::string& pos) {
    for (const CheckResult& c : r.checks)
        if (c.kind == kind && c.pos == pos) return c;
    throw std::runtime_error("no such check");
}

}  // namespace

TEST_CASE("main diagram shares its boundary nodes and arrows literally") {
    ScenarioEngine e(nonsplit_cyclic_scenario());
    Diagram d = build_main_diagram(e);

    CHECK(d.nodes.size() == 25);
    CHECK(d.arrows.size() == 35);
    CHECK(d.paths.size() == 10);
    CHECK(d.squares.size() == 12);
    CHECK(d.chases.size() == 2);

    // the fourth row continues the first: same group objects, not copies
    CHECK(d.node_at("r4c1").group.get() == d.node_at("r1c4").group.get());
    CHECK(d.node_at("r4c2").group.get() == d.node_at("r1c5").group.get());
    CHECK(d.node_at("a1").group.get() == d.node_at("r4c2").group.get());
    CHECK(d.node_at("a4").group.get() == d.node_at("r4c5").group.get());
    CHECK(d.arrow("r1c4", "r1c5").eq(d.arrow("r4c1", "r4c2")));

    for (const DiagramNode& n : d.nodes) CHECK(n.group->shape().free_rank == 0);

    std::string grid = render_grid(d);
    CHECK(grid.find("r4") != std::string::npos);
    CHECK(grid.find("e3") != std::string::npos);
}

TEST_CASE("verification passes on the builtin-style scenarios") {
    for (auto make : {coinduced_scenario, nonsplit_cyclic_scenario, split_cyclic_scenario}) {
        ScenarioEngine e(make());
        Diagram d = build_main_diagram(e);
        VerificationReport r = verify(d);
        INFO(r.scenario);
        CHECK(r.pass);
        CHECK(r.checks.size() == 41);
        CHECK(count_kind(r, "exactness") == 29);
        CHECK(count_kind(r, "square") == 12);
        CHECK(count_kind(r, "exactness", "pass") == 29);
        CHECK(count_kind(r, "square", "pass") == 12);
        CHECK(r.nodes.size() == 25);
    }
}

TEST_CASE("split extension kills the vertical connecting arrows") {
    ScenarioEngine e(split_cyclic_scenario());
    Diagram d = build_main_diagram(e);
    for (int j = 1; j <= 5; ++j) {
        std::string top = "r3c" + std::to_string(j);
        std::string bot = "r4c" + std::to_string(j);
        CHECK(d.arrow(top, bot).is_zero_morphism());
    }
}

TEST_CASE("reports are deterministic and serialize to fixed fields") {
    ScenarioEngine e1(nonsplit_cyclic_scenario());
    ScenarioEngine e2(nonsplit_cyclic_scenario());
    VerificationReport r1 = verify(build_main_diagram(e1));
    VerificationReport r2 = verify(build_main_diagram(e2));
    std::string s1 = report_json(r1).dump(2);
    std::string s2 = report_json(r2).dump(2);
    CHECK(s1 == s2);

    nlohmann::ordered_json j = report_json(r1);
    auto it = j.begin();
    CHECK(it.key() == "scenario");
    CHECK((++it).key() == "nodes");
    CHECK((++it).key() == "checks");
    CHECK((++it).key() == "pass");
    CHECK(j["nodes"][0]["pos"] == "r1c1");
    CHECK(j["checks"][0]["kind"] == "exactness");
    CHECK(j["pass"] == true);

    // timings are recorded in memory but never serialized
    CHECK(s1.find("micros") == std::string::npos);
    CHECK(r1.total_micros > 0);
}

TEST_CASE("odd-order scenario pins the recorded square signs") {
    ScenarioEngine e(ternary_scenario());
    Diagram d = build_main_diagram(e);
    CHECK(d.nodes.size() == 20);
    CHECK(d.paths.size() == 9);

    VerificationReport r = verify(d);
    CHECK(r.pass);
    CHECK(count_kind(r, "exactness") == 25);
    CHECK(count_kind(r, "square") == 12);

    // the connecting-connecting corner anticommutes with a definite sign, so
    // its composite is nonzero and the observed sign is forced
    const CheckResult& corner = check_at(r, "square", "r3c3");
    CHECK(corner.status == "pass");
    CHECK(corner.sign == -1);
    CHECK_FALSE(d.arrow("r3c3", "r4c3").then(d.arrow("r4c3", "r4c4")).is_zero_morphism());
    for (const CheckResult& c : r.checks)
        if (c.kind == "square" && c.pos != "r3c3") CHECK(c.sign == 1);
}

TEST_CASE("chase certificates cover every compatible pair") {
    ScenarioEngine e(nonsplit_cyclic_scenario());
    Diagram d = build_main_diagram(e);

    ChaseSummary s = enumerate_chases(d);
    CHECK(s.pairs > 0);
    CHECK(s.failures == 0);
    CHECK(s.successes == s.pairs);

    for (const char* name : {"left", "right"}) {
        const ChaseRoute& r = d.route(name);
        CHECK(r.sign == -1);
        ChaseSummary one = enumerate_route(d, r);
        CHECK(one.pairs > 0);
        CHECK(one.failures == 0);
    }

    // the zero pair chases to witnesses that all vanish
    const ChaseRoute& left = d.route("left");
    IntVec zb(d.arrow(left.beta_row).src->ambient_rank());
    IntVec zg(d.arrow(left.gamma_col).src->ambient_rank());
    ChaseCertificate c = chase_left(d, zb, zg);
    CHECK(c.valid());
    CHECK(validate_certificate(d, c));
    CHECK(d.node_at(left.meet_at).group->contains_zero(c.witness_meet));
    CHECK(d.node_at(left.row_at).group->contains_zero(c.witness_row));
    CHECK(d.node_at(left.col_at).group->contains_zero(c.witness_col));

    // tampering with a stored witness is caught by substitution
    const GroupPtr& meet = d.node_at(left.meet_at).group;
    for (long i = 0; i < meet->ambient_rank(); ++i) {
        IntVec bumped = c.witness_meet;
        bumped[i] += 1;
        if (meet->eq(bumped, c.witness_meet)) continue;
        ChaseCertificate bad = c;
        bad.witness_meet = bumped;
        CHECK_FALSE(validate_certificate(d, bad));
        break;
    }
}

TEST_CASE("incompatible chase inputs are refused") {
    bool found = false;
    for (auto make : {nonsplit_cyclic_scenario, ternary_scenario}) {
        ScenarioEngine e(make());
        Diagram d = build_main_diagram(e);
        for (const ChaseRoute& r : d.chases) {
            const FgAbMorphism& brow = d.arrow(r.beta_row);
            const FgAbMorphism& gcol = d.arrow(r.gamma_col);
            for (const IntVec& b : brow.src->enumerate_elements()) {
                for (const IntVec& g : gcol.src->enumerate_elements()) {
                    if (brow.tgt->eq(brow.apply(b), gcol.apply(g))) continue;
                    CHECK_THROWS_AS(chase_along(d, r, b, g), CompatibilityError);
                    found = true;
                }
            }
        }
    }
    CHECK(found);
}

TEST_CASE("corrupting any arrow entry breaks verification") {
    ScenarioEngine e(nonsplit_cyclic_scenario());
    Diagram base = build_main_diagram(e);
    REQUIRE(verify(base).pass);

    // bump one entry sitting on a live target row and a live source column, so
    // the arrow changes as a morphism and not just as a representative matrix
    auto live = [](const GroupPtr& g, long n) {
        for (long i = 0; i < n; ++i) {
            IntVec unit(n, Int(0));
            unit[i] = 1;
            if (!g->contains_zero(unit)) return i;
        }
        return long(-1);
    };
    long corrupted = 0;
    for (size_t k = 0; k < base.arrows.size(); ++k) {
        const FgAbMorphism& m = base.arrows[k].map;
        long row = live(m.tgt, m.mat.rows);
        long col = live(m.src, m.mat.cols);
        if (row < 0 || col < 0) continue;  // nothing visible to bump
        Diagram mutated = base;
        mutated.arrows[k].map.mat(row, col) += 1;
        INFO(base.arrows[k].from << " -> " << base.arrows[k].to);
        CHECK_FALSE(verify(mutated).pass);
        ++corrupted;
    }
    CHECK(corrupted > 0);
}

TEST_CASE("cone variant diagrams") {
    ScenarioEngine e(nonsplit_cyclic_scenario());
    Diagram main = build_main_diagram(e);

    SECTION("identity window: the cone column vanishes") {
        Diagram d = build_variant_diagram(e, e.variant_identity());
        CHECK(d.nodes.size() == 20);
        for (const char* pos : {"r1c3", "r2c3", "r3c3", "r4c3"}) CHECK(d.node_at(pos).group->is_trivial());
        VerificationReport r = verify(d);
        CHECK(r.pass);
        CHECK(count_kind(r, "exactness") == 22);
        CHECK(count_kind(r, "square") == 12);
    }

    SECTION("canonical window: same shapes as the main grid, node by node") {
        Diagram d = build_variant_diagram(e, e.variant_canonical());
        for (int t = 1; t <= 4; ++t)
            for (int j = 1; j <= 5; ++j) {
                std::string pos = "r" + std::to_string(t) + "c" + std::to_string(j);
                CHECK(shapes_equal(d.node_at(pos).group, main.node_at(pos).group));
            }
        CHECK(verify(d).pass);
        ChaseSummary s = enumerate_chases(d);
        CHECK(s.pairs > 0);
        CHECK(s.failures == 0);
    }

    SECTION("zero window: the cone column carries the full window terms") {
        Diagram d = build_variant_diagram(e, e.variant_zero());
        for (int t = 1; t <= 3; ++t) {
            std::string rt = "r" + std::to_string(t);
            CHECK(d.node_at(rt + "c1").group->is_trivial());
            CHECK(shapes_equal(d.node_at(rt + "c3").group, main.node_at(rt + "c2").group));
        }
        CHECK(shapes_equal(d.node_at("r4c3").group, main.node_at("r4c2").group));
        CHECK(verify(d).pass);
    }
}

TEST_CASE("free window terms surface as infinite chase endpoints") {
    ScenarioEngine e(nonsplit_cyclic_scenario());
    ComplexPtr b = stalk_complex(e.quotient().q, trivial_module(e.quotient().q, free_group(1)), 2);
    Diagram d = build_variant_diagram(e, e.make_variant(b, {}, 0));

    CHECK(d.node_at("r4c1").group->shape().free_rank == 1);
    CHECK(verify(d).pass);

    try {
        enumerate_chases(d);
        FAIL("enumeration over an infinite node must throw");
    } catch (const InfiniteNode& ex) {
        CHECK(ex.pos == "r2c3");
    }

    ChaseSummary s = sample_chases(d, 8, 20260822);
    CHECK(s.pairs >= 2);
    CHECK(s.failures == 0);
}

TEST_CASE("report checks appended by chases stay ordered") {
    ScenarioEngine e(nonsplit_cyclic_scenario());
    Diagram d = build_main_diagram(e);
    VerificationReport r = verify(d);
    append_chase_checks(r, d);
    CHECK(r.pass);
    CHECK(r.checks.size() == 43);
    CHECK(r.checks[41].kind == "chase");
    CHECK(r.checks[41].pos == "left");
    CHECK(r.checks[42].pos == "right");
    CHECK(check_at(r, "chase", "left").sign == -1);
    CHECK(check_at(r, "chase", "left").note.find("pairs") != std::string::npos);
}

TEST_CASE("diagram from a bare scenario outlives its engine") {
    Diagram d = build_main_diagram(coinduced_scenario());
    CHECK(d.nodes.size() == 25);
    CHECK(verify(d).pass);
    CHECK(enumerate_chases(d).failures == 0);
}

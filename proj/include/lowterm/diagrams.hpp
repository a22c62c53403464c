#pragma once

// Diagram assembly and verification.  A diagram is a self-contained table of
// finitely generated abelian groups and integer morphisms indexed by grid
// positions, together with the exactness paths, commutativity squares and
// zig-zag chase routes the verifier evaluates.  Groups and matrices are shared
// out of the engine caches, so a diagram stays usable after its engine is gone.

#include <lowterm/spectral.hpp>

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

namespace lowterm {

// chase inputs whose images in the shared node disagree
struct CompatibilityError : std::runtime_error {
    explicit CompatibilityError(const std::string& at)
        : std::runtime_error("chase inputs disagree at " + at) {}
};

// the stacked chase system has no solution; on a verified diagram this is a
// defect, never a legitimate outcome
struct NoSolution : std::runtime_error {
    explicit NoSolution(const std::string& route)
        : std::runtime_error("no chase solution on route " + route) {}
};

// a chase endpoint with positive free rank cannot be enumerated
struct InfiniteNode : std::runtime_error {
    std::string pos;
    explicit InfiniteNode(std::string p) : std::runtime_error("infinite node at " + p), pos(std::move(p)) {}
};

struct DiagramNode {
    std::string pos;
    GroupPtr group;
};

struct DiagramArrow {
    std::string from, to;
    FgAbMorphism map;
};

// consecutive arrows checked for exactness at the interior nodes; with
// leading_zero the first arrow is checked for injectivity as well
struct ExactPath {
    std::vector<std::string> nodes;
    bool leading_zero = false;
};

// corners of one commutativity square and the sign the two composites are
// expected to differ by; named by its top-left corner
struct DiagramSquare {
    std::string pos;
    std::string tl, tr, bl, br;
    int expected = 1;
};

using ArrowKey = std::pair<std::string, std::string>;

// one zig-zag chase: inputs β and γ must share an image in the meet node, the
// output α has to match β's image in the row node and, up to the recorded
// sign, γ's image in the column node
struct ChaseRoute {
    std::string name;
    std::string beta_at, gamma_at, alpha_at;
    std::string meet_at, row_at, col_at;
    ArrowKey beta_row, gamma_col;   // compatibility, both into meet_at
    ArrowKey alpha_row, beta_col;   // row condition, both into row_at
    ArrowKey alpha_col, gamma_row;  // column condition, both into col_at
    int sign = 1;
};

struct Diagram {
    std::string scenario;
    std::vector<DiagramNode> nodes;
    std::vector<DiagramArrow> arrows;
    std::vector<ExactPath> paths;
    std::vector<DiagramSquare> squares;
    std::vector<ChaseRoute> chases;

    const DiagramNode& node_at(const std::string& pos) const {
        for (const DiagramNode& n : nodes)
            if (n.pos == pos) return n;
        throw std::invalid_argument("no node at " + pos);
    }

    const FgAbMorphism* find_arrow(const std::string& from, const std::string& to) const {
        for (const DiagramArrow& a : arrows)
            if (a.from == from && a.to == to) return &a.map;
        return nullptr;
    }

    const FgAbMorphism& arrow(const std::string& from, const std::string& to) const {
        if (const FgAbMorphism* m = find_arrow(from, to)) return *m;
        throw std::invalid_argument("no arrow " + from + " -> " + to);
    }

    const FgAbMorphism& arrow(const ArrowKey& k) const { return arrow(k.first, k.second); }

    const ChaseRoute& route(const std::string& name) const {
        for (const ChaseRoute& r : chases)
            if (r.name == name) return r;
        throw std::invalid_argument("no chase route " + name);
    }
};

namespace detail {

inline std::string grid_pos(int t, int j) { return "r" + std::to_string(t) + "c" + std::to_string(j); }

// the 4×5 grid shared by the main and cone-variant diagrams: three rows of
// low-term data over the column complexes, a fourth row one degree up that
// literally continues the first, and the five vertical sequences between them
template <class RowFn>
inline void build_grid(Diagram& d, ScenarioEngine& e,
                       const std::vector<std::pair<ComplexPtr, long>>& cols, RowFn rows, bool row_zero) {
    for (int t = 1; t <= 3; ++t)
        for (int j = 1; j <= 5; ++j)
            d.nodes.push_back({grid_pos(t, j), e.node(t, cols[j - 1].first, cols[j - 1].second)->group()});
    for (int j = 1; j <= 5; ++j)
        d.nodes.push_back({grid_pos(4, j), e.node(1, cols[j - 1].first, cols[j - 1].second + 1)->group()});

    for (int t = 1; t <= 4; ++t) {
        RowMaps r = t <= 3 ? rows(t, 1) : rows(1, 2);
        const FgAbMorphism* ms[4] = {&r.m1, &r.m2, &r.m3, &r.m4};
        for (int j = 1; j <= 4; ++j) d.arrows.push_back({grid_pos(t, j), grid_pos(t, j + 1), *ms[j - 1]});
    }
    for (int j = 1; j <= 5; ++j) {
        ColumnMaps c = e.column_maps(cols[j - 1].first, cols[j - 1].second);
        d.arrows.push_back({grid_pos(1, j), grid_pos(2, j), c.down12});
        d.arrows.push_back({grid_pos(2, j), grid_pos(3, j), c.down23});
        d.arrows.push_back({grid_pos(3, j), grid_pos(4, j), c.delta31});
    }

    for (int t = 1; t <= 3; ++t) {
        ExactPath p;
        for (int j = 1; j <= 5; ++j) p.nodes.push_back(grid_pos(t, j));
        p.leading_zero = row_zero;
        d.paths.push_back(std::move(p));
    }
    ExactPath p4;
    for (int j = 1; j <= 5; ++j) p4.nodes.push_back(grid_pos(4, j));
    d.paths.push_back(std::move(p4));
    for (int j = 1; j <= 5; ++j) {
        ExactPath p;
        for (int t = 1; t <= 4; ++t) p.nodes.push_back(grid_pos(t, j));
        d.paths.push_back(std::move(p));
    }

    // every square of chain-map-induced arrows commutes; the lone exception is
    // the corner where the two connecting maps meet, which anticommutes
    for (int t = 1; t <= 3; ++t)
        for (int j = 1; j <= 4; ++j) {
            DiagramSquare s;
            s.pos = grid_pos(t, j);
            s.tl = grid_pos(t, j);
            s.tr = grid_pos(t, j + 1);
            s.bl = grid_pos(t + 1, j);
            s.br = grid_pos(t + 1, j + 1);
            s.expected = (t == 3 && j == 3) ? -1 : 1;
            d.squares.push_back(std::move(s));
        }
}

inline void append_e3(Diagram& d, ScenarioEngine& e) {
    E3Data a = e.e3_sequence();
    for (int i = 0; i < 5; ++i) d.nodes.push_back({"a" + std::to_string(i + 1), a.nodes[i]->group()});
    for (int i = 0; i < 4; ++i)
        d.arrows.push_back({"a" + std::to_string(i + 1), "a" + std::to_string(i + 2), a.maps[i]});
    d.paths.push_back({{"a1", "a2", "a3", "a4", "a5"}, true});
}

// both chases live on the same six-arrow pattern, one column apart; the sign
// carried into the column condition is the product of the expected signs of
// the four squares the route spans
inline void attach_chase_routes(Diagram& d) {
    auto expected = [&](const std::string& pos) {
        for (const DiagramSquare& s : d.squares)
            if (s.pos == pos) return s.expected;
        return 1;
    };
    for (int shift = 0; shift <= 1; ++shift) {
        ChaseRoute r;
        r.name = shift == 0 ? "left" : "right";
        int c = 2 + shift;
        auto rc = [&](int t, int j) { return grid_pos(t, j); };
        r.beta_at = rc(3, c);
        r.gamma_at = rc(2, c + 1);
        r.alpha_at = rc(4, c - 1);
        r.meet_at = rc(3, c + 1);
        r.row_at = rc(4, c);
        r.col_at = rc(2, c + 2);
        r.beta_row = {rc(3, c), rc(3, c + 1)};
        r.gamma_col = {rc(2, c + 1), rc(3, c + 1)};
        r.beta_col = {rc(3, c), rc(4, c)};
        r.alpha_row = {rc(4, c - 1), rc(4, c)};
        r.alpha_col = {rc(1, c + 2), rc(2, c + 2)};
        r.gamma_row = {rc(2, c + 1), rc(2, c + 2)};
        r.sign = expected(rc(2, c)) * expected(rc(2, c + 1)) * expected(rc(3, c)) * expected(rc(3, c + 1));
        d.chases.push_back(std::move(r));
    }
}

// structural consistency: every declared path step, square side and chase leg
// must name an existing arrow whose endpoints carry the named node groups
inline void validate_diagram(const Diagram& d) {
    auto check = [&](const std::string& from, const std::string& to) {
        const FgAbMorphism& m = d.arrow(from, to);
        if (m.src.get() != d.node_at(from).group.get() || m.tgt.get() != d.node_at(to).group.get())
            throw std::logic_error("arrow endpoints disagree at " + from + " -> " + to);
    };
    for (const ExactPath& p : d.paths)
        for (size_t i = 0; i + 1 < p.nodes.size(); ++i) check(p.nodes[i], p.nodes[i + 1]);
    for (const DiagramSquare& s : d.squares) {
        check(s.tl, s.tr);
        check(s.tl, s.bl);
        check(s.bl, s.br);
        check(s.tr, s.br);
    }
    for (const ChaseRoute& r : d.chases)
        for (const ArrowKey* k : {&r.beta_row, &r.gamma_col, &r.beta_col, &r.alpha_row, &r.alpha_col, &r.gamma_row})
            check(k->first, k->second);
}

}  // namespace detail

// the main diagram of a scenario; the degree-three appendage rides along
// whenever the window is deep enough to build it
inline Diagram build_main_diagram(ScenarioEngine& e) {
    Diagram d;
    d.scenario = e.scenario().name;
    std::vector<std::pair<ComplexPtr, long>> cols = {
        {e.stalk_h0(), 1}, {e.tau_le1(), 1}, {e.stalk_h1(), 1}, {e.stalk_h0(), 2}, {e.tau_le1(), 2}};
    detail::build_grid(d, e, cols, [&](int t, long n) { return e.row_maps(t, n); }, true);
    if (e.max_degree() >= 4) detail::append_e3(d, e);
    detail::attach_chase_routes(d);
    detail::validate_diagram(d);
    return d;
}

inline Diagram build_main_diagram(const Scenario& s) {
    ScenarioEngine e(s);
    return build_main_diagram(e);
}

// the cone-variant diagram: the window object and its cone replace the two
// stalk columns, the grid shape and sign table stay the same
inline Diagram build_variant_diagram(ScenarioEngine& e, const VariantData& v) {
    Diagram d;
    d.scenario = e.scenario().name;
    std::vector<std::pair<ComplexPtr, long>> cols = {
        {v.b, 1}, {e.tau_le1(), 1}, {v.cn.complex, 1}, {v.b, 2}, {e.tau_le1(), 2}};
    // the variant rows continue to the left, so no leading injectivity is claimed
    detail::build_grid(d, e, cols, [&](int t, long n) { return e.variant_row_maps(v, t, n); }, false);
    detail::attach_chase_routes(d);
    detail::validate_diagram(d);
    return d;
}

// one evaluated check; sign is the expected sign for passing squares, the
// observed one otherwise, and the route sign for chases
struct CheckResult {
    std::string kind;  // "exactness", "square" or "chase"
    std::string pos;
    std::string status;  // "pass", "fail" or "review"
    int sign = 0;
    long micros = 0;
    std::string note;
};

struct VerificationReport {
    std::string scenario;
    std::vector<std::pair<std::string, GroupShape>> nodes;
    std::vector<CheckResult> checks;
    bool pass = false;
    long total_micros = 0;
};

namespace detail {

inline long elapsed_micros(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - t0).count();
}

inline CheckResult injectivity_check(const Diagram& d, const ExactPath& p) {
    auto t0 = std::chrono::steady_clock::now();
    CheckResult c{"exactness", p.nodes[0], "fail", 0, 0, ""};
    c.status = is_injective(d.arrow(p.nodes[0], p.nodes[1])) ? "pass" : "fail";
    c.micros = elapsed_micros(t0);
    return c;
}

inline CheckResult exactness_check(const Diagram& d, const ExactPath& p, size_t i) {
    auto t0 = std::chrono::steady_clock::now();
    CheckResult c{"exactness", p.nodes[i], "fail", 0, 0, ""};
    const FgAbMorphism& f = d.arrow(p.nodes[i - 1], p.nodes[i]);
    const FgAbMorphism& g = d.arrow(p.nodes[i], p.nodes[i + 1]);
    c.status = is_exact_at(f, g) ? "pass" : "fail";
    c.micros = elapsed_micros(t0);
    return c;
}

// a square passes when the two composites agree up to the expected sign; a
// definite opposite sign is flagged for review instead of absorbed
inline CheckResult square_check(const Diagram& d, const DiagramSquare& s) {
    auto t0 = std::chrono::steady_clock::now();
    CheckResult c{"square", s.pos, "fail", 0, 0, ""};
    FgAbMorphism via_left = d.arrow(s.tl, s.bl).then(d.arrow(s.bl, s.br));
    FgAbMorphism via_top = d.arrow(s.tl, s.tr).then(d.arrow(s.tr, s.br));
    bool plus = via_left.eq(via_top);
    bool minus = via_left.eq(via_top.neg());
    if (plus && minus) {
        c.status = "pass";
        c.sign = s.expected;
    } else if (plus || minus) {
        c.sign = plus ? 1 : -1;
        c.status = c.sign == s.expected ? "pass" : "review";
    }
    c.micros = elapsed_micros(t0);
    return c;
}

}  // namespace detail

// evaluate every declared exactness node and square; checks run concurrently
// but the report order is fixed by the declaration order
inline VerificationReport verify(const Diagram& d) {
    auto t0 = std::chrono::steady_clock::now();
    VerificationReport rep;
    rep.scenario = d.scenario;
    for (const DiagramNode& n : d.nodes) rep.nodes.emplace_back(n.pos, n.group->shape());

    std::vector<std::function<CheckResult()>> tasks;
    for (const ExactPath& p : d.paths) {
        if (p.leading_zero) tasks.push_back([&d, &p] { return detail::injectivity_check(d, p); });
        for (size_t i = 1; i + 1 < p.nodes.size(); ++i)
            tasks.push_back([&d, &p, i] { return detail::exactness_check(d, p, i); });
    }
    for (const DiagramSquare& s : d.squares)
        tasks.push_back([&d, &s] { return detail::square_check(d, s); });

    rep.checks.resize(tasks.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i; (i = next.fetch_add(1)) < tasks.size();) rep.checks[i] = tasks[i]();
    };
    unsigned want = std::min<size_t>(std::thread::hardware_concurrency(), tasks.size());
    if (want > 1) {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < want; ++k) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    } else {
        worker();
    }

    rep.pass = true;
    for (const CheckResult& c : rep.checks)
        if (c.status != "pass") rep.pass = false;
    rep.total_micros = detail::elapsed_micros(t0);
    return rep;
}

// a completed chase with everything needed to re-check it by substitution
struct ChaseCertificate {
    std::string route;
    IntVec beta, gamma, alpha;
    IntVec witness_meet;  // shared image of β and γ
    IntVec witness_row;   // shared image of α and β
    IntVec witness_col;   // shared image of sign·α and γ
    bool compatible = false, row_equality = false, col_equality = false;
    bool valid() const { return compatible && row_equality && col_equality; }
};

namespace detail {

inline IntVec scaled(const IntVec& v, int s) {
    if (s == 1) return v;
    IntVec out = v;
    for (Int& x : out) x *= s;
    return out;
}

inline IntMatrix paired_rels(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix out(a.rows + b.rows, a.cols + b.cols);
    out.set_block(0, 0, a);
    out.set_block(a.rows, a.cols, b);
    return out;
}

}  // namespace detail

// run one chase: check the inputs meet, then solve the row and column
// conditions for α as a single integer system modulo the relation lattices
inline ChaseCertificate chase_along(const Diagram& d, const ChaseRoute& r, const IntVec& beta,
                                    const IntVec& gamma) {
    const FgAbMorphism& brow = d.arrow(r.beta_row);
    const FgAbMorphism& gcol = d.arrow(r.gamma_col);
    const FgAbMorphism& bcol = d.arrow(r.beta_col);
    const FgAbMorphism& arow = d.arrow(r.alpha_row);
    const FgAbMorphism& acol = d.arrow(r.alpha_col);
    const FgAbMorphism& grow = d.arrow(r.gamma_row);

    IntVec meet_b = brow.apply(beta);
    if (!brow.tgt->eq(meet_b, gcol.apply(gamma))) throw CompatibilityError(r.meet_at);

    IntVec row_target = bcol.apply(beta);
    IntVec col_image = grow.apply(gamma);
    IntVec stacked = row_target;
    for (const Int& x : detail::scaled(col_image, r.sign)) stacked.push_back(x);
    auto sol = solve_mod(vstack(arow.mat, acol.mat), stacked,
                         detail::paired_rels(arow.tgt->rels(), acol.tgt->rels()));
    if (!sol) throw NoSolution(r.name);

    ChaseCertificate c;
    c.route = r.name;
    c.beta = beta;
    c.gamma = gamma;
    c.alpha = arow.src->canonical_rep(*sol);
    c.witness_meet = brow.tgt->canonical_rep(meet_b);
    c.witness_row = arow.tgt->canonical_rep(row_target);
    c.witness_col = grow.tgt->canonical_rep(col_image);
    c.compatible = true;
    c.row_equality = arow.tgt->eq(arow.apply(c.alpha), row_target);
    c.col_equality = acol.tgt->eq(acol.apply(detail::scaled(c.alpha, r.sign)), col_image);
    return c;
}

inline ChaseCertificate chase_left(const Diagram& d, const IntVec& beta, const IntVec& gamma) {
    return chase_along(d, d.route("left"), beta, gamma);
}

inline ChaseCertificate chase_right(const Diagram& d, const IntVec& beta, const IntVec& gamma) {
    return chase_along(d, d.route("right"), beta, gamma);
}

// re-check a certificate against the diagram by substitution alone
inline bool validate_certificate(const Diagram& d, const ChaseCertificate& c) {
    const ChaseRoute& r = d.route(c.route);
    const FgAbMorphism& brow = d.arrow(r.beta_row);
    const FgAbMorphism& gcol = d.arrow(r.gamma_col);
    const FgAbMorphism& bcol = d.arrow(r.beta_col);
    const FgAbMorphism& arow = d.arrow(r.alpha_row);
    const FgAbMorphism& acol = d.arrow(r.alpha_col);
    const FgAbMorphism& grow = d.arrow(r.gamma_row);
    IntVec meet_b = brow.apply(c.beta);
    return brow.tgt->eq(meet_b, gcol.apply(c.gamma)) && brow.tgt->eq(meet_b, c.witness_meet) &&
           arow.tgt->eq(arow.apply(c.alpha), bcol.apply(c.beta)) &&
           arow.tgt->eq(c.witness_row, bcol.apply(c.beta)) &&
           acol.tgt->eq(acol.apply(detail::scaled(c.alpha, r.sign)), grow.apply(c.gamma)) &&
           acol.tgt->eq(c.witness_col, grow.apply(c.gamma));
}

struct ChaseSummary {
    long pairs = 0, successes = 0, failures = 0;
};

// chase every compatible input pair of one route; endpoints must be finite
inline ChaseSummary enumerate_route(const Diagram& d, const ChaseRoute& r) {
    const FgAbMorphism& brow = d.arrow(r.beta_row);
    const FgAbMorphism& gcol = d.arrow(r.gamma_col);
    std::vector<IntVec> betas, gammas;
    try {
        betas = brow.src->enumerate_elements();
    } catch (const InfiniteGroup&) {
        throw InfiniteNode(r.beta_at);
    }
    try {
        gammas = gcol.src->enumerate_elements();
    } catch (const InfiniteGroup&) {
        throw InfiniteNode(r.gamma_at);
    }
    std::vector<IntVec> gimg;
    gimg.reserve(gammas.size());
    for (const IntVec& g : gammas) gimg.push_back(gcol.apply(g));
    ChaseSummary s;
    for (const IntVec& b : betas) {
        IntVec ib = brow.apply(b);
        for (size_t k = 0; k < gammas.size(); ++k) {
            if (!brow.tgt->eq(ib, gimg[k])) continue;
            ++s.pairs;
            try {
                ChaseCertificate c = chase_along(d, r, b, gammas[k]);
                (c.valid() && validate_certificate(d, c)) ? ++s.successes : ++s.failures;
            } catch (const NoSolution&) {
                ++s.failures;
            }
        }
    }
    return s;
}

inline ChaseSummary enumerate_chases(const Diagram& d) {
    ChaseSummary total;
    for (const ChaseRoute& r : d.chases) {
        ChaseSummary s = enumerate_route(d, r);
        total.pairs += s.pairs;
        total.successes += s.successes;
        total.failures += s.failures;
    }
    return total;
}

// chase randomly drawn compatible pairs; stands in for enumeration when an
// endpoint is infinite
inline ChaseSummary sample_route(const Diagram& d, const ChaseRoute& r, long attempts, std::uint64_t seed) {
    const FgAbMorphism& brow = d.arrow(r.beta_row);
    const FgAbMorphism& gcol = d.arrow(r.gamma_col);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> coin(-3, 3);
    ChaseSummary s;
    for (long a = 0; a < attempts; ++a) {
        // the zero pair first, so at least one compatible pair is always chased
        IntVec beta(brow.src->ambient_rank());
        IntVec gamma(gcol.src->ambient_rank());
        if (a > 0)
            for (IntVec* v : {&beta, &gamma})
                for (Int& x : *v) x = coin(rng);
        if (!brow.tgt->eq(brow.apply(beta), gcol.apply(gamma))) {
            auto p = preimage(gcol, brow.apply(beta));
            if (!p) continue;
            gamma = *p;
        }
        ++s.pairs;
        try {
            ChaseCertificate c = chase_along(d, r, beta, gamma);
            (c.valid() && validate_certificate(d, c)) ? ++s.successes : ++s.failures;
        } catch (const NoSolution&) {
            ++s.failures;
        }
    }
    return s;
}

inline ChaseSummary sample_chases(const Diagram& d, long attempts, std::uint64_t seed) {
    ChaseSummary total;
    for (const ChaseRoute& r : d.chases) {
        ChaseSummary s = sample_route(d, r, attempts, seed);
        total.pairs += s.pairs;
        total.successes += s.successes;
        total.failures += s.failures;
    }
    return total;
}

// append one chase check per route to a report, falling back to sampling on
// infinite endpoints
inline void append_chase_checks(VerificationReport& rep, const Diagram& d, long attempts = 64,
                                std::uint64_t seed = 0x10573) {
    for (const ChaseRoute& r : d.chases) {
        auto t0 = std::chrono::steady_clock::now();
        CheckResult c{"chase", r.name, "fail", r.sign, 0, ""};
        ChaseSummary s;
        try {
            s = enumerate_route(d, r);
        } catch (const InfiniteNode&) {
            s = sample_route(d, r, attempts, seed);
        }
        c.status = (s.failures == 0 && s.pairs > 0) ? "pass" : "fail";
        std::ostringstream os;
        os << s.pairs << " pairs, " << s.successes << " ok";
        c.note = os.str();
        c.micros = detail::elapsed_micros(t0);
        if (c.status != "pass") rep.pass = false;
        rep.checks.push_back(std::move(c));
    }
}

// the report with its fixed field set; timings stay in memory only so equal
// diagrams serialize to identical bytes
inline nlohmann::ordered_json report_json(const VerificationReport& rep) {
    nlohmann::ordered_json j;
    j["scenario"] = rep.scenario;
    j["nodes"] = nlohmann::ordered_json::array();
    for (const auto& [pos, shape] : rep.nodes) {
        nlohmann::ordered_json n;
        n["pos"] = pos;
        n["rank"] = shape.free_rank;
        auto divs = nlohmann::ordered_json::array();
        for (const Int& d : shape.divisors) divs.push_back(d.convert_to<long long>());
        n["divisors"] = std::move(divs);
        j["nodes"].push_back(std::move(n));
    }
    j["checks"] = nlohmann::ordered_json::array();
    for (const CheckResult& c : rep.checks) {
        nlohmann::ordered_json e;
        e["kind"] = c.kind;
        e["pos"] = c.pos;
        e["status"] = c.status;
        e["sign"] = c.sign;
        j["checks"].push_back(std::move(e));
    }
    j["pass"] = rep.pass;
    return j;
}

// plain-text table of the grid shapes, one line per row
inline std::string render_grid(const Diagram& d) {
    std::vector<std::vector<std::string>> cells;
    for (int t = 1; t <= 4; ++t) {
        std::vector<std::string> row{"r" + std::to_string(t)};
        for (int j = 1; j <= 5; ++j) row.push_back(d.node_at(detail::grid_pos(t, j)).group->shape().str());
        cells.push_back(std::move(row));
    }
    bool appendage = false;
    for (const DiagramNode& n : d.nodes) appendage = appendage || n.pos == "a1";
    if (appendage) {
        std::vector<std::string> row{"e3"};
        for (int i = 1; i <= 5; ++i) row.push_back(d.node_at("a" + std::to_string(i)).group->shape().str());
        cells.push_back(std::move(row));
    }
    std::vector<size_t> width(6, 0);
    for (const auto& row : cells)
        for (size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], row[j].size());
    std::ostringstream os;
    for (const auto& row : cells) {
        for (size_t j = 0; j < row.size(); ++j) {
            os << row[j] << std::string(width[j] - row[j].size(), ' ');
            os << (j + 1 < row.size() ? "  " : "");
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace lowterm

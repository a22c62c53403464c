#pragma once

// Hypercohomology of complexes of modules over the quotient group, computed as
// total complexes Hom(P_t, F) over the horseshoe resolutions of a coefficient
// extension 0 → A → B → Z → 0.  The engine derives every node of the low-term
// diagrams from two short exact sequences of complexes — the horizontal one
//   0 → [H⁰D at 0] → τ≤1 D → (τ≤1 D)/[H⁰D] → 0
// whose long exact sequence provides the rows, and the vertical one
//   0 → Hom(P(Z), F) → Hom(P(B), F) → Hom(P(A), F) → 0
// which provides the columns — together with truncation comparisons for the
// higher windows.

#include "lowterm/resolutions.hpp"

namespace lowterm {

struct WindowExceeded : std::runtime_error {
    long needed, have;
    WindowExceeded(long n, long h)
        : std::runtime_error("degree window exceeded: need " + std::to_string(n) + " but only " +
                             std::to_string(h) + " is available"),
          needed(n),
          have(h) {}
};

struct InvalidTarget : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// input data: group, normal subgroup, coefficient module, and the extension of
// Z by the invariants (a cocycle, or an explicitly given sequence)
struct Scenario {
    std::string name;
    GrpPtr g;
    Subgroup n;
    ModulePtr m;                           // over g
    std::vector<IntVec> cocycle;           // u : Q → M^N; empty means split
    std::optional<ModuleSES> explicit_ses; // overrides the cocycle when set
    long max_degree = 4;
};

struct RowMaps {
    FgAbMorphism m1, m2, m3, m4;  // across one row at a fixed base degree
};

struct ColumnMaps {
    FgAbMorphism down12, down23;  // precomposition with the resolution maps
    FgAbMorphism delta31;         // connecting into the shifted first row
    FgAbMorphism cont12;          // continuation, for exactness at the last node
};

struct LongRowData {
    std::vector<CohomPtr> nodes;
    std::vector<FgAbMorphism> maps;
};

struct LowTermData {
    int t;
    std::vector<CohomPtr> nodes;     // E2^{1,0}, E^1, E2^{0,1}, E2^{2,0}, E1², E2^{1,1}, E2^{3,0}
    std::vector<FgAbMorphism> maps;  // six, with a leading zero into the first node
    // oracle data: the kernel route to E1²
    FgAbMorphism into_e2;    // ℍ²Ψ(τ≤1 D) → ℍ²Ψ(τ≤2 D)
    FgAbMorphism edge2;      // ℍ²Ψ(τ≤2 D) → Hom(T, H²D)
    SubObject e12_kernel;    // ker(edge2)
    FgAbMorphism comparison; // ℍ²Ψ(τ≤1 D) → ker(edge2), expected isomorphism
};

struct E3Data {
    std::vector<CohomPtr> nodes;     // E1², E², ℍ²Ψ(QQ), E³_{≤1}, E³   (t = 1)
    std::vector<FgAbMorphism> maps;  // four, with a leading zero
    bool qq_h0_trivial = false, qq_h1_trivial = false;
};

struct ColumnTriangle {
    FgAbMorphism delta;  // Hom_Q(A, H¹D) → Ext¹_Q(Z, H¹D), vertical connecting
    FgAbMorphism cup;    // ψ ↦ class of the cocycle q ↦ ψ(u(q))
    int sign = 0;        // observed: delta = sign · cup
};

struct VariantData {
    ComplexPtr b;
    ChainMap f;   // b → τ≤1 D
    ConeData cn;  // cone of f with its structure maps
};

class ScenarioEngine {
  public:
    explicit ScenarioEngine(Scenario sc) : sc_(std::move(sc)) {
        if (!sc_.g || !sc_.m) throw std::invalid_argument("scenario: group and module required");
        if (sc_.max_degree < 2) throw std::invalid_argument("scenario: max_degree must be at least 2");
        quot_ = quotient_group(sc_.n);
        lhs_ = lhs_complex(sc_.g, sc_.n, sc_.m, sc_.max_degree);
        fixed_ = fixed_points(sc_.m, sc_.n, quot_);
        if (sc_.explicit_ses) {
            ses_ = *sc_.explicit_ses;
            const auto& c = ses_->sur.tgt;
            if (c->rank() != 1 || c->ab()->rels().cols != 0)
                throw std::invalid_argument("scenario: quotient coefficient must be the trivial Z");
        } else {
            std::vector<IntVec> u = sc_.cocycle;
            if (u.empty()) u.assign(quot_.q->order(), IntVec(fixed_.module->rank(), Int(0)));
            ses_ = extension_from_cocycle(fixed_.module, u);
        }
        hs_ = horseshoe_resolution(*ses_, sc_.max_degree + 2);
        bounded_maxn_ = std::min<long>(sc_.max_degree + 2, 5);

        D_ = lhs_.D;
        hd0_ = cache_.get(D_, 0);
        hd1_ = cache_.get(D_, 1);
        stalk0_ = stalk_complex(quot_.q, hd0_->as_module(), 0);
        stalk1_ = stalk_complex(quot_.q, hd1_->as_module(), 1);
        tau1_ = truncate_le(D_, 1);
        inc_ = ChainMap{stalk0_, tau1_.complex, 0, {hd0_->lift_matrix()}};
        qc_ = quotient_complex(inc_);
        // project degree-1 cocycle coordinates onto cohomology classes
        const IntMatrix& z1 = tau1_.incl.comp(1);
        IntMatrix w1(hd1_->lift_matrix().cols, z1.cols);
        for (long j = 0; j < z1.cols; ++j) w1.set_col(j, hd1_->class_of(z1.col(j)));
        w1_ = ChainMap{tau1_.complex, stalk1_, 1, {w1}};
        pr1_ = ChainMap{qc_.complex, stalk1_, 1, {w1}};
    }

    const Scenario& scenario() const { return sc_; }
    const QuotientGroup& quotient() const { return quot_; }
    const LhsComplex& lhs() const { return lhs_; }
    const FixedPoints& invariants() const { return fixed_; }
    const ModuleSES& coefficients() const { return *ses_; }
    const Horseshoe& horseshoe() const { return hs_; }
    long max_degree() const { return sc_.max_degree; }
    CohomologyCache& cache() { return cache_; }

    // t = 1 resolves the trivial quotient Z, t = 2 the extension, t = 3 the invariants
    const FreeResolution& resolution(int t) const {
        switch (t) {
            case 1: return hs_.pc;
            case 2: return hs_.pb;
            case 3: return hs_.pa;
        }
        throw std::invalid_argument("resolution index must be 1, 2 or 3");
    }

    const ComplexPtr& dcomplex() const { return D_; }
    const ComplexPtr& stalk_h0() const { return stalk0_; }
    const ComplexPtr& stalk_h1() const { return stalk1_; }
    const ComplexPtr& tau_le1() const { return tau1_.complex; }
    const ComplexPtr& quotient_by_h0() const { return qc_.complex; }
    const ChainMap& stalk0_into_tau1() const { return inc_; }
    const ChainMap& tau1_onto_stalk1() const { return w1_; }

    // H^q of the coefficient complex; honest only while its differential is stored
    CohomPtr dcohomology(long q) {
        if (q < 0 || q > sc_.max_degree - 1) throw WindowExceeded(q + 1, sc_.max_degree);
        return cache_.get(D_, q);
    }

    CohomPtr cn_cohomology(long q) { return cache_.get(lhs_.CN, q); }

    // τ≤k D, with the degree-k term rewritten in cocycle coordinates
    ComplexPtr tau_le(long k) {
        if (k == 0) return stalk0_;
        if (k == 1) return tau1_.complex;
        if (k > sc_.max_degree - 1) throw WindowExceeded(k + 1, sc_.max_degree);
        auto it = taus_.find(k);
        if (it == taus_.end()) it = taus_.emplace(k, truncate_le(D_, k)).first;
        return it->second.complex;
    }

    // [H^q D at q]
    ComplexPtr stalk_h(long q) {
        if (q == 0) return stalk0_;
        if (q == 1) return stalk1_;
        auto it = qstalks_.find(q);
        if (it == qstalks_.end())
            it = qstalks_.emplace(q, stalk_complex(quot_.q, dcohomology(q)->as_module(), q)).first;
        return it->second;
    }

    // ℍ^n Ψ_t(f), cached by the identity of the total complex
    CohomPtr node(int t, const ComplexPtr& f, long n) {
        TotData& td = tot_ref(t, f);
        if (n + 1 > td.maxn) throw WindowExceeded(n + 1, td.maxn);
        return cache_.get(td.complex, n);
    }

    // ℍ^n Ψ_t of a chain map between complexes with total data
    FgAbMorphism induced(int t, const ChainMap& f, long n) {
        ChainMap tm = tot_chain_map(t, f);
        return induced_map(*cache_.get(tm.src, n), *cache_.get(tm.tgt, n), tm.comp(n));
    }

    // identification ℍ^n Ψ_t(X[1]) ≅ ℍ^{n+1} Ψ_t(X), with the sign (−1)^p per column
    FgAbMorphism shift_identification(int t, const ComplexPtr& shifted, const ComplexPtr& base, long n) {
        TotData& ts = tot_ref(t, shifted);
        TotData& tb = tot_ref(t, base);
        IntMatrix phi(tb.complex->term(n + 1)->rank(), ts.complex->term(n)->rank());
        for (const TotBlock& blk : ts.at(n)) {
            const TotBlock* o = tb.find(n + 1, blk.p);
            if (!o) continue;
            IntMatrix id = IntMatrix::identity(blk.dim);
            phi.set_block(o->offset, blk.offset, blk.p % 2 ? id.neg() : id);
        }
        return induced_map(*cache_.get(ts.complex, n), *cache_.get(tb.complex, n + 1), phi);
    }

    // the ladder maps of one row at base degree n (n = 1 for rows 1–3, n = 2 for row 4)
    RowMaps row_maps(int t, long n) {
        RowMaps r;
        r.m1 = induced(t, inc_, n);
        r.m2 = induced(t, w1_, n);
        r.m3 = through_quotient(t, n);
        r.m4 = induced(t, inc_, n + 1);
        return r;
    }

    // the maps of one column over the complex f, read at base degree n
    ColumnMaps column_maps(const ComplexPtr& f, long n) {
        const SESOfComplexes& s = vertical_ses(f);
        ColumnMaps c;
        c.down12 = induced_map(*node(1, f, n), *node(2, f, n), s.inj.comp(n));
        c.down23 = induced_map(*node(2, f, n), *node(3, f, n), s.sur.comp(n));
        c.delta31 = connecting_map(s, n, *node(3, f, n), *node(1, f, n + 1));
        c.cont12 = induced_map(*node(1, f, n + 1), *node(2, f, n + 1), s.inj.comp(n + 1));
        return c;
    }

    // ℍ^n Ψ_t of the coefficient complex, presented on τ≤n D
    CohomPtr hyper_ext(int t, long n) {
        if (n < 0) throw std::invalid_argument("hyper_ext: negative degree");
        if (n >= 2 && n > sc_.max_degree - 1) throw WindowExceeded(n + 1, sc_.max_degree);
        if (n >= 2) {
            ComplexPtr tk = tau_le(n);
            tot_ref(1, tk, n + 1);  // fix the window before any default-policy touch
            tot_ref(2, tk, n + 1);
            tot_ref(3, tk, n + 1);
            return node(t, tk, n);
        }
        return node(t, n == 0 ? stalk0_ : tau1_.complex, n);
    }

    // Ext^p_Q(T_t, H^q D)
    CohomPtr e2_term(int t, long p, long q) {
        if (p < 0 || q < 0) throw std::invalid_argument("e2_term: negative index");
        if (p + q + 1 > bounded_maxn_) throw WindowExceeded(p + q + 1, bounded_maxn_);
        return node(t, stalk_h(q), p + q);
    }

    // the seven-node low-term exact sequence of the t-th derived functor tower
    LowTermData low_term_sequence(int t) {
        if (sc_.max_degree < 3) throw WindowExceeded(3, sc_.max_degree);
        LowTermData d;
        d.t = t;
        RowMaps r1 = row_maps(t, 1), r2 = row_maps(t, 2);
        d.nodes = {node(t, stalk0_, 1), node(t, tau1_.complex, 1), node(t, stalk1_, 1),
                   node(t, stalk0_, 2), node(t, tau1_.complex, 2), node(t, stalk1_, 2),
                   node(t, stalk0_, 3)};
        d.maps = {r1.m1, r1.m2, r1.m3, r1.m4, r2.m2, r2.m3};

        // kernel route: E1² = ker(ℍ²Ψ(τ≤2 D) → Hom(T, H²D)) matches ℍ²Ψ(τ≤1 D)
        ComplexPtr t2 = tau_le(2);
        tot_ref(t, t2, 3);
        ChainMap incl12{tau1_.complex, t2, 0,
                        {IntMatrix::identity(D_->term(0)->rank()), tau1_.incl.comp(1)}};
        d.into_e2 = induced(t, incl12, 2);
        CohomPtr hd2 = dcohomology(2);
        ComplexPtr s2 = stalk_h(2);
        const IntMatrix& z2 = taus_.at(2).incl.comp(2);
        IntMatrix w2(hd2->lift_matrix().cols, z2.cols);
        for (long j = 0; j < z2.cols; ++j) w2.set_col(j, hd2->class_of(z2.col(j)));
        ChainMap pe2{t2, s2, 2, {w2}};
        d.edge2 = induced(t, pe2, 2);
        d.e12_kernel = kernel(d.edge2);
        IntMatrix cmp(d.e12_kernel.incl.mat.cols, d.into_e2.mat.cols);
        HermiteSolver sol(hstack(d.e12_kernel.incl.mat, d.into_e2.tgt->rels()));
        for (long j = 0; j < cmp.cols; ++j) {
            auto x = sol.solve(d.into_e2.mat.col(j));
            if (!x) throw std::logic_error("low term: image misses the edge kernel");
            x->resize(cmp.rows);
            cmp.set_col(j, *x);
        }
        d.comparison = unchecked_morphism(d.into_e2.src, d.e12_kernel.group, std::move(cmp));
        return d;
    }

    // continuation of the first row: 0 → E1² → E² → ℍ²Ψ(QQ) → E³_{≤1} → E³
    E3Data e3_sequence() {
        if (sc_.max_degree < 4) throw WindowExceeded(4, sc_.max_degree);
        E3Data d;
        ComplexPtr t3 = tau_le(3);
        TotData& tt3 = tot_ref(1, t3, 4);
        ChainMap incl13{tau1_.complex, t3, 0,
                        {IntMatrix::identity(D_->term(0)->rank()), tau1_.incl.comp(1)}};
        if (!qq3_) qq3_ = quotient_complex(incl13);
        TotData& tq = tot_ref(1, qq3_->complex, 3);
        SESOfComplexes s{tot_chain_map(1, incl13), tot_chain_map(1, qq3_->proj)};
        d.qq_h0_trivial = cache_.get(tq.complex, 0)->group()->is_trivial();
        d.qq_h1_trivial = cache_.get(tq.complex, 1)->group()->is_trivial();
        d.nodes = {node(1, tau1_.complex, 2), cache_.get(tt3.complex, 2), cache_.get(tq.complex, 2),
                   node(1, tau1_.complex, 3), cache_.get(tt3.complex, 3)};
        d.maps = {induced_map(*d.nodes[0], *d.nodes[1], s.inj.comp(2)),
                  induced_map(*d.nodes[1], *d.nodes[2], s.sur.comp(2)),
                  connecting_map(s, 2, *d.nodes[2], *d.nodes[3]),
                  induced_map(*d.nodes[3], *d.nodes[4], s.inj.comp(3))};
        return d;
    }

    // vertical connecting at the H¹-stalk against the cup product with the
    // extension cocycle; only available when the extension came from a cocycle
    ColumnTriangle column_triangle() {
        if (sc_.explicit_ses) throw std::invalid_argument("column triangle needs a cocycle presentation");
        std::vector<IntVec> u = sc_.cocycle;
        if (u.empty()) u.assign(quot_.q->order(), IntVec(fixed_.module->rank(), Int(0)));
        ColumnTriangle ct;
        ct.delta = column_maps(stalk1_, 1).delta31;

        // ψ ∈ Hom_Q(A, H¹D) read off the (0,1) block; its cup cocycle sits in the
        // (1,1) block as k_j ↦ Σ a_g ψ(u(g)) over the resolution kernel vectors
        CohomPtr src = node(3, stalk1_, 1);
        CohomPtr tgt = node(1, stalk1_, 2);
        TotData& ta = tot_ref(3, stalk1_);
        TotData& tc = tot_ref(1, stalk1_);
        const TotBlock* bsrc = ta.find(1, 0);
        const TotBlock* btgt = tc.find(2, 1);
        const long hr = hd1_->lift_matrix().cols;
        const long ra = fixed_.module->rank();
        IntMatrix cup(tgt->lift_matrix().cols, src->lift_matrix().cols);
        const GroupRingMatrix& d1 = hs_.pc.diffs[0];
        for (long j = 0; j < cup.cols; ++j) {
            IntVec lift = src->lift_matrix().col(j);  // ψ(e_i) coordinates, generator-major
            IntVec vec(tc.complex->term(2)->rank(), Int(0));
            for (long kk = 0; kk < d1.cols; ++kk)
                for (const auto& [g, a] : d1.e[0][kk])
                    for (long i = 0; i < ra; ++i)
                        for (long h = 0; h < hr; ++h) {
                            long at = btgt ? btgt->offset + kk * hr + h : 0;
                            vec[at] += a * u[g][i] * lift[bsrc->offset + i * hr + h];
                        }
            cup.set_col(j, tgt->class_of(vec));
        }
        ct.cup = unchecked_morphism(src->group(), tgt->group(), std::move(cup));
        if (ct.delta.sub(ct.cup).is_zero_morphism())
            ct.sign = 1;
        else if (ct.delta.add(ct.cup).is_zero_morphism())
            ct.sign = -1;
        return ct;
    }

    // degeneration comparison: ℍ²Ψ_t of [H²D at 2] → τ≥2 D is an isomorphism
    FgAbMorphism degeneration_comparison(int t) {
        CohomPtr hd2 = dcohomology(2);
        if (!tge2_) tge2_ = truncate_ge(D_, 2);
        ComplexPtr s2 = stalk_h(2);
        tot_ref(t, tge2_->complex, 3);
        ChainMap j{s2, tge2_->complex, 2, {hd2->lift_matrix()}};
        return induced(t, j, 2);
    }

    // the row ladder continued through window degrees 1..ihi
    LongRowData long_exact_row(int t, long ihi) {
        check_window(ihi);
        LongRowData d;
        d.nodes.push_back(node(t, stalk0_, 1));
        for (long n = 1; n <= ihi; ++n) {
            RowMaps r = row_maps(t, n);
            d.nodes.push_back(node(t, tau1_.complex, n));
            d.nodes.push_back(node(t, stalk1_, n));
            d.nodes.push_back(node(t, stalk0_, n + 1));
            d.maps.push_back(r.m1);
            d.maps.push_back(r.m2);
            d.maps.push_back(r.m3);
        }
        return d;
    }

    // the companion ladder where the full window object replaces its ≤1
    // truncation and the quotient by the degree-zero stalk replaces the H¹ stalk
    LongRowData long_exact_row_ge1(int t, long ihi) {
        check_window(ihi);
        ComplexPtr tk = tau_le(ihi);
        const QuotientComplex* qp;
        if (ihi == 1) {
            qp = &qc_;
        } else {
            auto it = gq_.find(ihi);
            if (it == gq_.end()) {
                ChainMap incl{stalk0_, tk, 0, {hd0_->lift_matrix()}};
                it = gq_.emplace(ihi, quotient_complex(incl)).first;
            }
            tot_ref(t, tk, ihi + 1);
            tot_ref(t, it->second.complex, ihi + 1);
            qp = &it->second;
        }
        SESOfComplexes local;
        const SESOfComplexes* s;
        if (ihi == 1) {
            s = &horizontal_ses(t);
        } else {
            ChainMap incl{stalk0_, tk, 0, {hd0_->lift_matrix()}};
            local = SESOfComplexes{tot_chain_map(t, incl), tot_chain_map(t, qp->proj)};
            s = &local;
        }
        TotData& te = tot_ref(t, tk);
        TotData& tq = tot_ref(t, qp->complex);
        LongRowData d;
        d.nodes.push_back(node(t, stalk0_, 1));
        for (long i = 1; i <= ihi; ++i) {
            CohomPtr he = cache_.get(te.complex, i);
            CohomPtr hg = cache_.get(tq.complex, i);
            CohomPtr nx = node(t, stalk0_, i + 1);
            d.maps.push_back(induced_map(*d.nodes.back(), *he, s->inj.comp(i)));
            d.maps.push_back(induced_map(*he, *hg, s->sur.comp(i)));
            d.maps.push_back(connecting_map(*s, i, *hg, *nx));
            d.nodes.push_back(he);
            d.nodes.push_back(hg);
            d.nodes.push_back(nx);
        }
        return d;
    }

    VariantData make_variant(ComplexPtr b, std::vector<IntMatrix> comps, long lo) {
        if (!b) throw InvalidTarget("variant: missing source complex");
        VariantData v;
        v.b = std::move(b);
        try {
            v.f = make_chain_map(v.b, tau1_.complex, lo, std::move(comps), true);
        } catch (const std::invalid_argument& e) {
            throw InvalidTarget(std::string("variant: ") + e.what());
        }
        v.cn = cone(v.f);
        return v;
    }

    VariantData variant_identity() {
        std::vector<IntMatrix> comps;
        for (long n = 0; n <= 1; ++n) comps.push_back(IntMatrix::identity(tau1_.complex->term(n)->rank()));
        return make_variant(tau1_.complex, std::move(comps), 0);
    }

    VariantData variant_canonical() { return make_variant(stalk0_, {hd0_->lift_matrix()}, 0); }

    VariantData variant_zero() {
        ComplexPtr z = stalk_complex(quot_.q, zero_module(quot_.q), 0);
        return make_variant(z, {}, 0);
    }

    // variant row maps at base degree n: f_*, incl_*, shift ∘ proj_*, f_*
    RowMaps variant_row_maps(const VariantData& v, int t, long n) {
        RowMaps r;
        r.m1 = induced(t, v.f, n);
        r.m2 = induced(t, v.cn.incl, n);
        r.m3 = induced(t, v.cn.proj, n).then(shift_identification(t, v.cn.proj.tgt, v.b, n));
        r.m4 = induced(t, v.f, n + 1);
        return r;
    }

    LongRowData long_exact_row_variant(const VariantData& v, int t, long ihi) {
        check_window(ihi);
        LongRowData d;
        d.nodes.push_back(node(t, v.b, 1));
        for (long n = 1; n <= ihi; ++n) {
            RowMaps r = variant_row_maps(v, t, n);
            d.nodes.push_back(node(t, tau1_.complex, n));
            d.nodes.push_back(node(t, v.cn.complex, n));
            d.nodes.push_back(node(t, v.b, n + 1));
            d.maps.push_back(r.m1);
            d.maps.push_back(r.m2);
            d.maps.push_back(r.m3);
        }
        return d;
    }

    // the G-group cochain complex C^•(G, M) on the same bar basis as D
    const ComplexPtr& group_cochains() {
        if (!cg_) cg_ = hom_complex(lhs_.barg.res, sc_.m, sc_.max_degree);
        return cg_;
    }

    // comparison H^n(G, M) → ℍ^n Ψ_1(D): invariant cochains placed in the (0, n) block
    FgAbMorphism kappa_on_h(long n) {
        CohomPtr hg = cache_.get(group_cochains(), n);
        CohomPtr tn = hyper_ext(1, n);
        ComplexPtr target = n == 0 ? stalk0_ : (n == 1 ? tau1_.complex : tau_le(n));
        TotData& td = tot_ref(1, target);
        const TotBlock* blk = td.find(n, 0);
        IntMatrix ign = invariant_embedding(n);
        IntMatrix top = n == 0 ? hd0_->lift_matrix() : (n == 1 ? tau1_.incl.comp(1) : taus_.at(n).incl.comp(n));
        HermiteSolver sol(hstack(top, D_->term(n)->ab()->rels()));
        IntMatrix mat(tn->lift_matrix().cols, hg->lift_matrix().cols);
        for (long j = 0; j < mat.cols; ++j) {
            auto x = sol.solve(ign.mul_vec(hg->lift_matrix().col(j)));
            if (!x) throw std::logic_error("comparison: invariant cochain is not a cocycle");
            x->resize(top.cols);
            IntVec vec(td.complex->term(n)->rank(), Int(0));
            for (long i = 0; i < top.cols; ++i) vec[blk->offset + i] = (*x)[i];
            mat.set_col(j, tn->class_of(vec));
        }
        return unchecked_morphism(hg->group(), tn->group(), std::move(mat));
    }

    // Ext^i over the full group ring, for the inflated coefficient of the t-th row
    std::vector<CohomPtr> ext_over_group(int t, long maxi) {
        ModulePtr tm = t == 1 ? ses_->sur.tgt : (t == 2 ? ses_->inj.tgt : ses_->inj.src);
        FreeResolution res = projective_resolution(inflation(quot_, tm), maxi + 1);
        return ext_groups(res, sc_.m, maxi, cache_);
    }

    // 0 → Hom(P(Z), f) → Hom(P(B), f) → Hom(P(A), f) → 0, degreewise split
    const SESOfComplexes& vertical_ses(const ComplexPtr& f) {
        auto it = vses_.find(f.get());
        if (it != vses_.end()) return it->second;
        TotData& t1 = tot_ref(1, f);
        TotData& t2 = tot_ref(2, f);
        TotData& t3 = tot_ref(3, f);
        long lo = std::min({t1.lo, t2.lo, t3.lo});
        long hi = std::min({t1.maxn, t2.maxn, t3.maxn});
        std::vector<IntMatrix> inj, sur;
        for (long n = lo; n <= hi; ++n) {
            IntMatrix mi(t2.complex->term(n)->rank(), t1.complex->term(n)->rank());
            for (const TotBlock& b : t1.at(n))
                if (const TotBlock* o = t2.find(n, b.p))
                    mi.set_block(o->offset, b.offset, hs_.pi[b.p].hom_matrix(*f->term(b.q)));
            inj.push_back(std::move(mi));
            IntMatrix ms(t3.complex->term(n)->rank(), t2.complex->term(n)->rank());
            for (const TotBlock& b : t2.at(n))
                if (const TotBlock* o = t3.find(n, b.p))
                    ms.set_block(o->offset, b.offset, hs_.iota[b.p].hom_matrix(*f->term(b.q)));
            sur.push_back(std::move(ms));
        }
        SESOfComplexes s{ChainMap{t1.complex, t2.complex, lo, std::move(inj)},
                         ChainMap{t2.complex, t3.complex, lo, std::move(sur)}};
        return vses_.emplace(f.get(), std::move(s)).first->second;
    }

    // 0 → Hom(P_t, [H⁰D]) → Hom(P_t, τ≤1 D) → Hom(P_t, quotient) → 0
    const SESOfComplexes& horizontal_ses(int t) {
        auto it = hses_.find(t);
        if (it != hses_.end()) return it->second;
        SESOfComplexes s{tot_chain_map(t, inc_), tot_chain_map(t, qc_.proj)};
        return hses_.emplace(t, std::move(s)).first->second;
    }

  private:
    struct TotBlock {
        long p, q, offset, dim;
    };
    struct TotData {
        ComplexPtr source;
        ComplexPtr complex;
        std::vector<std::vector<TotBlock>> blocks;  // indexed by n − lo
        long lo = 0, maxn = 0;

        const std::vector<TotBlock>& at(long n) const {
            static const std::vector<TotBlock> none;
            if (n < lo || n > maxn) return none;
            return blocks[n - lo];
        }

        const TotBlock* find(long n, long p) const {
            for (const TotBlock& b : at(n))
                if (b.p == p) return &b;
            return nullptr;
        }
    };

    void check_window(long ihi) {
        if (ihi < 1) throw std::invalid_argument("row window must start at 1");
        if (ihi + 2 > bounded_maxn_) throw WindowExceeded(ihi + 2, bounded_maxn_);
    }

    // the total complex of Hom(P_t, f); the degree window is fixed on first use
    TotData& tot_ref(int t, const ComplexPtr& f, long maxn = -1) {
        auto key = std::make_pair(t, f.get());
        auto it = tots_.find(key);
        if (it != tots_.end()) {
            if (maxn > it->second.maxn) throw WindowExceeded(maxn, it->second.maxn);
            return it->second;
        }
        if (maxn < 0) maxn = bounded_maxn_;
        return tots_.emplace(key, build_tot(resolution(t), f, maxn)).first->second;
    }

    static TotData build_tot(const FreeResolution& P, const ComplexPtr& f, long maxn) {
        if (maxn - f->lo() > P.depth()) throw WindowExceeded(maxn - f->lo(), P.depth());
        TotData td;
        td.source = f;
        td.lo = std::min<long>(0, f->lo());
        td.maxn = maxn;
        td.blocks.resize(maxn - td.lo + 1);
        std::vector<ModulePtr> terms;
        std::vector<IntMatrix> diffs;
        for (long n = td.lo; n <= maxn; ++n) {
            long off = 0, rc = 0;
            for (long q = f->lo(); q <= f->hi(); ++q) {
                long p = n - q;
                if (p < 0) continue;
                long dim = P.ranks[p] * f->term(q)->rank();
                if (dim == 0) continue;
                td.blocks[n - td.lo].push_back({p, q, off, dim});
                off += dim;
                rc += P.ranks[p] * f->term(q)->ab()->rels().cols;
            }
            IntMatrix rels(off, rc);
            long c0 = 0;
            for (const TotBlock& b : td.blocks[n - td.lo]) {
                IntMatrix r = detail::block_diag_copies(f->term(b.q)->ab()->rels(), P.ranks[b.p]);
                rels.set_block(b.offset, c0, r);
                c0 += r.cols;
            }
            terms.push_back(trivial_module(unit_group(), from_relations(off, std::move(rels))));
        }
        for (long n = td.lo; n < maxn; ++n) {
            IntMatrix d(terms[n - td.lo + 1]->rank(), terms[n - td.lo]->rank());
            for (const TotBlock& b : td.blocks[n - td.lo]) {
                if (const TotBlock* h = td.find(n + 1, b.p + 1))
                    d.set_block(h->offset, b.offset, P.diffs[b.p].hom_matrix(*f->term(b.q)));
                if (const TotBlock* v = td.find(n + 1, b.p)) {
                    IntMatrix dv = detail::block_diag_copies(f->diff(b.q), P.ranks[b.p]);
                    d.set_block(v->offset, b.offset, b.p % 2 ? dv.neg() : dv);
                }
            }
            diffs.push_back(std::move(d));
        }
        td.complex = make_complex(unit_group(), td.lo, std::move(terms), std::move(diffs), false);
        return td;
    }

    ChainMap tot_chain_map(int t, const ChainMap& f) {
        TotData& ts = tot_ref(t, f.src);
        TotData& tt = tot_ref(t, f.tgt);
        const FreeResolution& P = resolution(t);
        long lo = std::min(ts.lo, tt.lo), hi = std::min(ts.maxn, tt.maxn);
        std::vector<IntMatrix> comps;
        for (long n = lo; n <= hi; ++n) {
            IntMatrix c(tt.complex->term(n)->rank(), ts.complex->term(n)->rank());
            for (const TotBlock& b : ts.at(n))
                if (const TotBlock* o = tt.find(n, b.p))
                    c.set_block(o->offset, b.offset, detail::block_diag_copies(f.comp(b.q), P.ranks[b.p]));
            comps.push_back(std::move(c));
        }
        return ChainMap{ts.complex, tt.complex, lo, std::move(comps)};
    }

    // connecting of the horizontal sequence, carried back to the stalk presentation
    FgAbMorphism through_quotient(int t, long n) {
        const SESOfComplexes& s = horizontal_ses(t);
        CohomPtr hq = node(t, qc_.complex, n);
        FgAbMorphism delta = connecting_map(s, n, *hq, *node(t, stalk0_, n + 1));
        FgAbMorphism pr = induced(t, pr1_, n);
        auto inv = inverse_morphism(pr);
        if (!inv) throw std::logic_error("quotient presentation comparison is not invertible");
        return inv->then(delta);
    }

    // C^n(G, M) → D^n: a G-equivariant cochain, evaluated through the coset section
    IntMatrix invariant_embedding(long n) {
        const long rm = sc_.m->rank();
        IntMatrix out(lhs_.homs[n].dim(), lhs_.barg.res.ranks[n] * rm);
        for (long w = 0; w < lhs_.barg.res.ranks[n]; ++w)
            for (long c = 0; c < quot_.q->order(); ++c) {
                long rc = quot_.section[c];
                for (long col = 0; col < rm; ++col)
                    for (const auto& [row, v] : sc_.m->act_col(rc, col))
                        out(lhs_.homs[n].index(w, c, row), w * rm + col) += v;
            }
        return out;
    }

    Scenario sc_;
    QuotientGroup quot_;
    LhsComplex lhs_;
    FixedPoints fixed_;
    std::optional<ModuleSES> ses_;
    Horseshoe hs_;
    long bounded_maxn_ = 5;
    ComplexPtr D_;
    CohomologyCache cache_;
    CohomPtr hd0_, hd1_;
    ComplexPtr stalk0_, stalk1_;
    Truncation tau1_;
    ChainMap inc_, w1_, pr1_;
    QuotientComplex qc_;
    std::map<long, Truncation> taus_;
    std::map<long, ComplexPtr> qstalks_;
    std::optional<QuotientComplex> qq3_;
    std::map<long, QuotientComplex> gq_;
    std::optional<CoTruncation> tge2_;
    ComplexPtr cg_;
    std::map<std::pair<int, const ModuleComplex*>, TotData> tots_;
    std::map<const ModuleComplex*, SESOfComplexes> vses_;
    std::map<int, SESOfComplexes> hses_;
};

}  // namespace lowterm

#pragma once

// Cochain complexes of modules over a fixed finite group, chain maps between
// them, cohomology with explicit cocycle lifts, the standard constructions
// (truncation, stalk, shift, cone, quotient), and the constructive long exact
// sequence of a degreewise short exact sequence.

#include "lowterm/grpmod.hpp"

namespace lowterm {

struct LiftFailure : std::runtime_error {
    long degree;
    explicit LiftFailure(long n)
        : std::runtime_error("connecting map: lift failed in degree " + std::to_string(n)), degree(n) {}
};

inline ModulePtr zero_module(GrpPtr grp) { return trivial_module(std::move(grp), trivial_group()); }

class ModuleComplex {
  public:
    ModuleComplex(GrpPtr grp, long lo, std::vector<ModulePtr> terms, std::vector<IntMatrix> diffs,
                  bool validate = true)
        : grp_(std::move(grp)), lo_(lo), terms_(std::move(terms)), diffs_(std::move(diffs)) {
        zero_ = zero_module(grp_);
        if (terms_.empty()) {
            if (!diffs_.empty()) throw std::invalid_argument("complex: differentials without terms");
            return;
        }
        if (diffs_.size() + 1 != terms_.size())
            throw std::invalid_argument("complex: need one differential per adjacent pair");
        for (size_t k = 0; k < diffs_.size(); ++k)
            if (diffs_[k].rows != terms_[k + 1]->rank() || diffs_[k].cols != terms_[k]->rank())
                throw std::invalid_argument("complex: differential dimensions off at slot " +
                                            std::to_string(k));
        if (validate) validate_structure();
    }

    const GrpPtr& group() const { return grp_; }
    long lo() const { return lo_; }
    long hi() const { return lo_ + static_cast<long>(terms_.size()) - 1; }
    bool in_range(long n) const { return !terms_.empty() && n >= lo() && n <= hi(); }

    const ModulePtr& term(long n) const { return in_range(n) ? terms_[n - lo_] : zero_; }

    IntMatrix diff(long n) const {
        if (in_range(n) && in_range(n + 1)) return diffs_[n - lo_];
        return IntMatrix(term(n + 1)->rank(), term(n)->rank());
    }

  private:
    void validate_structure() {
        for (long n = lo(); n < hi(); ++n) {
            IntMatrix dd = diff(n + 1).mul(diff(n));
            if (!cols_vanish(dd, *term(n + 2)->ab()))
                throw std::invalid_argument("complex: d∘d ≠ 0 leaving degree " + std::to_string(n));
            for (long gen : grp_->gens()) {
                IntMatrix lhs = diff(n).mul(term(n)->act(gen));
                IntMatrix rhs = term(n + 1)->act(gen).mul(diff(n));
                if (!cols_vanish(lhs.sub(rhs), *term(n + 1)->ab())) throw NotEquivariant(gen);
            }
        }
    }

    GrpPtr grp_;
    long lo_;
    std::vector<ModulePtr> terms_;
    std::vector<IntMatrix> diffs_;
    ModulePtr zero_;
};

using ComplexPtr = std::shared_ptr<const ModuleComplex>;

inline ComplexPtr make_complex(GrpPtr grp, long lo, std::vector<ModulePtr> terms,
                               std::vector<IntMatrix> diffs, bool validate = true) {
    return std::make_shared<ModuleComplex>(std::move(grp), lo, std::move(terms), std::move(diffs), validate);
}

inline ComplexPtr stalk_complex(GrpPtr grp, ModulePtr m, long degree) {
    return make_complex(std::move(grp), degree, {std::move(m)}, {}, false);
}

// X[k]^n = X^{n+k} with differential (−1)^k d
inline ComplexPtr shift_complex(const ComplexPtr& x, long k) {
    std::vector<ModulePtr> terms;
    std::vector<IntMatrix> diffs;
    for (long n = x->lo(); n <= x->hi(); ++n) {
        terms.push_back(x->term(n));
        if (n < x->hi()) diffs.push_back(k % 2 == 0 ? x->diff(n) : x->diff(n).neg());
    }
    return make_complex(x->group(), x->lo() - k, std::move(terms), std::move(diffs), false);
}

struct ChainMap {
    ComplexPtr src, tgt;
    long lo = 0;
    std::vector<IntMatrix> comps;

    IntMatrix comp(long n) const {
        if (!comps.empty() && n >= lo && n < lo + static_cast<long>(comps.size()))
            return comps[n - lo];
        return IntMatrix(tgt->term(n)->rank(), src->term(n)->rank());
    }

    ChainMap then(const ChainMap& g) const {
        long a = std::min(lo, g.lo);
        long b = std::max(lo + static_cast<long>(comps.size()), g.lo + static_cast<long>(g.comps.size()));
        std::vector<IntMatrix> out;
        for (long n = a; n < b; ++n) out.push_back(g.comp(n).mul(comp(n)));
        return {src, g.tgt, a, std::move(out)};
    }
};

inline ChainMap make_chain_map(ComplexPtr src, ComplexPtr tgt, long lo, std::vector<IntMatrix> comps,
                               bool validate = true) {
    ChainMap f{std::move(src), std::move(tgt), lo, std::move(comps)};
    for (size_t k = 0; k < f.comps.size(); ++k) {
        long n = lo + static_cast<long>(k);
        if (f.comps[k].rows != f.tgt->term(n)->rank() || f.comps[k].cols != f.src->term(n)->rank())
            throw std::invalid_argument("chain map: component dimensions off in degree " +
                                        std::to_string(n));
    }
    if (validate) {
        long a = std::min(f.src->lo(), f.tgt->lo()) - 1;
        long b = std::max(f.src->hi(), f.tgt->hi());
        for (long n = a; n <= b; ++n) {
            IntMatrix lhs = f.tgt->diff(n).mul(f.comp(n));
            IntMatrix rhs = f.comp(n + 1).mul(f.src->diff(n));
            if (!cols_vanish(lhs.sub(rhs), *f.tgt->term(n + 1)->ab()))
                throw std::invalid_argument("chain map: does not commute with d in degree " +
                                            std::to_string(n));
            for (long gen : f.src->group()->gens()) {
                IntMatrix el = f.comp(n).mul(f.src->term(n)->act(gen));
                IntMatrix er = f.tgt->term(n)->act(gen).mul(f.comp(n));
                if (!cols_vanish(el.sub(er), *f.tgt->term(n)->ab())) throw NotEquivariant(gen);
            }
        }
    }
    return f;
}

inline ChainMap identity_chain_map(const ComplexPtr& x) {
    std::vector<IntMatrix> comps;
    for (long n = x->lo(); n <= x->hi(); ++n) comps.push_back(IntMatrix::identity(x->term(n)->rank()));
    return {x, x, x->lo(), std::move(comps)};
}

inline ModulePtr gmodule_direct_sum(const ModulePtr& a, const ModulePtr& b) {
    const long ra = a->rank();
    GroupPtr ab = from_relations(
        ra + b->rank(),
        hstack(vstack(a->ab()->rels(), IntMatrix(b->rank(), a->ab()->rels().cols)),
               vstack(IntMatrix(ra, b->ab()->rels().cols), b->ab()->rels())));
    ModulePtr ha = a, hb = b;
    return std::make_shared<GModule>(a->group(), ab, [ha, hb, ra](long g, long j) {
        SparseVec out;
        if (j < ra) return ha->act_col(g, j);
        for (auto& [i, c] : hb->act_col(g, j - ra)) out.emplace_back(i + ra, c);
        return out;
    });
}

struct ConeData {
    ComplexPtr complex;  // C^n = X^{n+1} ⊕ Y^n for f : X → Y
    ChainMap incl;       // Y → C
    ChainMap proj;       // C → X[1]
};

inline ConeData cone(const ChainMap& f) {
    const ComplexPtr& x = f.src;
    const ComplexPtr& y = f.tgt;
    long lo = std::min(x->lo() - 1, y->lo());
    long hi = std::max(x->hi() - 1, y->hi());
    std::vector<ModulePtr> terms;
    std::vector<IntMatrix> diffs;
    for (long n = lo; n <= hi; ++n) {
        terms.push_back(gmodule_direct_sum(x->term(n + 1), y->term(n)));
        if (n < hi) {
            long rx1 = x->term(n + 1)->rank(), rx2 = x->term(n + 2)->rank();
            long ry = y->term(n)->rank(), ry1 = y->term(n + 1)->rank();
            IntMatrix d(rx2 + ry1, rx1 + ry);
            d.set_block(0, 0, x->diff(n + 1).neg());
            d.set_block(rx2, 0, f.comp(n + 1));
            d.set_block(rx2, rx1, y->diff(n));
            diffs.push_back(std::move(d));
        }
    }
    ConeData out;
    out.complex = make_complex(x->group(), lo, std::move(terms), std::move(diffs), false);
    std::vector<IntMatrix> inc, prj;
    for (long n = lo; n <= hi; ++n) {
        long rx1 = x->term(n + 1)->rank();
        long ry = y->term(n)->rank();
        IntMatrix in(rx1 + ry, ry), pr(rx1, rx1 + ry);
        for (long i = 0; i < ry; ++i) in(rx1 + i, i) = 1;
        for (long i = 0; i < rx1; ++i) pr(i, i) = 1;
        inc.push_back(std::move(in));
        prj.push_back(std::move(pr));
    }
    out.incl = {y, out.complex, lo, std::move(inc)};
    out.proj = {out.complex, shift_complex(x, 1), lo, std::move(prj)};
    return out;
}

// quotient of tgt by the image of a degreewise-injective chain map; terms keep
// the ambient presentation of tgt with the image columns added to the relations
struct QuotientComplex {
    ComplexPtr complex;
    ChainMap proj;  // tgt → quotient, identity on ambient coordinates
};

inline QuotientComplex quotient_complex(const ChainMap& inc) {
    const ComplexPtr& y = inc.tgt;
    std::vector<ModulePtr> terms;
    std::vector<IntMatrix> diffs;
    std::vector<IntMatrix> projs;
    for (long n = y->lo(); n <= y->hi(); ++n) {
        GroupPtr ab = from_relations(y->term(n)->rank(), hstack(inc.comp(n), y->term(n)->ab()->rels()));
        ModulePtr held = y->term(n);
        terms.push_back(std::make_shared<GModule>(y->group(), ab, [held](long g, long j) {
            return held->act_col(g, j);
        }));
        if (n < y->hi()) diffs.push_back(y->diff(n));
        projs.push_back(IntMatrix::identity(y->term(n)->rank()));
    }
    QuotientComplex out;
    out.complex = make_complex(y->group(), y->lo(), std::move(terms), std::move(diffs), false);
    out.proj = {y, out.complex, y->lo(), std::move(projs)};
    return out;
}

// cocycles Z^n as a module of their own, with the inclusion into X^n
struct CocycleModule {
    ModulePtr module;
    IntMatrix incl;  // rank(X^n) × rank(module)
};

inline CocycleModule cocycle_module(const ModuleComplex& x, long n) {
    IntMatrix K = lattice_kernel(x.diff(n), x.term(n + 1)->ab()->rels());
    GroupPtr ab = from_relations(K.cols, lattice_kernel(K, x.term(n)->ab()->rels()));
    // one solver serves every column of every group element
    HermiteSolver sol(hstack(K, x.term(n)->ab()->rels()));
    std::vector<IntMatrix> table(x.group()->order());
    for (long g = 0; g < x.group()->order(); ++g) {
        if (g == x.group()->id()) {
            table[g] = IntMatrix::identity(K.cols);
            continue;
        }
        IntMatrix act(K.cols, K.cols);
        for (long j = 0; j < K.cols; ++j) {
            auto c = sol.solve(x.term(n)->act_vec(g, K.col(j)));
            if (!c) throw std::logic_error("cocycles are not action-stable");
            c->resize(K.cols);
            act.set_col(j, *c);
        }
        table[g] = std::move(act);
    }
    CocycleModule out;
    out.module = std::make_shared<GModule>(x.group(), ab, std::move(table), false);
    out.incl = std::move(K);
    return out;
}

// τ≤n X: replace X^n by its cocycles, drop higher degrees
struct Truncation {
    ComplexPtr complex;
    ChainMap incl;  // τ≤n X → X
};

inline Truncation truncate_le(const ComplexPtr& x, long n) {
    CocycleModule z = cocycle_module(*x, n);
    std::vector<ModulePtr> terms;
    std::vector<IntMatrix> diffs;
    std::vector<IntMatrix> incs;
    for (long m = x->lo(); m < n; ++m) {
        terms.push_back(x->term(m));
        incs.push_back(IntMatrix::identity(x->term(m)->rank()));
        if (m < n - 1) {
            diffs.push_back(x->diff(m));
        } else {
            // d^{n-1} lands in the cocycles; rewrite in their coordinates
            IntMatrix d = x->diff(m);
            IntMatrix re(z.incl.cols, d.cols);
            HermiteSolver sol(hstack(z.incl, x->term(n)->ab()->rels()));
            for (long j = 0; j < d.cols; ++j) {
                auto c = sol.solve(d.col(j));
                if (!c) throw std::logic_error("differential does not land in cocycles");
                c->resize(z.incl.cols);
                re.set_col(j, *c);
            }
            diffs.push_back(std::move(re));
        }
    }
    terms.push_back(z.module);
    incs.push_back(z.incl);
    Truncation out;
    out.complex = make_complex(x->group(), std::min(x->lo(), n), std::move(terms), std::move(diffs), false);
    out.incl = {out.complex, x, std::min(x->lo(), n), std::move(incs)};
    return out;
}

// τ≥n X: replace X^n by its coboundary quotient, drop lower degrees
struct CoTruncation {
    ComplexPtr complex;
    ChainMap proj;  // X → τ≥n X
};

inline CoTruncation truncate_ge(const ComplexPtr& x, long n) {
    std::vector<ModulePtr> terms;
    std::vector<IntMatrix> diffs;
    long hi = std::max(x->hi(), n);
    for (long m = n; m <= hi; ++m) {
        if (m == n) {
            GroupPtr ab = from_relations(x->term(n)->rank(),
                                         hstack(x->diff(n - 1), x->term(n)->ab()->rels()));
            ModulePtr held = x->term(n);
            terms.push_back(std::make_shared<GModule>(x->group(), ab, [held](long g, long j) {
                return held->act_col(g, j);
            }));
        } else {
            terms.push_back(x->term(m));
        }
        if (m < hi) diffs.push_back(x->diff(m));
    }
    CoTruncation out;
    out.complex = make_complex(x->group(), n, std::move(terms), std::move(diffs), false);
    std::vector<IntMatrix> projs;
    for (long m = n; m <= hi; ++m) projs.push_back(IntMatrix::identity(x->term(m)->rank()));
    out.proj = {x, out.complex, n, std::move(projs)};
    return out;
}

// cohomology of X at n, with machinery to move between cocycles and classes
class CohomologyDatum {
  public:
    CohomologyDatum(const ModuleComplex& x, long n) {
        IntMatrix K = lattice_kernel(x.diff(n), x.term(n + 1)->ab()->rels());
        IntMatrix dprev = x.diff(n - 1);
        if (x.term(n)->ab()->has_diagonal_rels()) {
            // entry reduction by relation columns preserves spans and class coordinates,
            // as long as the relation columns themselves stay untouched
            reduce_columns_mod(K, x.term(n)->ab()->moduli());
            reduce_columns_mod(dprev, x.term(n)->ab()->moduli());
        }
        IntMatrix bound = hstack(dprev, x.term(n)->ab()->rels());
        h_ = from_relations(K.cols, lattice_kernel(K, bound));
        lift_ = std::move(K);
        solver_ = std::make_unique<HermiteSolver>(hstack(lift_, bound));
        // induced group action on classes
        std::vector<IntMatrix> table(x.group()->order());
        for (long g = 0; g < x.group()->order(); ++g) {
            if (g == x.group()->id()) {
                table[g] = IntMatrix::identity(lift_.cols);
                continue;
            }
            IntMatrix act(lift_.cols, lift_.cols);
            for (long j = 0; j < lift_.cols; ++j)
                act.set_col(j, class_of(x.term(n)->act_vec(g, lift_.col(j))));
            table[g] = std::move(act);
        }
        mod_ = std::make_shared<GModule>(x.group(), h_, std::move(table), false);
    }

    const GroupPtr& group() const { return h_; }
    const ModulePtr& as_module() const { return mod_; }
    const IntMatrix& lift_matrix() const { return lift_; }

    IntVec lift(const IntVec& cls) const { return lift_.mul_vec(cls); }

    IntVec class_of(const IntVec& cocycle) const {
        auto y = solver_->solve(cocycle);
        if (!y) throw std::logic_error("class_of: vector is not a cocycle");
        return IntVec(y->begin(), y->begin() + lift_.cols);
    }

  private:
    GroupPtr h_;
    IntMatrix lift_;
    std::unique_ptr<HermiteSolver> solver_;
    ModulePtr mod_;
};

using CohomPtr = std::shared_ptr<const CohomologyDatum>;

// memoized cohomology, keyed on complex identity and degree
class CohomologyCache {
  public:
    CohomPtr get(const ComplexPtr& x, long n) {
        std::scoped_lock lk(mu_);
        auto key = std::make_pair(x.get(), n);
        auto it = map_.find(key);
        if (it != map_.end()) return it->second;
        auto d = std::make_shared<const CohomologyDatum>(*x, n);
        map_.emplace(key, d);
        keepalive_.push_back(x);
        return d;
    }

  private:
    std::mutex mu_;
    std::map<std::pair<const ModuleComplex*, long>, CohomPtr> map_;
    std::vector<ComplexPtr> keepalive_;
};

// map on cohomology induced by a chain-map component
inline FgAbMorphism induced_map(const CohomologyDatum& s, const CohomologyDatum& t, const IntMatrix& comp) {
    IntMatrix m(t.lift_matrix().cols, s.lift_matrix().cols);
    for (long j = 0; j < m.cols; ++j) m.set_col(j, t.class_of(comp.mul_vec(s.lift_matrix().col(j))));
    return unchecked_morphism(s.group(), t.group(), std::move(m));
}

struct SESOfComplexes {
    ChainMap inj, sur;
};

inline SESOfComplexes make_ses_of_complexes(ChainMap inj, ChainMap sur, bool validate = true) {
    if (inj.tgt != sur.src) throw std::invalid_argument("ses of complexes: middle terms differ");
    if (validate) {
        long lo = std::min({inj.src->lo(), inj.tgt->lo(), sur.tgt->lo()});
        long hi = std::max({inj.src->hi(), inj.tgt->hi(), sur.tgt->hi()});
        for (long n = lo; n <= hi; ++n) {
            FgAbMorphism i = unchecked_morphism(inj.src->term(n)->ab(), inj.tgt->term(n)->ab(), inj.comp(n));
            FgAbMorphism p = unchecked_morphism(sur.src->term(n)->ab(), sur.tgt->term(n)->ab(), sur.comp(n));
            if (!is_injective(i) || !is_surjective(p) || !is_exact_at(i, p))
                throw std::invalid_argument("ses of complexes: not exact in degree " + std::to_string(n));
        }
    }
    return {std::move(inj), std::move(sur)};
}

// one hinge of the long exact sequence: H^n A → H^n B → H^n C → H^{n+1} A
struct LesSegment {
    CohomPtr ha, hb, hc, ha1;
    FgAbMorphism fa, fb;      // induced maps
    FgAbMorphism connecting;  // H^n C → H^{n+1} A
};

// connecting morphism by the snake construction: lift, differentiate, pull back
inline FgAbMorphism connecting_map(const SESOfComplexes& s, long n, const CohomologyDatum& hc,
                                   const CohomologyDatum& ha1) {
    const ComplexPtr& b = s.inj.tgt;
    const ComplexPtr& c = s.sur.tgt;
    IntMatrix m(ha1.lift_matrix().cols, hc.lift_matrix().cols);
    const long nb = s.sur.comp(n).cols, na = s.inj.comp(n + 1).cols;
    HermiteSolver surs(hstack(s.sur.comp(n), c->term(n)->ab()->rels()));
    HermiteSolver injs(hstack(s.inj.comp(n + 1), b->term(n + 1)->ab()->rels()));
    for (long j = 0; j < m.cols; ++j) {
        auto zb = surs.solve(hc.lift_matrix().col(j));
        if (!zb) throw LiftFailure(n);
        zb->resize(nb);
        IntVec db = b->diff(n).mul_vec(*zb);
        auto za = injs.solve(db);
        if (!za) throw LiftFailure(n + 1);
        za->resize(na);
        m.set_col(j, ha1.class_of(*za));
    }
    return unchecked_morphism(hc.group(), ha1.group(), std::move(m));
}

inline LesSegment les_segment(const SESOfComplexes& s, long n, CohomologyCache& cache) {
    LesSegment seg;
    seg.ha = cache.get(s.inj.src, n);
    seg.hb = cache.get(s.inj.tgt, n);
    seg.hc = cache.get(s.sur.tgt, n);
    seg.ha1 = cache.get(s.inj.src, n + 1);
    seg.fa = induced_map(*seg.ha, *seg.hb, s.inj.comp(n));
    seg.fb = induced_map(*seg.hb, *seg.hc, s.sur.comp(n));
    seg.connecting = connecting_map(s, n, *seg.hc, *seg.ha1);
    return seg;
}

// the full ladder over a degree window, flattened to nodes and maps
struct LesDatum {
    std::vector<CohomPtr> nodes;
    std::vector<FgAbMorphism> maps;
};

inline LesDatum les_of_ses(const SESOfComplexes& s, long nlo, long nhi, CohomologyCache& cache) {
    LesDatum out;
    for (long n = nlo; n <= nhi; ++n) {
        LesSegment seg = les_segment(s, n, cache);
        if (out.nodes.empty()) out.nodes.push_back(seg.ha);
        out.nodes.push_back(seg.hb);
        out.nodes.push_back(seg.hc);
        out.nodes.push_back(seg.ha1);
        out.maps.push_back(seg.fa);
        out.maps.push_back(seg.fb);
        out.maps.push_back(seg.connecting);
    }
    return out;
}

inline bool quasi_iso_check(const ChainMap& f, long nlo, long nhi, CohomologyCache& cache) {
    for (long n = nlo; n <= nhi; ++n) {
        auto hs = cache.get(f.src, n);
        auto ht = cache.get(f.tgt, n);
        if (!is_isomorphism(induced_map(*hs, *ht, f.comp(n)))) return false;
    }
    return true;
}

}  // namespace lowterm

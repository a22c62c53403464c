#pragma once

// Free resolutions over integral group rings: the normalized bar resolution,
// projective resolutions by iterated free covers, and the horseshoe resolution
// of a short exact sequence.  On top of these sit hom complexes, Ext and group
// cohomology, and the induced-hom complex of a normal subgroup together with
// its comparison to classical subgroup cochains.

#include "lowterm/complexes.hpp"

namespace lowterm {

inline GrpPtr unit_group() {
    static GrpPtr g = cyclic_group(1);
    return g;
}

inline Subgroup whole_subgroup(GrpPtr g) {
    std::vector<long> all(g->order());
    for (long i = 0; i < g->order(); ++i) all[i] = i;
    return subgroup_from_elements(std::move(g), std::move(all));
}

// chain complex of free modules F_depth → … → F_1 → F_0 ↠ target
struct FreeResolution {
    GrpPtr grp;
    ModulePtr target;
    std::vector<long> ranks;             // ranks[p] = rank of F_p
    std::vector<GroupRingMatrix> diffs;  // diffs[p] : F_{p+1} → F_p
    IntMatrix aug;                       // generator images in target, rank(target) × ranks[0]

    long depth() const { return static_cast<long>(ranks.size()) - 1; }
};

// Z-matrix of a free-module map in the coordinates (generator, group element),
// generator-major: h·e_j ↦ Σ a·(hg)·e_i per term a·g of the (i,j) entry
inline IntMatrix group_ring_z_matrix(const GroupRingMatrix& f) {
    const long n = f.grp->order();
    IntMatrix out(f.rows * n, f.cols * n);
    for (long i = 0; i < f.rows; ++i)
        for (long j = 0; j < f.cols; ++j)
            for (const auto& [g, a] : f.e[i][j])
                for (long h = 0; h < n; ++h) out(i * n + f.grp->mul(h, g), j * n + h) += a;
    return out;
}

// Z-matrix of the equivariant map F_0 → target with the given generator images
inline IntMatrix images_z_matrix(const GModule& target, const IntMatrix& gens) {
    const long n = target.group()->order();
    IntMatrix out(target.rank(), gens.cols * n);
    for (long i = 0; i < gens.cols; ++i)
        for (long h = 0; h < n; ++h) out.set_col(i * n + h, target.act_vec(h, gens.col(i)));
    return out;
}

// normalized bar resolution of Z: rank_q = (|G|−1)^q over tuples of non-identity
// elements; boundary merges adjacent entries and drops degenerate tuples
struct BarData {
    FreeResolution res;
    std::vector<std::vector<std::vector<long>>> tuples;  // per degree, lexicographic
    std::vector<long> nonid;
    std::vector<long> pos;  // element → position in nonid, −1 for the identity

    long tuple_index(long q, const std::vector<long>& w) const {
        long idx = 0;
        for (long i = 0; i < q; ++i) idx = idx * static_cast<long>(nonid.size()) + pos[w[i]];
        return idx;
    }
};

inline BarData bar_resolution(GrpPtr grp, long depth) {
    BarData bar;
    const long n = grp->order();
    bar.pos.assign(n, -1);
    for (long a = 0; a < n; ++a)
        if (a != grp->id()) {
            bar.pos[a] = static_cast<long>(bar.nonid.size());
            bar.nonid.push_back(a);
        }
    bar.tuples.resize(depth + 1);
    bar.tuples[0] = {{}};
    for (long q = 1; q <= depth; ++q)
        for (const auto& w : bar.tuples[q - 1])
            for (long a : bar.nonid) {
                auto w2 = w;
                w2.push_back(a);
                bar.tuples[q].push_back(std::move(w2));
            }
    // lexicographic generation above appends on the right, so re-sorting is not needed:
    // index = Σ pos(w_i)·(n−1)^{q−1−i} matches generation order
    bar.res.grp = grp;
    bar.res.target = trivial_module(grp, free_group(1));
    for (long q = 0; q <= depth; ++q) bar.res.ranks.push_back(static_cast<long>(bar.tuples[q].size()));
    bar.res.aug = IntMatrix::of({{1}});
    for (long q = 1; q <= depth; ++q) {
        GroupRingMatrix d(grp, bar.res.ranks[q - 1], bar.res.ranks[q]);
        for (long col = 0; col < bar.res.ranks[q]; ++col) {
            const auto& w = bar.tuples[q][col];
            std::vector<long> head(w.begin() + 1, w.end());
            d.add_term(bar.tuple_index(q - 1, head), col, w[0], Int(1));
            for (long i = 0; i + 1 < q; ++i) {
                long prod = grp->mul(w[i], w[i + 1]);
                if (prod == grp->id()) continue;
                std::vector<long> merged;
                for (long t = 0; t < q; ++t) {
                    if (t == i) {
                        merged.push_back(prod);
                        ++t;  // skip w[i+1]
                    } else {
                        merged.push_back(w[t]);
                    }
                }
                d.add_term(bar.tuple_index(q - 1, merged), col, grp->id(), (i + 1) % 2 ? Int(-1) : Int(1));
            }
            std::vector<long> tail(w.begin(), w.end() - 1);
            d.add_term(bar.tuple_index(q - 1, tail), col, grp->id(), q % 2 ? Int(-1) : Int(1));
        }
        d.normalize();
        bar.res.diffs.push_back(std::move(d));
    }
    return bar;
}

// resolution by iterated free covers: each kernel's Z-basis becomes the next
// generating set, so the image of F_{p+1} is exactly the kernel at F_p
inline FreeResolution projective_resolution(const ModulePtr& m, long depth) {
    FreeResolution res;
    res.grp = m->group();
    res.target = m;
    const long n = res.grp->order();
    res.ranks.push_back(m->rank());
    res.aug = IntMatrix::identity(m->rank());
    if (depth == 0) return res;
    IntMatrix cur_kernel =
        lattice_kernel(images_z_matrix(*m, res.aug), m->ab()->rels());  // ⊆ Z^{ranks[0]·n}
    for (long p = 1; p <= depth; ++p) {
        long r = cur_kernel.cols;
        res.ranks.push_back(r);
        GroupRingMatrix d(res.grp, res.ranks[p - 1], r);
        for (long j = 0; j < r; ++j)
            for (long i = 0; i < res.ranks[p - 1]; ++i)
                for (long h = 0; h < n; ++h)
                    if (cur_kernel(i * n + h, j) != 0) d.add_term(i, j, h, cur_kernel(i * n + h, j));
        res.diffs.push_back(d);
        if (p < depth) cur_kernel = kernel_basis(group_ring_z_matrix(d));
    }
    return res;
}

// horseshoe: P(B)_p = P(A)_p ⊕ P(C)_p with a correction map solved degreewise
struct Horseshoe {
    FreeResolution pa, pb, pc;
    std::vector<GroupRingMatrix> iota, pi;  // split structure maps per degree
};

inline Horseshoe horseshoe_resolution(const ModuleSES& ses, long depth) {
    Horseshoe h;
    const ModulePtr& a = ses.inj.src;
    const ModulePtr& b = ses.inj.tgt;
    const ModulePtr& c = ses.sur.tgt;
    GrpPtr grp = a->group();
    const long n = grp->order();
    h.pa = projective_resolution(a, depth);
    h.pc = projective_resolution(c, depth);
    h.pb.grp = grp;
    h.pb.target = b;
    for (long p = 0; p <= depth; ++p) h.pb.ranks.push_back(h.pa.ranks[p] + h.pc.ranks[p]);

    // augmentation: A-generators through inj, C-generators through chosen lifts
    IntMatrix lifts(b->rank(), h.pc.ranks[0]);
    for (long j = 0; j < h.pc.ranks[0]; ++j) {
        auto l = preimage(ses.sur.as_fgab(), h.pc.aug.col(j));
        if (!l) throw std::logic_error("horseshoe: surjection admits no lift");
        lifts.set_col(j, *l);
    }
    h.pb.aug = hstack(ses.inj.mat.mul(h.pa.aug), lifts);

    std::vector<GroupRingMatrix> theta;  // theta[p] : P(C)_{p+1} → P(A)_p
    for (long p = 0; p + 1 <= depth; ++p) {
        GroupRingMatrix th(grp, h.pa.ranks[p], h.pc.ranks[p + 1]);
        IntMatrix dcz = group_ring_z_matrix(h.pc.diffs[p]);
        for (long j = 0; j < h.pc.ranks[p + 1]; ++j) {
            // d_C e_j in Z-coordinates of P(C)_p
            IntVec dc(dcz.rows, Int(0));
            for (long i = 0; i < dcz.rows; ++i) dc[i] = dcz(i, j * n + grp->id());
            std::optional<IntVec> x;
            if (p == 0) {
                // solve inj(aug_A x) = −lift(d_C e_j) in B
                IntVec y = images_z_matrix(*b, lifts).mul_vec(dc);
                auto apart = solve_mod(ses.inj.mat, vec_neg(y), b->ab()->rels());
                if (!apart) throw std::logic_error("horseshoe: correction misses the submodule");
                x = solve_mod(images_z_matrix(*a, h.pa.aug), *apart, a->ab()->rels());
            } else {
                // solve d_A x = −θ_{p−1}(d_C e_j) in the free module P(A)_{p−1}
                IntVec y = group_ring_z_matrix(theta[p - 1]).mul_vec(dc);
                x = solve_integer(group_ring_z_matrix(h.pa.diffs[p - 1]), vec_neg(y));
            }
            if (!x) throw std::logic_error("horseshoe: correction map has no solution");
            for (long i = 0; i < h.pa.ranks[p]; ++i)
                for (long g = 0; g < n; ++g)
                    if ((*x)[i * n + g] != 0) th.add_term(i, j, g, (*x)[i * n + g]);
        }
        theta.push_back(th);

        GroupRingMatrix d(grp, h.pb.ranks[p], h.pb.ranks[p + 1]);
        for (long i = 0; i < h.pa.ranks[p]; ++i) {
            for (long j = 0; j < h.pa.ranks[p + 1]; ++j) d.e[i][j] = h.pa.diffs[p].e[i][j];
            for (long j = 0; j < h.pc.ranks[p + 1]; ++j) d.e[i][h.pa.ranks[p + 1] + j] = th.e[i][j];
        }
        for (long i = 0; i < h.pc.ranks[p]; ++i)
            for (long j = 0; j < h.pc.ranks[p + 1]; ++j)
                d.e[h.pa.ranks[p] + i][h.pa.ranks[p + 1] + j] = h.pc.diffs[p].e[i][j];
        h.pb.diffs.push_back(std::move(d));
    }

    for (long p = 0; p <= depth; ++p) {
        GroupRingMatrix in(grp, h.pb.ranks[p], h.pa.ranks[p]);
        GroupRingMatrix pr(grp, h.pc.ranks[p], h.pb.ranks[p]);
        for (long i = 0; i < h.pa.ranks[p]; ++i) in.add_term(i, i, grp->id(), Int(1));
        for (long i = 0; i < h.pc.ranks[p]; ++i) pr.add_term(i, h.pa.ranks[p] + i, grp->id(), Int(1));
        h.iota.push_back(std::move(in));
        h.pi.push_back(std::move(pr));
    }
    return h;
}

// Hom_R(F_•, M) as a plain cochain complex in degrees 0..maxp
inline ComplexPtr hom_complex(const FreeResolution& p, const ModulePtr& m, long maxp) {
    if (maxp > p.depth()) throw std::invalid_argument("hom_complex: resolution too shallow");
    std::vector<ModulePtr> terms;
    std::vector<IntMatrix> diffs;
    for (long i = 0; i <= maxp; ++i) {
        GroupPtr ab = from_relations(p.ranks[i] * m->rank(),
                                     detail::block_diag_copies(m->ab()->rels(), p.ranks[i]));
        terms.push_back(trivial_module(unit_group(), ab));
        if (i < maxp) diffs.push_back(p.diffs[i].hom_matrix(*m));
    }
    return make_complex(unit_group(), 0, std::move(terms), std::move(diffs), false);
}

// Ext^0..Ext^maxi; the resolution must reach depth maxi+1 so that the top
// kernel is cut out by an honest differential
inline std::vector<CohomPtr> ext_groups(const FreeResolution& p, const ModulePtr& m, long maxi,
                                        CohomologyCache& cache) {
    ComplexPtr h = hom_complex(p, m, maxi + 1);
    std::vector<CohomPtr> out;
    for (long i = 0; i <= maxi; ++i) out.push_back(cache.get(h, i));
    return out;
}

inline std::vector<CohomPtr> group_cohomology(const GrpPtr& g, const ModulePtr& m, long maxi,
                                              CohomologyCache& cache) {
    FreeResolution p = projective_resolution(trivial_module(g, free_group(1)), maxi + 1);
    return ext_groups(p, m, maxi, cache);
}

// the complex D^q = Hom_{Z[N]}(bar_q(G), M) of modules over Q = G/N, together
// with the restriction comparison to the subgroup cochain complex C^q(N, M)
struct LhsComplex {
    GrpPtr g;
    Subgroup n;
    SubgroupGroup sg;
    QuotientGroup quot;
    ModulePtr m;
    BarData barg;
    std::vector<InducedHom> homs;  // one per degree 0..maxq
    ComplexPtr D;                  // over Q
    BarData barn;
    std::vector<InducedHom> nhoms;
    ComplexPtr CN;                    // over the trivial quotient N/N
    std::vector<IntMatrix> restrict_; // D^q → CN^q

    // conjugation chain map on CN^q induced by the quotient element qbar
    IntMatrix conjugation_on_cn(long q, long qbar) const {
        const long rm = m->rank();
        long gp = quot.section[qbar];
        long r0 = sg.to_parent[0];  // representative used by the trivial quotient of N
        long c0g = 0;               // single coset
        IntMatrix out(nhoms[q].dim(), nhoms[q].dim());
        long n0 = g->inv(r0);  // id = n0 · r0
        for (size_t ti = 0; ti < barn.tuples[q].size(); ++ti) {
            const auto& v = barn.tuples[q][ti];
            // w with w^g = v, i.e. w_i = g v_i g⁻¹
            std::vector<long> w;
            for (long vi : v) w.push_back(sg.from_parent[g->mul(g->mul(gp, sg.to_parent[vi]), g->inv(gp))]);
            long wi = barn.tuple_index(q, w);
            // (c_g φ)-coords(w) = act(r0 g n0) · φ-coords(v)
            long tw = g->mul(g->mul(r0, gp), n0);
            for (long col = 0; col < rm; ++col)
                for (const auto& [row, val] : m->act_col(tw, col))
                    out(nhoms[q].index(wi, c0g, row), nhoms[q].index(static_cast<long>(ti), c0g, col)) +=
                        val;
        }
        return out;
    }
};

inline LhsComplex lhs_complex(GrpPtr g, Subgroup n, ModulePtr m, long maxq) {
    LhsComplex L;
    L.g = g;
    L.n = n;
    L.sg = subgroup_as_group(n);
    L.quot = quotient_group(n);
    L.m = m;
    L.barg = bar_resolution(g, maxq);
    for (long q = 0; q <= maxq; ++q) L.homs.emplace_back(g, L.quot, L.barg.res.ranks[q], m);
    std::vector<ModulePtr> terms;
    std::vector<IntMatrix> diffs;
    for (long q = 0; q <= maxq; ++q) {
        terms.push_back(L.homs[q].mod());
        if (q < maxq) diffs.push_back(L.homs[q].precompose(L.homs[q + 1], L.barg.res.diffs[q]));
    }
    L.D = make_complex(L.quot.q, 0, std::move(terms), std::move(diffs), false);

    auto mres = restriction(m, L.sg);
    auto nquot = quotient_group(whole_subgroup(L.sg.sub));
    L.barn = bar_resolution(L.sg.sub, maxq);
    for (long q = 0; q <= maxq; ++q) L.nhoms.emplace_back(L.sg.sub, nquot, L.barn.res.ranks[q], mres);
    std::vector<ModulePtr> nterms;
    std::vector<IntMatrix> ndiffs;
    for (long q = 0; q <= maxq; ++q) {
        nterms.push_back(L.nhoms[q].mod());
        if (q < maxq) ndiffs.push_back(L.nhoms[q].precompose(L.nhoms[q + 1], L.barn.res.diffs[q]));
    }
    L.CN = make_complex(nquot.q, 0, std::move(nterms), std::move(ndiffs), false);

    // restriction: ψ(r0 e_w) = act(n')·φ-coords(w', c') where r0^G = n'·r_{c'}
    const long rm = m->rank();
    long r0 = L.sg.to_parent[nquot.section[0]];
    long cp = L.quot.coset_of[r0];
    long np = g->mul(r0, g->inv(L.quot.section[cp]));
    for (long q = 0; q <= maxq; ++q) {
        IntMatrix r(L.nhoms[q].dim(), L.homs[q].dim());
        for (size_t ti = 0; ti < L.barn.tuples[q].size(); ++ti) {
            std::vector<long> wg;
            for (long vi : L.barn.tuples[q][ti]) wg.push_back(L.sg.to_parent[vi]);
            long gi = L.barg.tuple_index(q, wg);
            for (long col = 0; col < rm; ++col)
                for (const auto& [row, val] : m->act_col(np, col))
                    r(L.nhoms[q].index(static_cast<long>(ti), 0, row), L.homs[q].index(gi, cp, col)) += val;
        }
        L.restrict_.push_back(std::move(r));
    }
    return L;
}

// cochain-level restriction C^q(G, M) → C^q(N, M): select subgroup tuples.
// Source coordinates are those of hom_complex(bar(G), M); target those of CN
inline IntMatrix classical_restriction(const LhsComplex& L, long q) {
    const long rm = L.m->rank();
    IntMatrix out(L.nhoms[q].dim(), L.barg.res.ranks[q] * rm);
    long r0 = L.sg.to_parent[0];
    // ψ(r0 e_w) = r0·φ(e_w) for a G-equivariant φ
    for (size_t ti = 0; ti < L.barn.tuples[q].size(); ++ti) {
        std::vector<long> wg;
        for (long vi : L.barn.tuples[q][ti]) wg.push_back(L.sg.to_parent[vi]);
        long gi = L.barg.tuple_index(q, wg);
        for (long col = 0; col < rm; ++col)
            for (const auto& [row, val] : L.m->act_col(r0, col))
                out(L.nhoms[q].index(static_cast<long>(ti), 0, row), gi * rm + col) += val;
    }
    return out;
}

// cochain-level inflation C^q(Q, A) → C^q(G, M) along a Q-module map incl : A → M^N ⊆ M.
// Tuples with an entry in N project to degenerate tuples and contribute zero
inline IntMatrix classical_inflation(const LhsComplex& L, const BarData& barq, const FgAbMorphism& incl,
                                     long q) {
    const long rm = L.m->rank();
    const long ra = incl.src->ambient_rank();
    IntMatrix out(L.barg.res.ranks[q] * rm, barq.res.ranks[q] * ra);
    for (long gi = 0; gi < L.barg.res.ranks[q]; ++gi) {
        const auto& w = L.barg.tuples[q][gi];
        std::vector<long> proj;
        bool degenerate = false;
        for (long wi : w) {
            long c = L.quot.coset_of[wi];
            if (c == L.quot.coset_of[L.g->id()]) {
                degenerate = true;
                break;
            }
            proj.push_back(c);
        }
        if (degenerate) continue;
        long qi = barq.tuple_index(q, proj);
        for (long col = 0; col < ra; ++col)
            for (long row = 0; row < rm; ++row)
                if (incl.mat(row, col) != 0) out(gi * rm + row, qi * ra + col) += incl.mat(row, col);
    }
    return out;
}

}  // namespace lowterm

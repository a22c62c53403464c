#pragma once

// Finite groups given by multiplication tables, their subgroups and quotients,
// and modules over them.  A module is a finitely presented abelian group with
// a group action; large induced modules expose their action column-by-column
// so no oversized dense matrix is ever materialized.

#include "lowterm/fgab.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <queue>

namespace lowterm {

// every column of m lies in the relation lattice of g
inline bool cols_vanish(const IntMatrix& m, const FgAbGroup& g) {
    for (long j = 0; j < m.cols; ++j)
        if (!g.contains_zero(m.col(j))) return false;
    return true;
}

struct NotAGroup : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotNormal : std::runtime_error {
    long g, n;
    NotNormal(long g_, long n_)
        : std::runtime_error("subgroup is not normal: conjugate of element " + std::to_string(n_) +
                             " by " + std::to_string(g_) + " falls outside"),
          g(g_), n(n_) {}
};

struct NotACocycle : std::runtime_error {
    long g, h;
    NotACocycle(long g_, long h_)
        : std::runtime_error("cocycle identity fails at pair (" + std::to_string(g_) + ", " +
                             std::to_string(h_) + ")"),
          g(g_), h(h_) {}
};

struct NotEquivariant : std::runtime_error {
    long gen;
    explicit NotEquivariant(long gen_)
        : std::runtime_error("map does not commute with the action of generator " + std::to_string(gen_)),
          gen(gen_) {}
};

class FiniteGroup {
  public:
    FiniteGroup(std::vector<std::vector<long>> table, std::vector<std::string> labels,
                std::vector<long> gens, std::string name)
        : mul_(std::move(table)), labels_(std::move(labels)), gens_(std::move(gens)), name_(std::move(name)) {
        const long n = static_cast<long>(mul_.size());
        if (n == 0) throw NotAGroup("empty table");
        for (const auto& row : mul_) {
            if (static_cast<long>(row.size()) != n) throw NotAGroup("table is not square");
            for (long v : row)
                if (v < 0 || v >= n) throw NotAGroup("table entry out of range");
        }
        if (static_cast<long>(labels_.size()) != n) throw NotAGroup("label count mismatch");
        id_ = -1;
        for (long e = 0; e < n; ++e) {
            bool ok = true;
            for (long a = 0; a < n && ok; ++a) ok = mul_[e][a] == a && mul_[a][e] == a;
            if (ok) {
                id_ = e;
                break;
            }
        }
        if (id_ < 0) throw NotAGroup("no identity element");
        inv_.assign(n, -1);
        for (long a = 0; a < n; ++a) {
            for (long b = 0; b < n; ++b)
                if (mul_[a][b] == id_ && mul_[b][a] == id_) inv_[a] = b;
            if (inv_[a] < 0) throw NotAGroup("element " + std::to_string(a) + " has no inverse");
        }
        for (long a = 0; a < n; ++a)
            for (long b = 0; b < n; ++b)
                for (long c = 0; c < n; ++c)
                    if (mul_[mul_[a][b]][c] != mul_[a][mul_[b][c]]) throw NotAGroup("not associative");
        for (long g : gens_)
            if (g < 0 || g >= n) throw NotAGroup("generator index out of range");
    }

    long order() const { return static_cast<long>(mul_.size()); }
    long mul(long a, long b) const { return mul_[a][b]; }
    long inv(long a) const { return inv_[a]; }
    long id() const { return id_; }
    const std::vector<long>& gens() const { return gens_; }
    const std::string& label(long a) const { return labels_[a]; }
    const std::string& name() const { return name_; }

    long element_of_label(const std::string& s) const {
        for (long a = 0; a < order(); ++a)
            if (labels_[a] == s) return a;
        throw std::invalid_argument("no element labeled '" + s + "' in " + name_);
    }

  private:
    std::vector<std::vector<long>> mul_;
    std::vector<long> inv_;
    std::vector<std::string> labels_;
    std::vector<long> gens_;
    std::string name_;
    long id_ = 0;
};

using GrpPtr = std::shared_ptr<const FiniteGroup>;

inline GrpPtr cyclic_group(long n) {
    std::vector<std::vector<long>> t(n, std::vector<long>(n));
    std::vector<std::string> lab(n);
    for (long a = 0; a < n; ++a) {
        for (long b = 0; b < n; ++b) t[a][b] = (a + b) % n;
        lab[a] = a == 0 ? "e" : (a == 1 ? "g" : "g" + std::to_string(a));
    }
    std::vector<long> gens = n > 1 ? std::vector<long>{1} : std::vector<long>{};
    return std::make_shared<FiniteGroup>(std::move(t), std::move(lab), std::move(gens),
                                         "C" + std::to_string(n));
}

inline GrpPtr klein_four_group() {
    std::vector<std::vector<long>> t(4, std::vector<long>(4));
    for (long a = 0; a < 4; ++a)
        for (long b = 0; b < 4; ++b) t[a][b] = a ^ b;
    return std::make_shared<FiniteGroup>(std::move(t), std::vector<std::string>{"e", "a", "b", "ab"},
                                         std::vector<long>{1, 2}, "K4");
}

inline GrpPtr symmetric3_group() {
    // permutations of {0,1,2}; composition (fg)(x) = f(g(x)); first three form A3
    std::vector<std::array<int, 3>> perms = {
        {0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
    std::vector<std::vector<long>> t(6, std::vector<long>(6));
    for (long a = 0; a < 6; ++a)
        for (long b = 0; b < 6; ++b) {
            std::array<int, 3> c;
            for (int x = 0; x < 3; ++x) c[x] = perms[a][perms[b][x]];
            t[a][b] = static_cast<long>(std::find(perms.begin(), perms.end(), c) - perms.begin());
        }
    return std::make_shared<FiniteGroup>(
        std::move(t), std::vector<std::string>{"e", "r", "r2", "s", "rs", "r2s"},
        std::vector<long>{1, 3}, "S3");
}

inline GrpPtr dihedral_group(long n) {
    // order 2n; index i<n is r^i, index n+i is r^i s
    const long N = 2 * n;
    auto enc = [n](long i, long f) { return f ? n + i : i; };
    std::vector<std::vector<long>> t(N, std::vector<long>(N));
    for (long i = 0; i < n; ++i)
        for (long fi = 0; fi < 2; ++fi)
            for (long j = 0; j < n; ++j)
                for (long fj = 0; fj < 2; ++fj) {
                    // (r^i s^fi)(r^j s^fj) = r^{i + j·(-1)^fi} s^{fi+fj}
                    long k = fi ? (i - j % n + n) % n : (i + j) % n;
                    t[enc(i, fi)][enc(j, fj)] = enc(k, fi ^ fj);
                }
    std::vector<std::string> lab(N);
    for (long i = 0; i < n; ++i) {
        lab[i] = i == 0 ? "e" : (i == 1 ? "r" : "r" + std::to_string(i));
        lab[n + i] = i == 0 ? "s" : (i == 1 ? "rs" : "r" + std::to_string(i) + "s");
    }
    return std::make_shared<FiniteGroup>(std::move(t), std::move(lab), std::vector<long>{1, n},
                                         "D" + std::to_string(n));
}

inline GrpPtr quaternion_group() {
    // 0:1 1:-1 2:i 3:-i 4:j 5:-j 6:k 7:-k
    auto enc = [](int sign, int axis) { return 2 * axis + (sign < 0 ? 1 : 0); };
    // unit table over axes 0:1 1:i 2:j 3:k
    static const int ax[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int sg[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
    std::vector<std::vector<long>> t(8, std::vector<long>(8));
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
            int sa = a % 2 ? -1 : 1, aa = a / 2;
            int sb = b % 2 ? -1 : 1, ab = b / 2;
            t[a][b] = enc(sa * sb * sg[aa][ab], ax[aa][ab]);
        }
    return std::make_shared<FiniteGroup>(
        std::move(t), std::vector<std::string>{"1", "-1", "i", "-i", "j", "-j", "k", "-k"},
        std::vector<long>{2, 4}, "Q8");
}

inline GrpPtr builtin_group(const std::string& name) {
    if (name == "K4" || name == "V4" || name == "klein4") return klein_four_group();
    if (name == "S3" || name == "symmetric3") return symmetric3_group();
    if (name == "Q8" || name == "quaternion8") return quaternion_group();
    if (name.size() > 1 && name[0] == 'C') return cyclic_group(std::stol(name.substr(1)));
    if (name.size() > 1 && name[0] == 'D') return dihedral_group(std::stol(name.substr(1)));
    throw std::invalid_argument("unknown group name '" + name + "'");
}

struct Subgroup {
    GrpPtr parent;
    std::vector<long> elems;  // sorted, contains the identity
};

inline Subgroup subgroup_from_elements(GrpPtr parent, std::vector<long> elems) {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    auto member = [&](long x) { return std::binary_search(elems.begin(), elems.end(), x); };
    if (!member(parent->id())) throw NotAGroup("subgroup must contain the identity");
    for (long a : elems) {
        if (a < 0 || a >= parent->order()) throw NotAGroup("subgroup element out of range");
        if (!member(parent->inv(a))) throw NotAGroup("subgroup not closed under inverse");
        for (long b : elems)
            if (!member(parent->mul(a, b))) throw NotAGroup("subgroup not closed under product");
    }
    return {std::move(parent), std::move(elems)};
}

inline Subgroup subgroup_generated_by(GrpPtr parent, const std::vector<long>& gens) {
    std::vector<long> elems{parent->id()};
    auto member = [&](long x) { return std::find(elems.begin(), elems.end(), x) != elems.end(); };
    std::queue<long> work;
    for (long g : gens)
        if (!member(g)) {
            elems.push_back(g);
            work.push(g);
        }
    work.push(parent->id());
    while (!work.empty()) {
        long a = work.front();
        work.pop();
        std::vector<long> snapshot = elems;
        for (long b : snapshot) {
            for (long c : {parent->mul(a, b), parent->mul(b, a), parent->inv(a)})
                if (!member(c)) {
                    elems.push_back(c);
                    work.push(c);
                }
        }
    }
    return subgroup_from_elements(parent, std::move(elems));
}

inline bool is_normal(const Subgroup& s) {
    auto member = [&](long x) { return std::binary_search(s.elems.begin(), s.elems.end(), x); };
    for (long g = 0; g < s.parent->order(); ++g)
        for (long n : s.elems)
            if (!member(s.parent->mul(s.parent->mul(g, n), s.parent->inv(g)))) return false;
    return true;
}

// a subgroup repackaged as a group of its own, with index translations
struct SubgroupGroup {
    GrpPtr sub;
    std::vector<long> to_parent;    // sub index → parent index
    std::vector<long> from_parent;  // parent index → sub index, -1 outside
};

inline SubgroupGroup subgroup_as_group(const Subgroup& s) {
    const long m = static_cast<long>(s.elems.size());
    SubgroupGroup out;
    out.to_parent = s.elems;
    out.from_parent.assign(s.parent->order(), -1);
    for (long i = 0; i < m; ++i) out.from_parent[s.elems[i]] = i;
    std::vector<std::vector<long>> t(m, std::vector<long>(m));
    std::vector<std::string> lab(m);
    for (long i = 0; i < m; ++i) {
        lab[i] = s.parent->label(s.elems[i]);
        for (long j = 0; j < m; ++j) t[i][j] = out.from_parent[s.parent->mul(s.elems[i], s.elems[j])];
    }
    // every element as a generator; minimality is irrelevant here
    std::vector<long> gens;
    for (long i = 0; i < m; ++i)
        if (s.elems[i] != s.parent->id()) gens.push_back(i);
    out.sub = std::make_shared<FiniteGroup>(std::move(t), std::move(lab), std::move(gens),
                                            s.parent->name() + "-sub" + std::to_string(m));
    return out;
}

struct QuotientGroup {
    GrpPtr parent;
    GrpPtr q;
    std::vector<long> coset_of;  // parent element → quotient element
    std::vector<long> section;   // quotient element → least parent representative
};

inline QuotientGroup quotient_group(const Subgroup& n) {
    for (long g = 0; g < n.parent->order(); ++g)
        for (long h : n.elems) {
            long c = n.parent->mul(n.parent->mul(g, h), n.parent->inv(g));
            if (!std::binary_search(n.elems.begin(), n.elems.end(), c)) throw NotNormal(g, h);
        }
    const long N = n.parent->order();
    QuotientGroup out;
    out.parent = n.parent;
    out.coset_of.assign(N, -1);
    for (long g = 0; g < N; ++g) {
        if (out.coset_of[g] >= 0) continue;
        long rep = g;  // elements scanned in increasing order, so g is the least of its coset
        long idx = static_cast<long>(out.section.size());
        out.section.push_back(rep);
        for (long h : n.elems) out.coset_of[n.parent->mul(rep, h)] = idx;
    }
    const long Q = static_cast<long>(out.section.size());
    std::vector<std::vector<long>> t(Q, std::vector<long>(Q));
    std::vector<std::string> lab(Q);
    for (long a = 0; a < Q; ++a) {
        lab[a] = "[" + n.parent->label(out.section[a]) + "]";
        for (long b = 0; b < Q; ++b)
            t[a][b] = out.coset_of[n.parent->mul(out.section[a], out.section[b])];
    }
    std::vector<long> gens;
    for (long a = 0; a < Q; ++a)
        if (out.section[a] != n.parent->id()) gens.push_back(a);
    out.q = std::make_shared<FiniteGroup>(std::move(t), std::move(lab), std::move(gens),
                                          n.parent->name() + "/N");
    return out;
}

using SparseVec = std::vector<std::pair<long, Int>>;

inline IntVec densify(const SparseVec& s, long n) {
    IntVec v(n, Int(0));
    for (const auto& [i, c] : s) v[i] += c;
    return v;
}

class GModule {
  public:
    using ColFn = std::function<SparseVec(long g, long j)>;

    // lazy column-action module; correctness is the caller's responsibility
    GModule(GrpPtr grp, GroupPtr ab, ColFn cols)
        : grp_(std::move(grp)), ab_(std::move(ab)), cols_(std::move(cols)) {}

    // explicit module from a full action table
    GModule(GrpPtr grp, GroupPtr ab, std::vector<IntMatrix> table, bool validate = true)
        : grp_(std::move(grp)), ab_(std::move(ab)), dense_(std::move(table)) {
        if (static_cast<long>(dense_.size()) != grp_->order())
            throw std::invalid_argument("action table: one matrix per group element required");
        for (const auto& m : dense_)
            if (m.rows != rank() || m.cols != rank())
                throw std::invalid_argument("action table: matrix dimensions must match module rank");
        if (validate) validate_table();
    }

    const GrpPtr& group() const { return grp_; }
    const GroupPtr& ab() const { return ab_; }
    long rank() const { return ab_->ambient_rank(); }

    SparseVec act_col(long g, long j) const {
        if (!dense_.empty()) {
            SparseVec s;
            for (long i = 0; i < rank(); ++i)
                if (dense_[g](i, j) != 0) s.emplace_back(i, dense_[g](i, j));
            return s;
        }
        return cols_(g, j);
    }

    IntVec act_vec(long g, const IntVec& x) const {
        if (!dense_.empty()) return dense_[g].mul_vec(x);
        IntVec out(rank(), Int(0));
        for (long j = 0; j < rank(); ++j) {
            if (x[j] == 0) continue;
            for (const auto& [i, c] : cols_(g, j)) out[i] += c * x[j];
        }
        return out;
    }

    IntMatrix act(long g) const {
        if (!dense_.empty()) return dense_[g];
        IntMatrix m(rank(), rank());
        for (long j = 0; j < rank(); ++j)
            for (const auto& [i, c] : cols_(g, j)) m(i, j) += c;
        return m;
    }

  private:
    void validate_table() const {
        const long n = grp_->order();
        const IntMatrix& R = ab_->rels();
        for (long g = 0; g < n; ++g)
            for (long j = 0; j < R.cols; ++j)
                if (!ab_->contains_zero(dense_[g].mul_vec(R.col(j))))
                    throw std::invalid_argument("action of element " + std::to_string(g) +
                                                " does not respect module relations");
        if (!cols_vanish(dense_[grp_->id()].sub(IntMatrix::identity(rank())), *ab_))
            throw NotAGroup("action of the identity is not the identity");
        for (long a = 0; a < n; ++a)
            for (long b = 0; b < n; ++b) {
                IntMatrix d = dense_[a].mul(dense_[b]).sub(dense_[grp_->mul(a, b)]);
                if (!cols_vanish(d, *ab_)) throw NotAGroup("action is not multiplicative");
            }
    }

    GrpPtr grp_;
    GroupPtr ab_;
    ColFn cols_;
    std::vector<IntMatrix> dense_;
};

using ModulePtr = std::shared_ptr<const GModule>;

// action table from matrices for the group's generator list, by closure
inline ModulePtr module_from_generator_actions(GrpPtr grp, GroupPtr ab, const std::vector<IntMatrix>& gen_act,
                                               bool validate = true) {
    if (gen_act.size() != grp->gens().size())
        throw std::invalid_argument("one action matrix per group generator required");
    const long n = grp->order();
    std::vector<IntMatrix> table(n);
    std::vector<bool> known(n, false);
    table[grp->id()] = IntMatrix::identity(ab->ambient_rank());
    known[grp->id()] = true;
    bool progress = true;
    while (progress) {
        progress = false;
        for (size_t s = 0; s < gen_act.size(); ++s) {
            long gs = grp->gens()[s];
            for (long a = 0; a < n; ++a) {
                if (!known[a]) continue;
                long b = grp->mul(gs, a);
                if (known[b]) continue;
                table[b] = gen_act[s].mul(table[a]);
                known[b] = true;
                progress = true;
            }
        }
    }
    for (long a = 0; a < n; ++a)
        if (!known[a]) throw NotAGroup("generators do not generate the group");
    return std::make_shared<GModule>(std::move(grp), std::move(ab), std::move(table), validate);
}

inline ModulePtr trivial_module(GrpPtr grp, GroupPtr ab) {
    std::vector<IntMatrix> table(grp->order(), IntMatrix::identity(ab->ambient_rank()));
    return std::make_shared<GModule>(std::move(grp), std::move(ab), std::move(table), false);
}

struct GModuleMorphism {
    ModulePtr src, tgt;
    IntMatrix mat;

    FgAbMorphism as_fgab() const { return unchecked_morphism(src->ab(), tgt->ab(), mat); }
};

inline GModuleMorphism make_gmodule_morphism(ModulePtr src, ModulePtr tgt, IntMatrix mat) {
    FgAbMorphism f = make_morphism(src->ab(), tgt->ab(), std::move(mat));
    for (long gen : src->group()->gens()) {
        IntMatrix lhs = f.mat.mul(src->act(gen));
        IntMatrix rhs = tgt->act(gen).mul(f.mat);
        if (!cols_vanish(lhs.sub(rhs), *tgt->ab())) throw NotEquivariant(gen);
    }
    return {std::move(src), std::move(tgt), std::move(f.mat)};
}

struct ModuleSES {
    GModuleMorphism inj;  // A → B
    GModuleMorphism sur;  // B → C
};

inline ModuleSES make_module_ses(GModuleMorphism inj, GModuleMorphism sur) {
    if (!is_injective(inj.as_fgab())) throw std::invalid_argument("ses: first map is not injective");
    if (!is_surjective(sur.as_fgab())) throw std::invalid_argument("ses: second map is not surjective");
    if (!is_exact_at(inj.as_fgab(), sur.as_fgab())) throw std::invalid_argument("ses: not exact in the middle");
    return {std::move(inj), std::move(sur)};
}

namespace detail {
inline IntMatrix block_diag_copies(const IntMatrix& m, long k) {
    IntMatrix out(m.rows * k, m.cols * k);
    for (long i = 0; i < k; ++i) out.set_block(i * m.rows, i * m.cols, m);
    return out;
}
}  // namespace detail

struct FixedPoints {
    ModulePtr module;    // over the quotient group
    FgAbMorphism incl;   // underlying inclusion into the parent module
};

// subgroup invariants M^N with its residual action of parent/N
inline FixedPoints fixed_points(const ModulePtr& m, const Subgroup& n, const QuotientGroup& quot) {
    const long r = m->rank();
    std::vector<long> nontriv;
    for (long h : n.elems)
        if (h != m->group()->id()) nontriv.push_back(h);
    const long k = static_cast<long>(nontriv.size());
    IntMatrix stacked(k * r, r);
    for (long i = 0; i < k; ++i)
        stacked.set_block(i * r, 0, m->act(nontriv[i]).sub(IntMatrix::identity(r)));
    IntMatrix K = k == 0 ? IntMatrix::identity(r)
                         : lattice_kernel(stacked, detail::block_diag_copies(m->ab()->rels(), k));
    GroupPtr sub = from_relations(K.cols, lattice_kernel(K, m->ab()->rels()));

    std::vector<IntMatrix> table(quot.q->order());
    for (long c = 0; c < quot.q->order(); ++c) {
        IntMatrix gK = m->act(quot.section[c]).mul(K);
        IntMatrix act(K.cols, K.cols);
        for (long j = 0; j < K.cols; ++j) {
            // the invariant sublattice is preserved by the full group action
            auto x = solve_mod(K, gK.col(j), m->ab()->rels());
            if (!x) throw std::logic_error("fixed points: action does not preserve invariants");
            act.set_col(j, *x);
        }
        table[c] = std::move(act);
    }
    FixedPoints out;
    out.module = std::make_shared<GModule>(quot.q, sub, std::move(table), false);
    out.incl = unchecked_morphism(sub, m->ab(), K);
    return out;
}

// quotient-group module viewed over the parent through the projection
inline ModulePtr inflation(const QuotientGroup& quot, ModulePtr qmod) {
    GrpPtr parent = quot.parent;
    std::vector<long> coset = quot.coset_of;
    ModulePtr held = std::move(qmod);
    return std::make_shared<GModule>(parent, held->ab(), [held, coset](long g, long j) {
        return held->act_col(coset[g], j);
    });
}

// parent-group module viewed over a subgroup
inline ModulePtr restriction(const ModulePtr& m, const SubgroupGroup& sg) {
    ModulePtr held = m;
    std::vector<long> up = sg.to_parent;
    return std::make_shared<GModule>(sg.sub, held->ab(), [held, up](long h, long j) {
        return held->act_col(up[h], j);
    });
}

// extension of the trivial module Z by A along a 1-cocycle u : Q → A,
// u(gh) = u(g) + g·u(h); yields 0 → A → B → Z → 0
inline ModuleSES extension_from_cocycle(const ModulePtr& a, const std::vector<IntVec>& u) {
    GrpPtr q = a->group();
    const long n = q->order();
    const long r = a->rank();
    if (static_cast<long>(u.size()) != n)
        throw std::invalid_argument("cocycle: one value per group element required");
    for (const auto& v : u)
        if (static_cast<long>(v.size()) != r) throw std::invalid_argument("cocycle: value of wrong rank");
    if (!a->ab()->contains_zero(u[q->id()])) throw NotACocycle(q->id(), q->id());
    for (long g = 0; g < n; ++g)
        for (long h = 0; h < n; ++h) {
            IntVec want = vec_add(u[g], a->act_vec(g, u[h]));
            if (!a->ab()->eq(u[q->mul(g, h)], want)) throw NotACocycle(g, h);
        }
    GroupPtr bab = from_relations(r + 1, vstack(a->ab()->rels(), IntMatrix(1, a->ab()->rels().cols)));
    std::vector<IntMatrix> table(n);
    for (long g = 0; g < n; ++g) {
        IntMatrix m(r + 1, r + 1);
        m.set_block(0, 0, a->act(g));
        for (long i = 0; i < r; ++i) m(i, r) = u[g][i];
        m(r, r) = 1;
        table[g] = std::move(m);
    }
    auto b = std::make_shared<GModule>(q, bab, std::move(table), false);
    auto c = trivial_module(q, free_group(1));
    IntMatrix inj(r + 1, r);
    for (long i = 0; i < r; ++i) inj(i, i) = 1;
    IntMatrix sur(1, r + 1);
    sur(0, r) = 1;
    return make_module_ses(make_gmodule_morphism(a, b, std::move(inj)),
                           make_gmodule_morphism(b, c, std::move(sur)));
}

// sparse matrix over the integral group ring
struct GroupRingMatrix {
    GrpPtr grp;
    long rows = 0, cols = 0;
    std::vector<std::vector<SparseVec>> e;  // e[i][j]: list of (element, coefficient)

    GroupRingMatrix() = default;
    GroupRingMatrix(GrpPtr g, long r, long c)
        : grp(std::move(g)), rows(r), cols(c), e(r, std::vector<SparseVec>(c)) {}

    void add_term(long i, long j, long elem, Int coeff) { e[i][j].emplace_back(elem, std::move(coeff)); }

    void normalize() {
        for (auto& row : e)
            for (auto& cell : row) {
                std::map<long, Int> acc;
                for (const auto& [g, c] : cell) acc[g] += c;
                cell.clear();
                for (auto& [g, c] : acc)
                    if (c != 0) cell.emplace_back(g, std::move(c));
            }
    }

    bool is_zero() const {
        for (const auto& row : e)
            for (const auto& cell : row) {
                std::map<long, Int> acc;
                for (const auto& [g, c] : cell) acc[g] += c;
                for (const auto& [g, c] : acc)
                    if (c != 0) return false;
            }
        return true;
    }

    // matrix of φ ↦ φ∘F on Hom_R(R^rows, M) → Hom_R(R^cols, M), generator-major
    // coordinates; left-linearity gives (φ∘F)(e_j) = Σ_i F_ij·φ(e_i)
    IntMatrix hom_matrix(const GModule& m) const {
        const long r = m.rank();
        IntMatrix out(cols * r, rows * r);
        for (long i = 0; i < rows; ++i)
            for (long j = 0; j < cols; ++j)
                for (const auto& [g, c] : e[i][j])
                    for (long col = 0; col < r; ++col)
                        for (const auto& [row, v] : m.act_col(g, col)) out(j * r + row, i * r + col) += c * v;
        return out;
    }
};

// matrix of the composite F∘G of maps of free left modules, with F(e_j) = Σ_i F_ij e_i.
// Left-linearity reverses the ring product: (F∘G)_ik = Σ_j G_jk · F_ij in Z[grp]
inline GroupRingMatrix compose_maps(const GroupRingMatrix& f, const GroupRingMatrix& g) {
    if (f.cols != g.rows) throw std::invalid_argument("compose_maps: dimension mismatch");
    GroupRingMatrix out(f.grp, f.rows, g.cols);
    for (long i = 0; i < f.rows; ++i)
        for (long j = 0; j < f.cols; ++j) {
            if (f.e[i][j].empty()) continue;
            for (long k = 0; k < g.cols; ++k)
                for (const auto& [gg, cg] : g.e[j][k])
                    for (const auto& [gf, cf] : f.e[i][j]) out.add_term(i, k, f.grp->mul(gg, gf), cg * cf);
        }
    out.normalize();
    return out;
}

// the Q-module Hom_{Z[N]}(Z[G]^r, M) for N normal in G with quotient Q.
// Coordinates are triples (generator, coset, M-coordinate), generator-major.
class InducedHom {
    struct State {
        GrpPtr g;
        QuotientGroup quot;
        ModulePtr m;
        long r, k, rm;

        long index(long gen, long coset, long mcoord) const { return (gen * k + coset) * rm + mcoord; }

        SparseVec col(long qg, long j) const {
            // (q·φ)(r_c e_i) = g n'·φ(r_{c'} e_i)  where  g = section(q),  g⁻¹ r_c = n' r_{c'}
            long gen = j / (k * rm);
            long c_in = (j / rm) % k;
            long mcoord = j % rm;
            long gs = quot.section[qg];
            SparseVec out;
            for (long c = 0; c < k; ++c) {
                long x = g->mul(g->inv(gs), quot.section[c]);
                long cp = quot.coset_of[x];
                if (cp != c_in) continue;
                long np = g->mul(x, g->inv(quot.section[cp]));
                long gnp = g->mul(gs, np);
                for (const auto& [row, v] : m->act_col(gnp, mcoord)) out.emplace_back(index(gen, c, row), v);
            }
            return out;
        }
    };

  public:
    InducedHom(GrpPtr g, QuotientGroup quot, long free_rank, ModulePtr m) {
        st_ = std::make_shared<State>();
        st_->g = std::move(g);
        st_->quot = std::move(quot);
        st_->m = std::move(m);
        st_->r = free_rank;
        st_->k = st_->quot.q->order();
        st_->rm = st_->m->rank();
        GroupPtr ab = from_relations(dim(), detail::block_diag_copies(st_->m->ab()->rels(), st_->r * st_->k));
        auto st = st_;
        mod_ = std::make_shared<GModule>(st_->quot.q, ab, [st](long qg, long j) { return st->col(qg, j); });
    }

    long dim() const { return st_->r * st_->k * st_->rm; }
    long free_rank() const { return st_->r; }
    const ModulePtr& mod() const { return mod_; }
    const QuotientGroup& quot() const { return st_->quot; }
    const ModulePtr& coeffs() const { return st_->m; }

    long index(long gen, long coset, long mcoord) const { return st_->index(gen, coset, mcoord); }

    // φ ↦ φ∘F for a group-ring matrix F : Z[G]^{to.r} → Z[G]^{this.r};
    // left-linearity gives φ(r_c F_ij e_i) = a·act(n)·φ(r_{c'} e_i) per term a·g of F_ij
    IntMatrix precompose(const InducedHom& to, const GroupRingMatrix& F) const {
        const State& s = *st_;
        if (F.rows != s.r || F.cols != to.st_->r) throw std::invalid_argument("precompose: rank mismatch");
        IntMatrix out(to.dim(), dim());
        for (long j = 0; j < to.st_->r; ++j)
            for (long c = 0; c < s.k; ++c) {
                long rc = s.quot.section[c];
                for (long i = 0; i < s.r; ++i)
                    for (const auto& [g, a] : F.e[i][j]) {
                        // r_c g = n r_{c'}
                        long x = s.g->mul(rc, g);
                        long cp = s.quot.coset_of[x];
                        long n = s.g->mul(x, s.g->inv(s.quot.section[cp]));
                        for (long col = 0; col < s.rm; ++col)
                            for (const auto& [row, v] : s.m->act_col(n, col))
                                out(to.index(j, c, row), index(i, cp, col)) += a * v;
                    }
            }
        return out;
    }

    // φ ↦ (φ(e_1),…,φ(e_r)) ∈ M^r
    IntMatrix evaluate_at_identity() const {
        const State& s = *st_;
        IntMatrix out(s.r * s.rm, dim());
        long c0 = s.quot.coset_of[s.g->id()];
        long n0 = s.g->inv(s.quot.section[c0]);  // id = n0 · r_{c0}
        for (long i = 0; i < s.r; ++i)
            for (long col = 0; col < s.rm; ++col)
                for (const auto& [row, v] : s.m->act_col(n0, col)) out(i * s.rm + row, index(i, c0, col)) += v;
        return out;
    }

  private:
    std::shared_ptr<State> st_;
    ModulePtr mod_;
};

}  // namespace lowterm

#pragma once

// Finitely presented abelian groups Z^n / colLattice(R), their morphisms, and
// the kernel/image/cokernel calculus.  Groups are immutable once built; heavy
// normal-form data is computed lazily.  Subobjects and quotients are always
// fresh presentations plus structure maps; equality of elements is membership
// of the difference in the relation lattice.

#include "lowterm/intmat.hpp"

#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <vector>

namespace lowterm {

struct InfiniteGroup : std::runtime_error {
    InfiniteGroup() : std::runtime_error("group has free rank > 0") {}
};

struct NotWellDefined : std::runtime_error {
    long relation_col;
    explicit NotWellDefined(long col)
        : std::runtime_error("matrix does not respect source relation column " + std::to_string(col)),
          relation_col(col) {}
};

// normalize a multiset of torsion moduli into a divisor chain, dropping 1s
inline IntVec divisor_chain(IntVec v) {
    for (auto& x : v) x = iabs(x);
    std::erase_if(v, [](const Int& x) { return x == 0; });
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < v.size(); ++i)
            for (size_t j = i + 1; j < v.size(); ++j) {
                if (v[j] % v[i] == 0) continue;
                Int g = boost::multiprecision::gcd(v[i], v[j]);
                Int l = v[i] / g * v[j];
                v[i] = g;
                v[j] = l;
                changed = true;
            }
    }
    std::sort(v.begin(), v.end());
    std::erase_if(v, [](const Int& x) { return x == 1; });
    return v;
}

struct GroupShape {
    long free_rank = 0;
    IntVec divisors;  // chain, entries > 1

    bool operator==(const GroupShape&) const = default;

    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (long i = 0; i < free_rank; ++i) {
            os << (first ? "" : " + ") << "Z";
            first = false;
        }
        for (const auto& d : divisors) {
            os << (first ? "" : " + ") << "Z/" << d;
            first = false;
        }
        if (first) os << "0";
        return os.str();
    }
};

class FgAbGroup {
  public:
    FgAbGroup(long ambient, IntMatrix rels) : n_(ambient), rels_(std::move(rels)) {
        if (rels_.rows != n_ && !(rels_.rows == 0 && rels_.cols == 0))
            throw std::invalid_argument("relations: row count must equal ambient rank");
        if (rels_.rows == 0 && rels_.cols == 0) rels_ = IntMatrix(n_, 0);
        diagonal_ = diagonal_like(rels_);
        if (diagonal_) {
            moduli_.assign(n_, Int(0));
            for (long j = 0; j < rels_.cols; ++j)
                for (long i = 0; i < n_; ++i)
                    if (rels_(i, j) != 0)
                        moduli_[i] = boost::multiprecision::gcd(moduli_[i], iabs(rels_(i, j)));
            // canonical diagonal presentation
            std::vector<long> nz;
            for (long i = 0; i < n_; ++i)
                if (moduli_[i] != 0) nz.push_back(i);
            IntMatrix d(n_, static_cast<long>(nz.size()));
            for (size_t j = 0; j < nz.size(); ++j) d(nz[j], static_cast<long>(j)) = moduli_[nz[j]];
            rels_ = std::move(d);
        } else if (n_ <= 256) {
            rels_ = lattice_basis(rels_);
        }
    }

    long ambient_rank() const { return n_; }
    const IntMatrix& rels() const { return rels_; }
    bool has_diagonal_rels() const { return diagonal_; }
    const IntVec& moduli() const { return moduli_; }  // valid only when diagonal

    const SmithForm& snf() const {
        std::scoped_lock lk(mu_);
        if (!snf_) snf_ = smith_normal_form(rels_);
        return *snf_;
    }

    GroupShape shape() const {
        std::scoped_lock lk(mu_);
        if (!shape_) {
            GroupShape s;
            if (diagonal_) {
                s.divisors = divisor_chain(moduli_);
                long torsion = 0;
                for (const auto& m : moduli_)
                    if (m != 0) ++torsion;
                s.free_rank = n_ - torsion;
            } else {
                if (!snf_) snf_ = smith_normal_form(rels_);
                s.free_rank = n_ - static_cast<long>(snf_->d.size());
                for (const auto& d : snf_->d)
                    if (d != 1) s.divisors.push_back(d);
            }
            shape_ = s;
        }
        return *shape_;
    }

    bool is_trivial() const {
        auto s = shape();
        return s.free_rank == 0 && s.divisors.empty();
    }

    std::optional<Int> order() const {
        auto s = shape();
        if (s.free_rank > 0) return std::nullopt;
        Int o = 1;
        for (const auto& d : s.divisors) o *= d;
        return o;
    }

    bool contains_zero(const IntVec& x) const {
        if (static_cast<long>(x.size()) != n_) throw std::invalid_argument("element: wrong length");
        if (diagonal_) {
            for (long i = 0; i < n_; ++i) {
                if (moduli_[i] == 0) {
                    if (x[i] != 0) return false;
                } else if (x[i] % moduli_[i] != 0) {
                    return false;
                }
            }
            return true;
        }
        return rel_solver().solve(x).has_value();
    }

    bool eq(const IntVec& x, const IntVec& y) const { return contains_zero(vec_sub(x, y)); }

    IntVec canonical_rep(const IntVec& x) const {
        if (diagonal_) {
            IntVec r = x;
            for (long i = 0; i < n_; ++i)
                if (moduli_[i] != 0) {
                    r[i] %= moduli_[i];
                    if (r[i] < 0) r[i] += moduli_[i];
                }
            return r;
        }
        const SmithForm& s = snf();
        IntVec y = s.U.mul_vec(x);
        for (size_t i = 0; i < s.d.size(); ++i) {
            y[i] %= s.d[i];
            if (y[i] < 0) y[i] += s.d[i];
        }
        return s.uinv.mul_vec(y);
    }

    // all elements as canonical representatives, deterministic order
    std::vector<IntVec> enumerate_elements(size_t cap = 1u << 22) const {
        auto s = shape();
        if (s.free_rank > 0) throw InfiniteGroup();
        std::vector<IntVec> out;
        if (diagonal_) {
            IntVec cur(n_, Int(0));
            while (true) {
                out.push_back(cur);
                if (out.size() > cap) throw std::runtime_error("enumerate_elements: too many elements");
                long i = 0;
                while (i < n_ && (moduli_[i] == 0 || ++cur[i] == moduli_[i])) cur[i++] = 0;
                if (i == n_) break;
            }
            return out;
        }
        const SmithForm& sf = snf();
        IntVec d = sf.d;
        IntVec cur(d.size(), Int(0));
        while (true) {
            IntVec y(n_, Int(0));
            for (size_t i = 0; i < d.size(); ++i) y[i] = cur[i];
            out.push_back(canonical_rep(sf.uinv.mul_vec(y)));
            if (out.size() > cap) throw std::runtime_error("enumerate_elements: too many elements");
            size_t i = 0;
            while (i < d.size() && ++cur[i] == d[i]) cur[i++] = 0;
            if (i == d.size()) break;
        }
        return out;
    }

  private:
    const HermiteSolver& rel_solver() const {
        std::scoped_lock lk(mu_);
        if (!rel_solver_) rel_solver_ = std::make_unique<HermiteSolver>(rels_);
        return *rel_solver_;
    }

    long n_;
    IntMatrix rels_;
    bool diagonal_ = false;
    IntVec moduli_;
    mutable std::mutex mu_;
    mutable std::optional<SmithForm> snf_;
    mutable std::optional<GroupShape> shape_;
    mutable std::unique_ptr<HermiteSolver> rel_solver_;
};

using GroupPtr = std::shared_ptr<const FgAbGroup>;

inline GroupPtr from_relations(long ambient, IntMatrix rels) {
    return std::make_shared<FgAbGroup>(ambient, std::move(rels));
}

inline GroupPtr free_group(long rank) { return from_relations(rank, IntMatrix(rank, 0)); }

inline GroupPtr trivial_group() { return free_group(0); }

inline GroupPtr cyclic_fgab(const Int& m) {
    IntMatrix r(1, 1);
    r(0, 0) = m;
    return from_relations(1, std::move(r));
}

struct FgAbElement {
    GroupPtr group;
    IntVec coords;
};

struct FgAbMorphism {
    GroupPtr src, tgt;
    IntMatrix mat;  // tgt.ambient × src.ambient

    IntVec apply(const IntVec& x) const { return mat.mul_vec(x); }

    FgAbMorphism then(const FgAbMorphism& g) const {  // g ∘ this
        return {src, g.tgt, g.mat.mul(mat)};
    }

    FgAbMorphism add(const FgAbMorphism& g) const { return {src, tgt, mat.add(g.mat)}; }
    FgAbMorphism sub(const FgAbMorphism& g) const { return {src, tgt, mat.sub(g.mat)}; }
    FgAbMorphism neg() const { return {src, tgt, mat.neg()}; }

    bool is_zero_morphism() const {
        for (long j = 0; j < mat.cols; ++j)
            if (!tgt->contains_zero(mat.col(j))) return false;
        return true;
    }

    bool eq(const FgAbMorphism& g) const {
        IntMatrix d = mat.sub(g.mat);
        for (long j = 0; j < d.cols; ++j)
            if (!tgt->contains_zero(d.col(j))) return false;
        return true;
    }
};

inline FgAbMorphism make_morphism(GroupPtr src, GroupPtr tgt, IntMatrix mat) {
    if (mat.rows != tgt->ambient_rank() || mat.cols != src->ambient_rank())
        throw std::invalid_argument("make_morphism: dimension mismatch");
    if (tgt->has_diagonal_rels()) reduce_columns_mod(mat, tgt->moduli());
    const IntMatrix& R = src->rels();
    for (long j = 0; j < R.cols; ++j)
        if (!tgt->contains_zero(mat.mul_vec(R.col(j)))) throw NotWellDefined(j);
    return {std::move(src), std::move(tgt), std::move(mat)};
}

// construction-internal variant: well-definedness holds by construction
inline FgAbMorphism unchecked_morphism(GroupPtr src, GroupPtr tgt, IntMatrix mat) {
    if (tgt->has_diagonal_rels()) reduce_columns_mod(mat, tgt->moduli());
    return {std::move(src), std::move(tgt), std::move(mat)};
}

inline FgAbMorphism identity_morphism(GroupPtr g) {
    long n = g->ambient_rank();
    return {g, g, IntMatrix::identity(n)};
}

inline FgAbMorphism zero_morphism(GroupPtr src, GroupPtr tgt) {
    return {src, tgt, IntMatrix(tgt->ambient_rank(), src->ambient_rank())};
}

struct SubObject {
    GroupPtr group;
    FgAbMorphism incl;  // group → parent
};

struct QuotientObject {
    GroupPtr group;
    FgAbMorphism proj;  // parent → group
};

inline SubObject kernel(const FgAbMorphism& f) {
    IntMatrix K = lattice_kernel(f.mat, f.tgt->rels());
    IntMatrix RK = lattice_kernel(K, f.src->rels());
    GroupPtr g = from_relations(K.cols, std::move(RK));
    return {g, unchecked_morphism(g, f.src, std::move(K))};
}

inline SubObject image(const FgAbMorphism& f) {
    IntMatrix RI = lattice_kernel(f.mat, f.tgt->rels());
    GroupPtr g = from_relations(f.src->ambient_rank(), std::move(RI));
    return {g, unchecked_morphism(g, f.tgt, f.mat)};
}

inline QuotientObject cokernel(const FgAbMorphism& f) {
    GroupPtr g = from_relations(f.tgt->ambient_rank(), hstack(f.mat, f.tgt->rels()));
    return {g, unchecked_morphism(f.tgt, g, IntMatrix::identity(f.tgt->ambient_rank()))};
}

inline std::optional<IntVec> preimage(const FgAbMorphism& f, const IntVec& y) {
    return solve_mod(f.mat, y, f.tgt->rels());
}

inline bool is_injective(const FgAbMorphism& f) { return kernel(f).group->is_trivial(); }

inline bool is_surjective(const FgAbMorphism& f) { return cokernel(f).group->is_trivial(); }

inline bool is_isomorphism(const FgAbMorphism& f) { return is_injective(f) && is_surjective(f); }

// inverse of an isomorphism; nullopt when f is not iso
inline std::optional<FgAbMorphism> inverse_morphism(const FgAbMorphism& f) {
    const long nt = f.tgt->ambient_rank();
    IntMatrix inv(f.src->ambient_rank(), nt);
    for (long j = 0; j < nt; ++j) {
        IntVec e(nt, Int(0));
        e[j] = 1;
        auto x = preimage(f, e);
        if (!x) return std::nullopt;
        inv.set_col(j, *x);
    }
    FgAbMorphism g = unchecked_morphism(f.tgt, f.src, std::move(inv));
    // g must be well defined and two-sided inverse
    const IntMatrix& R = f.tgt->rels();
    for (long j = 0; j < R.cols; ++j)
        if (!f.src->contains_zero(g.mat.mul_vec(R.col(j)))) return std::nullopt;
    if (!f.then(g).eq(identity_morphism(f.src))) return std::nullopt;
    if (!g.then(f).eq(identity_morphism(f.tgt))) return std::nullopt;
    return g;
}

struct DirectSum {
    GroupPtr group;
    std::vector<FgAbMorphism> injections;
    std::vector<FgAbMorphism> projections;
};

inline DirectSum direct_sum(const std::vector<GroupPtr>& parts) {
    long n = 0, m = 0;
    for (const auto& p : parts) {
        n += p->ambient_rank();
        m += p->rels().cols;
    }
    IntMatrix rels(n, m);
    long ro = 0, co = 0;
    for (const auto& p : parts) {
        rels.set_block(ro, co, p->rels());
        ro += p->ambient_rank();
        co += p->rels().cols;
    }
    DirectSum s;
    s.group = from_relations(n, std::move(rels));
    ro = 0;
    for (const auto& p : parts) {
        long k = p->ambient_rank();
        IntMatrix in(n, k), pr(k, n);
        for (long i = 0; i < k; ++i) {
            in(ro + i, i) = 1;
            pr(i, ro + i) = 1;
        }
        s.injections.push_back(unchecked_morphism(p, s.group, std::move(in)));
        s.projections.push_back(unchecked_morphism(s.group, p, std::move(pr)));
        ro += k;
    }
    return s;
}

// exactness at B for A --f--> B --g--> C:  g∘f = 0 and ker(g) ⊆ im(f)
inline bool is_exact_at(const FgAbMorphism& f, const FgAbMorphism& g) {
    IntMatrix comp = g.mat.mul(f.mat);
    for (long j = 0; j < comp.cols; ++j)
        if (!g.tgt->contains_zero(comp.col(j))) return false;
    IntMatrix K = lattice_kernel(g.mat, g.tgt->rels());
    IntMatrix I = hstack(f.mat, f.tgt->rels());
    HermiteSolver solver(I);
    for (long j = 0; j < K.cols; ++j)
        if (!solver.solve(K.col(j))) return false;
    return true;
}

inline bool shapes_equal(const GroupPtr& a, const GroupPtr& b) { return a->shape() == b->shape(); }

}  // namespace lowterm

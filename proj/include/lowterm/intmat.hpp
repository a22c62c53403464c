#pragma once

// Exact integer matrices and lattice algebra: Hermite and Smith normal forms,
// linear and congruence solving, column-lattice primitives.  Everything is
// arbitrary-precision and deterministic: normal-form pivots are chosen as the
// smallest nonzero |entry|, ties broken row-major.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lowterm {

using Int = boost::multiprecision::cpp_int;
using IntVec = std::vector<Int>;

inline Int iabs(const Int& a) { return a < 0 ? Int(-a) : a; }

// floor division (C++ / truncates toward zero)
inline Int fdiv(const Int& a, const Int& b) {
    Int q = a / b;
    if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

struct IntMatrix {
    long rows = 0, cols = 0;
    std::vector<Int> e;  // row-major

    IntMatrix() = default;
    IntMatrix(long r, long c) : rows(r), cols(c), e(static_cast<size_t>(r) * c) {}

    Int& operator()(long i, long j) { return e[static_cast<size_t>(i) * cols + j]; }
    const Int& operator()(long i, long j) const { return e[static_cast<size_t>(i) * cols + j]; }

    static IntMatrix identity(long n) {
        IntMatrix m(n, n);
        for (long i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static IntMatrix of(const std::vector<std::vector<long long>>& a) {
        IntMatrix m(static_cast<long>(a.size()), a.empty() ? 0 : static_cast<long>(a[0].size()));
        for (long i = 0; i < m.rows; ++i) {
            if (static_cast<long>(a[i].size()) != m.cols) throw std::invalid_argument("ragged rows");
            for (long j = 0; j < m.cols; ++j) m(i, j) = a[i][j];
        }
        return m;
    }

    bool operator==(const IntMatrix& o) const { return rows == o.rows && cols == o.cols && e == o.e; }

    bool is_zero() const {
        for (const auto& x : e)
            if (x != 0) return false;
        return true;
    }

    IntMatrix transpose() const {
        IntMatrix t(cols, rows);
        for (long i = 0; i < rows; ++i)
            for (long j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    IntMatrix mul(const IntMatrix& b) const {
        if (cols != b.rows) throw std::invalid_argument("mul: dimension mismatch");
        IntMatrix c(rows, b.cols);
        for (long i = 0; i < rows; ++i)
            for (long k = 0; k < cols; ++k) {
                const Int& a = (*this)(i, k);
                if (a == 0) continue;
                for (long j = 0; j < b.cols; ++j) {
                    const Int& v = b(k, j);
                    if (v != 0) c(i, j) += a * v;
                }
            }
        return c;
    }

    IntVec mul_vec(const IntVec& v) const {
        if (static_cast<long>(v.size()) != cols) throw std::invalid_argument("mul_vec: dimension mismatch");
        IntVec r(rows);
        for (long i = 0; i < rows; ++i)
            for (long j = 0; j < cols; ++j) {
                const Int& a = (*this)(i, j);
                if (a != 0 && v[j] != 0) r[i] += a * v[j];
            }
        return r;
    }

    IntMatrix add(const IntMatrix& b) const {
        if (rows != b.rows || cols != b.cols) throw std::invalid_argument("add: dimension mismatch");
        IntMatrix c = *this;
        for (size_t k = 0; k < e.size(); ++k) c.e[k] += b.e[k];
        return c;
    }

    IntMatrix sub(const IntMatrix& b) const {
        if (rows != b.rows || cols != b.cols) throw std::invalid_argument("sub: dimension mismatch");
        IntMatrix c = *this;
        for (size_t k = 0; k < e.size(); ++k) c.e[k] -= b.e[k];
        return c;
    }

    IntMatrix neg() const {
        IntMatrix c = *this;
        for (auto& x : c.e) x = -x;
        return c;
    }

    IntMatrix scaled(const Int& s) const {
        IntMatrix c = *this;
        for (auto& x : c.e) x *= s;
        return c;
    }

    IntVec col(long j) const {
        IntVec v(rows);
        for (long i = 0; i < rows; ++i) v[i] = (*this)(i, j);
        return v;
    }

    void set_col(long j, const IntVec& v) {
        for (long i = 0; i < rows; ++i) (*this)(i, j) = v[i];
    }

    void set_block(long i0, long j0, const IntMatrix& b) {
        for (long i = 0; i < b.rows; ++i)
            for (long j = 0; j < b.cols; ++j) (*this)(i0 + i, j0 + j) = b(i, j);
    }

    IntMatrix block(long i0, long j0, long r, long c) const {
        IntMatrix b(r, c);
        for (long i = 0; i < r; ++i)
            for (long j = 0; j < c; ++j) b(i, j) = (*this)(i0 + i, j0 + j);
        return b;
    }
};

inline IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols == 0 && a.rows == 0) return b;
    if (b.cols == 0 && b.rows == 0) return a;
    if (a.rows != b.rows) throw std::invalid_argument("hstack: row mismatch");
    IntMatrix c(a.rows, a.cols + b.cols);
    c.set_block(0, 0, a);
    c.set_block(0, a.cols, b);
    return c;
}

inline IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows == 0 && a.cols == 0) return b;
    if (b.rows == 0 && b.cols == 0) return a;
    if (a.cols != b.cols) throw std::invalid_argument("vstack: column mismatch");
    IntMatrix c(a.rows + b.rows, a.cols);
    c.set_block(0, 0, a);
    c.set_block(a.rows, 0, b);
    return c;
}

inline IntVec vec_sub(const IntVec& a, const IntVec& b) {
    IntVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline IntVec vec_add(const IntVec& a, const IntVec& b) {
    IntVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline IntVec vec_neg(const IntVec& a) {
    IntVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

inline bool vec_is_zero(const IntVec& a) {
    for (const auto& x : a)
        if (x != 0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Hermite normal form.
//
// Row form (the public op): U·M = H with U unimodular, H in row-echelon shape,
// pivots positive, entries below a pivot zero and entries above reduced into
// [0, pivot).  The column form used for lattices is the same computation on
// the transpose: M·V = H with H lower-triangular column-style — pivot rows
// strictly increase with the column index, entries above a pivot vanish, and
// entries of earlier columns in a pivot row are reduced into [0, pivot).
// ---------------------------------------------------------------------------

struct RowHnf {
    IntMatrix H, U;
    std::vector<std::pair<long, long>> pivots;  // (row, col)
};

inline RowHnf row_hnf(const IntMatrix& M) {
    RowHnf r;
    r.H = M;
    r.U = IntMatrix::identity(M.rows);
    IntMatrix& H = r.H;
    IntMatrix& U = r.U;
    long prow = 0;
    for (long j = 0; j < M.cols && prow < M.rows; ++j) {
        // gcd-eliminate below prow in column j
        while (true) {
            long best = -1;
            for (long i = prow; i < M.rows; ++i)
                if (H(i, j) != 0 && (best < 0 || iabs(H(i, j)) < iabs(H(best, j)))) best = i;
            if (best < 0) break;
            if (best != prow)
                for (long c = 0; c < M.cols; ++c) std::swap(H(prow, c), H(best, c));
            if (best != prow)
                for (long c = 0; c < M.rows; ++c) std::swap(U(prow, c), U(best, c));
            bool done = true;
            for (long i = prow + 1; i < M.rows; ++i) {
                if (H(i, j) == 0) continue;
                Int q = H(i, j) / H(prow, j);
                if (q != 0) {
                    for (long c = 0; c < M.cols; ++c) H(i, c) -= q * H(prow, c);
                    for (long c = 0; c < M.rows; ++c) U(i, c) -= q * U(prow, c);
                }
                if (H(i, j) != 0) done = false;
            }
            if (done) break;
        }
        if (H(prow, j) == 0) continue;
        if (H(prow, j) < 0) {
            for (long c = 0; c < M.cols; ++c) H(prow, c) = -H(prow, c);
            for (long c = 0; c < M.rows; ++c) U(prow, c) = -U(prow, c);
        }
        for (long i = 0; i < prow; ++i) {
            Int q = fdiv(H(i, j), H(prow, j));
            if (q != 0) {
                for (long c = 0; c < M.cols; ++c) H(i, c) -= q * H(prow, c);
                for (long c = 0; c < M.rows; ++c) U(i, c) -= q * U(prow, c);
            }
        }
        r.pivots.emplace_back(prow, j);
        ++prow;
    }
    return r;
}

inline std::pair<IntMatrix, IntMatrix> hermite_normal_form(const IntMatrix& M) {
    RowHnf r = row_hnf(M);
    return {r.H, r.U};
}

struct ColHnf {
    IntMatrix H, V;                             // M·V = H, column echelon
    std::vector<std::pair<long, long>> pivots;  // (row, col), rows increasing
};

inline ColHnf col_hnf(const IntMatrix& M) {
    RowHnf r = row_hnf(M.transpose());
    ColHnf c;
    c.H = r.H.transpose();
    c.V = r.U.transpose();
    for (auto [pr, pc] : r.pivots) c.pivots.emplace_back(pc, pr);
    return c;
}

// Canonical basis of the column lattice of M: column HNF with zero columns dropped.
inline IntMatrix lattice_basis(const IntMatrix& M) {
    ColHnf c = col_hnf(M);
    long k = static_cast<long>(c.pivots.size());
    IntMatrix B(M.rows, k);
    for (long j = 0; j < k; ++j) B.set_col(j, c.H.col(c.pivots[j].second));
    return B;
}

// ---------------------------------------------------------------------------
// Exact linear solving.
// ---------------------------------------------------------------------------

class HermiteSolver {
  public:
    explicit HermiteSolver(const IntMatrix& A) : hnf_(col_hnf(A)) {}

    // x with A·x = b, or nullopt
    std::optional<IntVec> solve(const IntVec& b) const {
        IntVec r = b, y(hnf_.H.cols);
        for (auto [pr, pc] : hnf_.pivots) {
            const Int& p = hnf_.H(pr, pc);
            if (r[pr] % p != 0) return std::nullopt;
            Int q = r[pr] / p;
            if (q != 0) {
                y[pc] = q;
                for (long i = pr; i < hnf_.H.rows; ++i) {
                    const Int& h = hnf_.H(i, pc);
                    if (h != 0) r[i] -= q * h;
                }
            }
        }
        if (!vec_is_zero(r)) return std::nullopt;
        return hnf_.V.mul_vec(y);
    }

  private:
    ColHnf hnf_;
};

inline std::optional<IntVec> solve_integer(const IntMatrix& A, const IntVec& b) {
    return HermiteSolver(A).solve(b);
}

// x with A·x − b in the column lattice of R, or nullopt
inline std::optional<IntVec> solve_mod(const IntMatrix& A, const IntVec& b, const IntMatrix& R) {
    if (R.cols == 0) return solve_integer(A, b);
    auto s = solve_integer(hstack(A, R), b);
    if (!s) return std::nullopt;
    s->resize(A.cols);
    return s;
}

// ---------------------------------------------------------------------------
// Smith normal form: U·M·V = D diagonal, d_1 | d_2 | ... | d_r > 0, zeros
// trailing.  uinv tracks U^{-1} for canonical-representative computations.
// ---------------------------------------------------------------------------

struct SmithForm {
    IntMatrix U, D, V, uinv;
    std::vector<Int> d;  // nonzero diagonal entries, divisibility chain
};

namespace detail {

struct SmithOpts {
    bool track_u = true;
    bool track_v = true;
    bool track_uinv = true;
};

inline SmithForm smith_core(const IntMatrix& M, const SmithOpts& opt) {
    SmithForm s;
    s.D = M;
    if (opt.track_u) s.U = IntMatrix::identity(M.rows);
    if (opt.track_uinv) s.uinv = IntMatrix::identity(M.rows);
    if (opt.track_v) s.V = IntMatrix::identity(M.cols);
    IntMatrix& A = s.D;
    const long rows = M.rows, cols = M.cols;

    auto row_sub = [&](long i, long t, const Int& q) {  // row_i -= q*row_t
        for (long c = 0; c < cols; ++c) A(i, c) -= q * A(t, c);
        if (opt.track_u)
            for (long c = 0; c < rows; ++c) s.U(i, c) -= q * s.U(t, c);
        if (opt.track_uinv)
            for (long r = 0; r < rows; ++r) s.uinv(r, t) += q * s.uinv(r, i);
    };
    auto row_swap = [&](long i, long t) {
        if (i == t) return;
        for (long c = 0; c < cols; ++c) std::swap(A(i, c), A(t, c));
        if (opt.track_u)
            for (long c = 0; c < rows; ++c) std::swap(s.U(i, c), s.U(t, c));
        if (opt.track_uinv)
            for (long r = 0; r < rows; ++r) std::swap(s.uinv(r, i), s.uinv(r, t));
    };
    auto row_negate = [&](long i) {
        for (long c = 0; c < cols; ++c) A(i, c) = -A(i, c);
        if (opt.track_u)
            for (long c = 0; c < rows; ++c) s.U(i, c) = -s.U(i, c);
        if (opt.track_uinv)
            for (long r = 0; r < rows; ++r) s.uinv(r, i) = -s.uinv(r, i);
    };
    auto col_sub = [&](long j, long t, const Int& q) {  // col_j -= q*col_t
        for (long r = 0; r < rows; ++r) A(r, j) -= q * A(r, t);
        if (opt.track_v)
            for (long r = 0; r < cols; ++r) s.V(r, j) -= q * s.V(r, t);
    };
    auto col_swap = [&](long j, long t) {
        if (j == t) return;
        for (long r = 0; r < rows; ++r) std::swap(A(r, j), A(r, t));
        if (opt.track_v)
            for (long r = 0; r < cols; ++r) std::swap(s.V(r, j), s.V(r, t));
    };

    const long n = std::min(rows, cols);
    for (long t = 0; t < n; ++t) {
        // smallest nonzero |entry| in the trailing submatrix, row-major ties
        long pi = -1, pj = -1;
        for (long i = t; i < rows; ++i)
            for (long j = t; j < cols; ++j)
                if (A(i, j) != 0 && (pi < 0 || iabs(A(i, j)) < iabs(A(pi, pj)))) pi = i, pj = j;
        if (pi < 0) break;
        row_swap(pi, t);
        col_swap(pj, t);

        while (true) {
            // clear column t
            bool col_clear = false;
            while (!col_clear) {
                long best = t;
                for (long i = t + 1; i < rows; ++i)
                    if (A(i, t) != 0 && iabs(A(i, t)) < iabs(A(best, t))) best = i;
                row_swap(best, t);
                col_clear = true;
                for (long i = t + 1; i < rows; ++i) {
                    if (A(i, t) == 0) continue;
                    row_sub(i, t, A(i, t) / A(t, t));
                    if (A(i, t) != 0) col_clear = false;
                }
            }
            // clear row t (may disturb nothing in column t)
            bool row_clear = false;
            while (!row_clear) {
                long best = t;
                for (long j = t + 1; j < cols; ++j)
                    if (A(t, j) != 0 && iabs(A(t, j)) < iabs(A(t, best))) best = j;
                col_swap(best, t);
                row_clear = true;
                for (long j = t + 1; j < cols; ++j) {
                    if (A(t, j) == 0) continue;
                    col_sub(j, t, A(t, j) / A(t, t));
                    if (A(t, j) != 0) row_clear = false;
                }
            }
            // column swaps while clearing the row can reintroduce column entries
            bool col_ok = true;
            for (long i = t + 1; i < rows; ++i)
                if (A(i, t) != 0) col_ok = false;
            if (!col_ok) continue;

            // divisibility: pivot must divide the trailing submatrix
            long bi = -1;
            for (long i = t + 1; i < rows && bi < 0; ++i)
                for (long j = t + 1; j < cols; ++j)
                    if (A(i, j) % A(t, t) != 0) {
                        bi = i;
                        break;
                    }
            if (bi < 0) break;
            row_sub(t, bi, Int(-1));  // row_t += row_bi, then restart
        }
    }

    for (long t = 0; t < n; ++t)
        if (A(t, t) < 0) row_negate(t);
    for (long t = 0; t < n && A(t, t) != 0; ++t) s.d.push_back(A(t, t));
    return s;
}

}  // namespace detail

inline SmithForm smith_normal_form(const IntMatrix& M) {
    return detail::smith_core(M, {});
}

// ---------------------------------------------------------------------------
// Lattice kernel: canonical basis of {x : A·x ∈ colLattice(L)}.
//
// Generic route: integer kernel of [A | L], projected to the x-part.  When L
// is diagonal-like (every column has at most one nonzero entry) the condition
// is a row-wise congruence; scale to the common modulus q and read the kernel
// off the Smith form of the scaled matrix — much cheaper on the large
// diagonal-relation groups produced by total complexes.
// ---------------------------------------------------------------------------

inline IntMatrix kernel_basis(const IntMatrix& A) {
    ColHnf c = col_hnf(A);
    std::vector<long> zero_cols;
    std::vector<bool> piv(A.cols, false);
    for (auto [pr, pc] : c.pivots) piv[pc] = true;
    for (long j = 0; j < A.cols; ++j)
        if (!piv[j]) zero_cols.push_back(j);
    IntMatrix K(A.cols, static_cast<long>(zero_cols.size()));
    for (size_t j = 0; j < zero_cols.size(); ++j) K.set_col(static_cast<long>(j), c.V.col(zero_cols[j]));
    return lattice_basis(K);
}

inline bool diagonal_like(const IntMatrix& L) {
    for (long j = 0; j < L.cols; ++j) {
        int nz = 0;
        for (long i = 0; i < L.rows; ++i)
            if (L(i, j) != 0 && ++nz > 1) return false;
    }
    return true;
}

inline IntMatrix lattice_kernel(const IntMatrix& A, const IntMatrix& L) {
    if (L.cols == 0) return kernel_basis(A);
    if (L.rows != A.rows) throw std::invalid_argument("lattice_kernel: row mismatch");
    if (!diagonal_like(L)) {
        IntMatrix K = kernel_basis(hstack(A, L));
        return lattice_basis(K.block(0, 0, A.cols, K.cols));
    }

    // row moduli
    IntVec mod(A.rows, Int(0));
    for (long j = 0; j < L.cols; ++j)
        for (long i = 0; i < L.rows; ++i)
            if (L(i, j) != 0) mod[i] = boost::multiprecision::gcd(mod[i], iabs(L(i, j)));

    std::vector<long> exact, cong;
    for (long i = 0; i < A.rows; ++i) (mod[i] == 0 ? exact : cong).push_back(i);

    IntMatrix K0;
    if (exact.empty()) {
        K0 = IntMatrix::identity(A.cols);
    } else {
        IntMatrix Ae(static_cast<long>(exact.size()), A.cols);
        for (size_t r = 0; r < exact.size(); ++r)
            for (long j = 0; j < A.cols; ++j) Ae(static_cast<long>(r), j) = A(exact[r], j);
        K0 = kernel_basis(Ae);
    }
    if (cong.empty() || K0.cols == 0) return lattice_basis(K0);

    Int q = 1;
    for (long i : cong) q = boost::multiprecision::lcm(q, mod[i]);

    // C = scaled congruence rows of A composed with K0, entries reduced mod q
    IntMatrix C(static_cast<long>(cong.size()), K0.cols);
    for (size_t r = 0; r < cong.size(); ++r) {
        const long i = cong[r];
        const Int scale = q / mod[i];
        for (long j = 0; j < K0.cols; ++j) {
            Int v = 0;
            for (long k = 0; k < A.cols; ++k)
                if (A(i, k) != 0 && K0(k, j) != 0) v += A(i, k) * K0(k, j);
            v = (v * scale) % q;
            if (v < 0) v += q;
            if (2 * v > q) v -= q;
            C(static_cast<long>(r), j) = v;
        }
    }

    detail::SmithOpts opt;
    opt.track_u = opt.track_uinv = false;
    SmithForm s = detail::smith_core(C, opt);
    IntMatrix W = s.V;
    const long rank = static_cast<long>(s.d.size());
    for (long j = 0; j < W.cols; ++j) {
        if (j < rank) {
            Int f = q / boost::multiprecision::gcd(iabs(s.d[j]), q);
            if (f != 1)
                for (long i = 0; i < W.rows; ++i) W(i, j) *= f;
        }
    }
    return lattice_basis(K0.mul(W));
}

inline bool in_lattice(const IntVec& v, const IntMatrix& L) {
    return solve_integer(L, v).has_value();
}

// Bareiss fraction-free determinant (used for unimodularity checks)
inline Int determinant(const IntMatrix& M) {
    if (M.rows != M.cols) throw std::invalid_argument("determinant: not square");
    const long n = M.rows;
    if (n == 0) return 1;
    IntMatrix A = M;
    Int prev = 1;
    int sign = 1;
    for (long k = 0; k + 1 < n; ++k) {
        if (A(k, k) == 0) {
            long sw = -1;
            for (long i = k + 1; i < n; ++i)
                if (A(i, k) != 0) {
                    sw = i;
                    break;
                }
            if (sw < 0) return 0;
            for (long j = 0; j < n; ++j) std::swap(A(k, j), A(sw, j));
            sign = -sign;
        }
        for (long i = k + 1; i < n; ++i)
            for (long j = k + 1; j < n; ++j) A(i, j) = (A(i, j) * A(k, k) - A(i, k) * A(k, j)) / prev;
        prev = A(k, k);
    }
    return sign > 0 ? A(n - 1, n - 1) : Int(-A(n - 1, n - 1));
}

// Reduce each entry of column j modulo the (diagonal-like) target moduli;
// columns change by relation-lattice elements, so the morphism is unchanged.
inline void reduce_columns_mod(IntMatrix& M, const IntVec& moduli) {
    for (long i = 0; i < M.rows; ++i) {
        if (moduli[i] == 0) continue;
        const Int& m = moduli[i];
        for (long j = 0; j < M.cols; ++j) {
            Int& v = M(i, j);
            if (v >= m || v < 0 || 2 * v > m) {
                v %= m;
                if (v < 0) v += m;
                if (2 * v > m) v -= m;
            }
        }
    }
}

}  // namespace lowterm

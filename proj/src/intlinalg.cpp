#include "saecula/intlinalg.hpp"

#include <algorithm>
#include <cassert>

namespace saecula {

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_columns(int rows, const std::vector<std::vector<Int>>& cols) {
    IntMatrix m(rows, (int)cols.size());
    for (int j = 0; j < m.cols; ++j) {
        if ((int)cols[j].size() != rows) throw std::invalid_argument("column length");
        for (int i = 0; i < rows; ++i) m.at(i, j) = cols[j][i];
    }
    return m;
}

std::vector<Int> IntMatrix::column(int c) const {
    std::vector<Int> v(rows);
    for (int i = 0; i < rows; ++i) v[i] = at(i, c);
    return v;
}

bool IntMatrix::is_zero() const {
    for (const Int& x : e)
        if (x != 0) return false;
    return true;
}

IntMatrix mul(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("mul: inner dimensions");
    IntMatrix r(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            const Int& aik = a.at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < b.cols; ++j) {
                const Int& bkj = b.at(k, j);
                if (bkj != 0) mpz_addmul(r.at(i, j).get_mpz_t(), aik.get_mpz_t(), bkj.get_mpz_t());
            }
        }
    return r;
}

std::vector<Int> mul(const IntMatrix& a, const std::vector<Int>& v) {
    if (a.cols != (int)v.size()) throw std::invalid_argument("mul: vector length");
    std::vector<Int> r(a.rows);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k)
            if (a.at(i, k) != 0 && v[k] != 0)
                mpz_addmul(r[i].get_mpz_t(), a.at(i, k).get_mpz_t(), v[k].get_mpz_t());
    return r;
}

IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows != b.rows) throw std::invalid_argument("hconcat: row counts");
    IntMatrix r(a.rows, a.cols + b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int j = 0; j < a.cols; ++j) r.at(i, j) = a.at(i, j);
        for (int j = 0; j < b.cols; ++j) r.at(i, a.cols + j) = b.at(i, j);
    }
    return r;
}

IntMatrix transpose(const IntMatrix& a) {
    IntMatrix r(a.cols, a.rows);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) r.at(j, i) = a.at(i, j);
    return r;
}

std::vector<Int> SmithDecomposition::diagonal() const {
    std::vector<Int> d;
    int k = std::min(D.rows, D.cols);
    for (int i = 0; i < k; ++i) d.push_back(D.at(i, i));
    return d;
}

std::string Coeff::str() const {
    switch (kind) {
        case CoeffKind::Z: return "z";
        case CoeffKind::Q: return "q";
        default: return "fp:" + std::to_string(p);
    }
}

static int first_nonzero(const std::vector<Int>& v, int from) {
    for (int i = from; i < (int)v.size(); ++i)
        if (v[i] != 0) return i;
    return -1;
}

int ColumnEchelon::first_pivot_at_or_below(int r) const {
    return (int)(std::lower_bound(piv.begin(), piv.end(), r) - piv.begin());
}

void ColumnEchelon::add_column(std::vector<Int> c) {
    if ((int)c.size() != rows) throw std::invalid_argument("add_column: length");
    int r = first_nonzero(c, 0);
    size_t j = 0;
    while (r >= 0) {
        while (j < col.size() && piv[j] < r) ++j;
        if (j == col.size() || piv[j] > r) {
            if (c[r] < 0)
                for (Int& x : c) x = -x;
            col.insert(col.begin() + j, std::move(c));
            piv.insert(piv.begin() + j, r);
            return;
        }
        // pivot collision: gcd-combine
        std::vector<Int>& h = col[j];
        if (mpz_divisible_p(c[r].get_mpz_t(), h[r].get_mpz_t())) {
            Int q = c[r] / h[r];
            for (int i = r; i < rows; ++i)
                if (h[i] != 0) mpz_submul(c[i].get_mpz_t(), q.get_mpz_t(), h[i].get_mpz_t());
        } else {
            Int g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), h[r].get_mpz_t(),
                       c[r].get_mpz_t());
            Int u = h[r] / g, v = c[r] / g;
            for (int i = r; i < rows; ++i) {
                Int nh = s * h[i] + t * c[i];
                Int nc = u * c[i] - v * h[i];
                h[i] = nh;
                c[i] = nc;
            }
        }
        r = first_nonzero(c, r + 1);
    }
}

void ColumnEchelon::add_columns(const IntMatrix& m) {
    if (m.cols > 0 && m.rows != rows) throw std::invalid_argument("add_columns: rows");
    for (int j = 0; j < m.cols; ++j) add_column(m.column(j));
}

IntMatrix ColumnEchelon::basis() const { return IntMatrix::from_columns(rows, col); }

IntMatrix ColumnEchelon::canonical() const {
    std::vector<std::vector<Int>> h = col;
    for (size_t j = 0; j < h.size(); ++j) {
        int r = piv[j];
        for (size_t j2 = 0; j2 < j; ++j2) {
            Int q = floor_div(h[j2][r], h[j][r]);
            if (q != 0)
                for (int i = r; i < rows; ++i)
                    if (h[j][i] != 0) mpz_submul(h[j2][i].get_mpz_t(), q.get_mpz_t(), h[j][i].get_mpz_t());
        }
    }
    return IntMatrix::from_columns(rows, h);
}

std::optional<std::vector<Int>> ColumnEchelon::solve(const std::vector<Int>& v) const {
    if ((int)v.size() != rows) throw std::invalid_argument("solve: length");
    std::vector<Int> w = v, x(col.size());
    size_t j = 0;
    for (int r = 0; r < rows; ++r) {
        if (j < col.size() && piv[j] == r) {
            if (w[r] != 0) {
                Int q, rem;
                mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), w[r].get_mpz_t(), col[j][r].get_mpz_t());
                if (rem != 0) return std::nullopt;
                x[j] = q;
                for (int i = r; i < rows; ++i)
                    if (col[j][i] != 0) mpz_submul(w[i].get_mpz_t(), q.get_mpz_t(), col[j][i].get_mpz_t());
            }
            ++j;
        } else if (w[r] != 0) {
            return std::nullopt;
        }
    }
    return x;
}

int64_t fp_inv(int64_t a, int64_t p) {
    int64_t t = 0, nt = 1, r = p, nr = a % p;
    if (nr < 0) nr += p;
    while (nr != 0) {
        int64_t q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (r != 1) throw std::invalid_argument("fp_inv: not invertible");
    return t < 0 ? t + p : t;
}

std::vector<int64_t> fp_column(const IntMatrix& m, int c, int64_t p) {
    std::vector<int64_t> v(m.rows);
    Int t;
    for (int i = 0; i < m.rows; ++i) {
        t = m.at(i, c) % p;
        v[i] = t.get_si();
        if (v[i] < 0) v[i] += p;
    }
    return v;
}

static int first_nonzero64(const std::vector<int64_t>& v, int from) {
    for (int i = from; i < (int)v.size(); ++i)
        if (v[i] != 0) return i;
    return -1;
}

int ColumnEchelonFp::first_pivot_at_or_below(int r) const {
    return (int)(std::lower_bound(piv.begin(), piv.end(), r) - piv.begin());
}

void ColumnEchelonFp::add_column(std::vector<int64_t> c) {
    if ((int)c.size() != rows) throw std::invalid_argument("add_column: length");
    int r = first_nonzero64(c, 0);
    size_t j = 0;
    while (r >= 0) {
        while (j < col.size() && piv[j] < r) ++j;
        if (j == col.size() || piv[j] > r) {
            int64_t inv = fp_inv(c[r], p);
            for (int i = r; i < rows; ++i) c[i] = (int64_t)((__int128)c[i] * inv % p);
            col.insert(col.begin() + j, std::move(c));
            piv.insert(piv.begin() + j, r);
            return;
        }
        int64_t f = c[r];  // pivot of col[j] is 1
        for (int i = r; i < rows; ++i) {
            c[i] = (int64_t)(((__int128)c[i] - (__int128)f * col[j][i]) % p);
            if (c[i] < 0) c[i] += p;
        }
        r = first_nonzero64(c, r + 1);
    }
}

void ColumnEchelonFp::add_columns(const IntMatrix& m) {
    if (m.cols > 0 && m.rows != rows) throw std::invalid_argument("add_columns: rows");
    for (int j = 0; j < m.cols; ++j) add_column(fp_column(m, j, p));
}

IntMatrix ColumnEchelonFp::basis() const {
    IntMatrix m(rows, (int)col.size());
    for (int j = 0; j < m.cols; ++j)
        for (int i = 0; i < rows; ++i) m.at(i, j) = (long)col[j][i];
    return m;
}

IntMatrix ColumnEchelonFp::canonical() const {
    std::vector<std::vector<int64_t>> h = col;
    for (size_t j = 0; j < h.size(); ++j) {
        int r = piv[j];
        for (size_t j2 = 0; j2 < j; ++j2) {
            int64_t f = h[j2][r];
            if (f == 0) continue;
            for (int i = r; i < rows; ++i) {
                h[j2][i] = (int64_t)(((__int128)h[j2][i] - (__int128)f * h[j][i]) % p);
                if (h[j2][i] < 0) h[j2][i] += p;
            }
        }
    }
    IntMatrix m(rows, (int)h.size());
    for (int j = 0; j < m.cols; ++j)
        for (int i = 0; i < rows; ++i) m.at(i, j) = (long)h[j][i];
    return m;
}

std::optional<std::vector<Int>> ColumnEchelonFp::solve(const std::vector<Int>& v) const {
    if ((int)v.size() != rows) throw std::invalid_argument("solve: length");
    std::vector<int64_t> w(rows);
    Int t;
    for (int i = 0; i < rows; ++i) {
        t = v[i] % p;
        w[i] = t.get_si();
        if (w[i] < 0) w[i] += p;
    }
    std::vector<Int> x(col.size());
    size_t j = 0;
    for (int r = 0; r < rows; ++r) {
        if (j < col.size() && piv[j] == r) {
            int64_t f = w[r];
            if (f != 0) {
                x[j] = (long)f;
                for (int i = r; i < rows; ++i) {
                    w[i] = (int64_t)(((__int128)w[i] - (__int128)f * col[j][i]) % p);
                    if (w[i] < 0) w[i] += p;
                }
            }
            ++j;
        } else if (w[r] != 0) {
            return std::nullopt;
        }
    }
    return x;
}

std::optional<int> KernelBuilder::add_column(const std::vector<Int>& c) {
    if ((int)c.size() != rows) throw std::invalid_argument("add_column: length");
    std::vector<Int> x = c, t(fed + 1);
    t[fed] = 1;
    ++fed;
    int r = first_nonzero(x, 0);
    size_t j = 0;
    while (r >= 0) {
        while (j < col.size() && piv[j] < r) ++j;
        if (j == col.size() || piv[j] > r) {
            col.insert(col.begin() + j, std::move(x));
            tr.insert(tr.begin() + j, std::move(t));
            piv.insert(piv.begin() + j, r);
            return std::nullopt;
        }
        std::vector<Int>& h = col[j];
        std::vector<Int>& ht = tr[j];
        if (ht.size() < t.size()) ht.resize(t.size());
        if (mpz_divisible_p(x[r].get_mpz_t(), h[r].get_mpz_t())) {
            Int q = x[r] / h[r];
            for (int i = r; i < rows; ++i)
                if (h[i] != 0) mpz_submul(x[i].get_mpz_t(), q.get_mpz_t(), h[i].get_mpz_t());
            for (size_t i = 0; i < t.size(); ++i)
                if (ht[i] != 0) mpz_submul(t[i].get_mpz_t(), q.get_mpz_t(), ht[i].get_mpz_t());
        } else {
            Int g, s, tt;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), tt.get_mpz_t(), h[r].get_mpz_t(),
                       x[r].get_mpz_t());
            Int u = h[r] / g, v = x[r] / g;
            for (int i = r; i < rows; ++i) {
                Int nh = s * h[i] + tt * x[i];
                Int nx = u * x[i] - v * h[i];
                h[i] = nh;
                x[i] = nx;
            }
            for (size_t i = 0; i < t.size(); ++i) {
                Int nh = s * ht[i] + tt * t[i];
                Int nt = u * t[i] - v * ht[i];
                ht[i] = nh;
                t[i] = nt;
            }
        }
        r = first_nonzero(x, r + 1);
    }
    t.resize(fed);
    kernel.push_back(std::move(t));
    return (int)kernel.size() - 1;
}

void KernelBuilder::add_columns(const IntMatrix& m) {
    if (m.cols > 0 && m.rows != rows) throw std::invalid_argument("add_columns: rows");
    for (int j = 0; j < m.cols; ++j) add_column(m.column(j));
}

std::optional<int> KernelBuilderFp::add_column(std::vector<int64_t> x) {
    if ((int)x.size() != rows) throw std::invalid_argument("add_column: length");
    std::vector<int64_t> t(fed + 1);
    t[fed] = 1;
    ++fed;
    int r = first_nonzero64(x, 0);
    size_t j = 0;
    while (r >= 0) {
        while (j < col.size() && piv[j] < r) ++j;
        if (j == col.size() || piv[j] > r) {
            int64_t inv = fp_inv(x[r], p);
            for (int i = r; i < rows; ++i) x[i] = (int64_t)((__int128)x[i] * inv % p);
            for (auto& v : t) v = (int64_t)((__int128)v * inv % p);
            col.insert(col.begin() + j, std::move(x));
            tr.insert(tr.begin() + j, std::move(t));
            piv.insert(piv.begin() + j, r);
            return std::nullopt;
        }
        std::vector<int64_t>& h = col[j];
        std::vector<int64_t>& ht = tr[j];
        if (ht.size() < t.size()) ht.resize(t.size());
        int64_t f = x[r];
        for (int i = r; i < rows; ++i) {
            x[i] = (int64_t)(((__int128)x[i] - (__int128)f * h[i]) % p);
            if (x[i] < 0) x[i] += p;
        }
        for (size_t i = 0; i < t.size(); ++i) {
            t[i] = (int64_t)(((__int128)t[i] - (__int128)f * ht[i]) % p);
            if (t[i] < 0) t[i] += p;
        }
        r = first_nonzero64(x, r + 1);
    }
    t.resize(fed);
    kernel.push_back(std::move(t));
    return (int)kernel.size() - 1;
}

void KernelBuilderFp::add_columns(const IntMatrix& m) {
    if (m.cols > 0 && m.rows != rows) throw std::invalid_argument("add_columns: rows");
    for (int j = 0; j < m.cols; ++j) add_column(fp_column(m, j, p));
}

IntMatrix hnf(const IntMatrix& m) {
    ColumnEchelon e(m.rows);
    e.add_columns(m);
    return e.canonical();
}

IntMatrix kernel_basis(const IntMatrix& m) {
    KernelBuilder kb(m.rows);
    kb.add_columns(m);
    IntMatrix k(m.cols, (int)kb.kernel.size());
    for (int j = 0; j < k.cols; ++j) {
        const auto& v = kb.kernel[j];
        for (size_t i = 0; i < v.size(); ++i) k.at((int)i, j) = v[i];
    }
    return hnf(k);
}

bool in_column_lattice(const IntMatrix& m, const std::vector<Int>& v) {
    if ((int)v.size() != m.rows) throw std::invalid_argument("in_column_lattice: length");
    ColumnEchelon e(m.rows);
    e.add_columns(m);
    return e.contains(v);
}

namespace {

struct SnfState {
    IntMatrix D, U, Uinv, V;

    void row_swap(int i, int j) {
        for (int c = 0; c < D.cols; ++c) std::swap(D.at(i, c), D.at(j, c));
        for (int c = 0; c < U.cols; ++c) std::swap(U.at(i, c), U.at(j, c));
        for (int r = 0; r < Uinv.rows; ++r) std::swap(Uinv.at(r, i), Uinv.at(r, j));
    }
    void row_negate(int i) {
        for (int c = 0; c < D.cols; ++c) D.at(i, c) = -D.at(i, c);
        for (int c = 0; c < U.cols; ++c) U.at(i, c) = -U.at(i, c);
        for (int r = 0; r < Uinv.rows; ++r) Uinv.at(r, i) = -Uinv.at(r, i);
    }
    // row i += k * row j; inverse op recorded on Uinv columns
    void row_addmul(int i, int j, const Int& k) {
        for (int c = 0; c < D.cols; ++c)
            if (D.at(j, c) != 0) mpz_addmul(D.at(i, c).get_mpz_t(), k.get_mpz_t(), D.at(j, c).get_mpz_t());
        for (int c = 0; c < U.cols; ++c)
            if (U.at(j, c) != 0) mpz_addmul(U.at(i, c).get_mpz_t(), k.get_mpz_t(), U.at(j, c).get_mpz_t());
        for (int r = 0; r < Uinv.rows; ++r)
            if (Uinv.at(r, i) != 0) mpz_submul(Uinv.at(r, j).get_mpz_t(), k.get_mpz_t(), Uinv.at(r, i).get_mpz_t());
    }
    void col_swap(int i, int j) {
        for (int r = 0; r < D.rows; ++r) std::swap(D.at(r, i), D.at(r, j));
        for (int r = 0; r < V.rows; ++r) std::swap(V.at(r, i), V.at(r, j));
    }
    void col_negate(int i) {
        for (int r = 0; r < D.rows; ++r) D.at(r, i) = -D.at(r, i);
        for (int r = 0; r < V.rows; ++r) V.at(r, i) = -V.at(r, i);
    }
    void col_addmul(int i, int j, const Int& k) {
        for (int r = 0; r < D.rows; ++r)
            if (D.at(r, j) != 0) mpz_addmul(D.at(r, i).get_mpz_t(), k.get_mpz_t(), D.at(r, j).get_mpz_t());
        for (int r = 0; r < V.rows; ++r)
            if (V.at(r, j) != 0) mpz_addmul(V.at(r, i).get_mpz_t(), k.get_mpz_t(), V.at(r, j).get_mpz_t());
    }
};

}  // namespace

SmithDecomposition snf(const IntMatrix& m) {
    SnfState s{m, IntMatrix::identity(m.rows), IntMatrix::identity(m.rows),
               IntMatrix::identity(m.cols)};
    IntMatrix& D = s.D;
    int n = std::min(m.rows, m.cols);
    for (int t = 0; t < n; ++t) {
        // pick the nonzero entry of smallest magnitude as pivot
        int pi = -1, pj = -1;
        for (int i = t; i < D.rows; ++i)
            for (int j = t; j < D.cols; ++j)
                if (D.at(i, j) != 0 &&
                    (pi < 0 || mpz_cmpabs(D.at(i, j).get_mpz_t(), D.at(pi, pj).get_mpz_t()) < 0)) {
                    pi = i;
                    pj = j;
                }
        if (pi < 0) break;
        if (pi != t) s.row_swap(pi, t);
        if (pj != t) s.col_swap(pj, t);
        while (true) {
            if (D.at(t, t) < 0) s.row_negate(t);
            bool clean = true;
            for (int i = t + 1; i < D.rows; ++i) {
                if (D.at(i, t) == 0) continue;
                Int q = floor_div(D.at(i, t), D.at(t, t));
                if (q != 0) s.row_addmul(i, t, -q);
                if (D.at(i, t) != 0) {
                    s.row_swap(i, t);
                    clean = false;
                }
            }
            for (int j = t + 1; j < D.cols; ++j) {
                if (D.at(t, j) == 0) continue;
                Int q = floor_div(D.at(t, j), D.at(t, t));
                if (q != 0) s.col_addmul(j, t, -q);
                if (D.at(t, j) != 0) {
                    s.col_swap(j, t);
                    clean = false;
                }
            }
            if (!clean) continue;
            // pivot must divide the remaining block
            bool redo = false;
            for (int i = t + 1; i < D.rows && !redo; ++i)
                for (int j = t + 1; j < D.cols && !redo; ++j)
                    if (!mpz_divisible_p(D.at(i, j).get_mpz_t(), D.at(t, t).get_mpz_t())) {
                        s.row_addmul(t, i, 1);
                        redo = true;
                    }
            if (!redo) break;
        }
    }
    return {std::move(s.U), std::move(s.D), std::move(s.V), std::move(s.Uinv)};
}

IntMatrix saturate(const IntMatrix& m) {
    if (m.cols == 0) return hnf(m);
    IntMatrix y = kernel_basis(transpose(m));
    if (y.cols == 0) return IntMatrix::identity(m.rows);
    return kernel_basis(transpose(y));
}

IntMatrix col_basis(const IntMatrix& gens, const Coeff& c) {
    switch (c.kind) {
        case CoeffKind::Z: return hnf(gens);
        case CoeffKind::Q: return saturate(gens);
        default: {
            ColumnEchelonFp e(gens.rows, c.p);
            e.add_columns(gens);
            return e.canonical();
        }
    }
}

IntMatrix kernel(const IntMatrix& m, const Coeff& c) {
    if (c.kind != CoeffKind::Fp) return kernel_basis(m);
    KernelBuilderFp kb(m.rows, c.p);
    kb.add_columns(m);
    IntMatrix k(m.cols, (int)kb.kernel.size());
    for (int j = 0; j < k.cols; ++j)
        for (size_t i = 0; i < kb.kernel[j].size(); ++i) k.at((int)i, j) = (long)kb.kernel[j][i];
    ColumnEchelonFp e(m.cols, c.p);
    e.add_columns(k);
    return e.canonical();
}

std::optional<std::vector<Int>> solve_in_basis(const IntMatrix& basis, const std::vector<Int>& v,
                                               const Coeff& c) {
    if (c.kind != CoeffKind::Fp) {
        ColumnEchelon e(basis.rows);
        e.add_columns(basis);
        return e.solve(v);
    }
    ColumnEchelonFp e(basis.rows, c.p);
    e.add_columns(basis);
    return e.solve(v);
}

bool spans_contain(const IntMatrix& basis, const IntMatrix& cols, const Coeff& c) {
    if (basis.rows != cols.rows) throw std::invalid_argument("spans_contain: rows");
    if (c.kind != CoeffKind::Fp) {
        ColumnEchelon e(basis.rows);
        e.add_columns(basis);
        for (int j = 0; j < cols.cols; ++j)
            if (!e.contains(cols.column(j))) return false;
        return true;
    }
    ColumnEchelonFp e(basis.rows, c.p);
    e.add_columns(basis);
    for (int j = 0; j < cols.cols; ++j)
        if (!e.solve(cols.column(j))) return false;
    return true;
}

}  // namespace saecula

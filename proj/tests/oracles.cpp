#include "oracles.hpp"

#include <algorithm>
#include <numeric>

namespace oracle {

namespace {

IntMatrix drop_row_col(const IntMatrix& m, long r, long c) {
    IntMatrix out(m.rows - 1, m.cols - 1);
    for (long i = 0, oi = 0; i < m.rows; ++i) {
        if (i == r) continue;
        for (long j = 0, oj = 0; j < m.cols; ++j) {
            if (j == c) continue;
            out.at(oi, oj) = m.at(i, j);
            ++oj;
        }
        ++oi;
    }
    return out;
}

// All k-subsets of 0..n-1 in lexicographic order.
bool next_subset(std::vector<long>& s, long n) {
    long k = static_cast<long>(s.size());
    for (long i = k - 1; i >= 0; --i) {
        if (s[i] < n - (k - i)) {
            ++s[i];
            for (long j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
            return true;
        }
    }
    return false;
}

IntMatrix submatrix(const IntMatrix& m, const std::vector<long>& rows,
                    const std::vector<long>& cols) {
    IntMatrix out(static_cast<long>(rows.size()), static_cast<long>(cols.size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j) out.at(i, j) = m.at(rows[i], cols[j]);
    return out;
}

std::vector<long> iota_vec(long k) {
    std::vector<long> v(k);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

} // namespace

Int det(const IntMatrix& m) {
    if (m.rows != m.cols) return 0;
    if (m.rows == 0) return 1;
    if (m.rows == 1) return m.at(0, 0);
    Int acc = 0;
    for (long i = 0; i < m.rows; ++i) {
        if (m.at(i, 0) == 0) continue;
        Int cof = m.at(i, 0) * det(drop_row_col(m, i, 0));
        if (i % 2 == 0)
            acc += cof;
        else
            acc -= cof;
    }
    return acc;
}

long rank(const IntMatrix& m) {
    long kmax = std::min(m.rows, m.cols);
    for (long k = kmax; k >= 1; --k) {
        if (minor_gcd(m, k) != 0) return k;
    }
    return 0;
}

Int minor_gcd(const IntMatrix& m, long k) {
    if (k == 0) return 1;
    if (k > m.rows || k > m.cols) return 0;
    Int g = 0;
    std::vector<long> rows = iota_vec(k), cols = iota_vec(k);
    do {
        std::vector<long> cs = iota_vec(k);
        do {
            Int d = det(submatrix(m, rows, cs));
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
        } while (next_subset(cs, m.cols));
    } while (next_subset(rows, m.rows));
    return g;
}

std::vector<Int> invariant_factors(const IntMatrix& m) {
    long r = rank(m);
    std::vector<Int> out;
    Int prev = 1;
    for (long k = 1; k <= r; ++k) {
        Int dk = minor_gcd(m, k);
        out.push_back(dk / prev);
        prev = dk;
    }
    return out;
}

bool in_lattice(const IntMatrix& m, const std::vector<Int>& v) {
    bool vzero = std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
    if (vzero) return true;
    IntMatrix ext(m.rows, m.cols + 1);
    for (long i = 0; i < m.rows; ++i) {
        for (long j = 0; j < m.cols; ++j) ext.at(i, j) = m.at(i, j);
        ext.at(i, m.cols) = v[i];
    }
    long r = rank(m);
    if (rank(ext) != r) return false;
    // Same span and same covolume (gcd of maximal minors) means same lattice.
    return minor_gcd(ext, r) == minor_gcd(m, r);
}

bool lattice_equal(const IntMatrix& a, const IntMatrix& b) {
    for (long j = 0; j < b.cols; ++j) {
        if (!in_lattice(a, b.column(j))) return false;
    }
    for (long j = 0; j < a.cols; ++j) {
        if (!in_lattice(b, a.column(j))) return false;
    }
    return true;
}

bool saturated(const IntMatrix& m) {
    long r = rank(m);
    if (r == 0) return m.cols == 0 || minor_gcd(m, 1) == 0;
    return minor_gcd(m, r) == 1;
}

std::map<std::pair<long, long>, long> classical_persistence(
    const saecula::FilteredComplex& x, long m, long p) {
    struct Ord {
        long grade, dim, id, cellindex;
    };
    std::vector<Ord> order;
    for (size_t i = 0; i < x.cells.size(); ++i) {
        const auto& c = x.cells[i];
        order.push_back({c.grade, c.dim, c.id, static_cast<long>(i)});
    }
    std::sort(order.begin(), order.end(), [](const Ord& a, const Ord& b) {
        return std::tie(a.grade, a.dim, a.id) < std::tie(b.grade, b.dim, b.id);
    });
    long total = static_cast<long>(order.size());
    std::map<long, long> pos_of_id; // cell id -> position in filtration order
    for (long i = 0; i < total; ++i) pos_of_id[order[i].id] = i;

    auto modp = [&](const Int& v) {
        Int r = v % p;
        if (r < 0) r += p;
        return static_cast<long>(r.get_si());
    };
    // columns[j][row] over F_p, sparse as map
    std::vector<std::map<long, long>> cols(total);
    for (long j = 0; j < total; ++j) {
        const auto& c = x.cells[order[j].cellindex];
        for (const auto& [fid, coeff] : c.boundary) {
            long v = modp(coeff);
            if (v != 0) cols[j][pos_of_id.at(fid)] = v;
        }
    }
    auto low = [](const std::map<long, long>& col) -> long {
        return col.empty() ? -1 : col.rbegin()->first;
    };
    auto inv_mod = [&](long a) {
        long t = 1, base = a % p, e = p - 2;
        while (e) {
            if (e & 1) t = t * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return t;
    };
    std::vector<long> owner(total, -1); // low row -> column index
    for (long j = 0; j < total; ++j) {
        long l;
        while ((l = low(cols[j])) >= 0 && owner[l] >= 0) {
            long k = owner[l];
            long f = cols[j][l] * inv_mod(cols[k].at(l)) % p;
            for (const auto& [r, v] : cols[k]) {
                long nv = ((cols[j].count(r) ? cols[j][r] : 0) - f * v) % p;
                nv = (nv % p + p) % p;
                if (nv == 0)
                    cols[j].erase(r);
                else
                    cols[j][r] = nv;
            }
        }
        if (l >= 0) owner[l] = j;
    }
    long n = x.top_grade();
    std::map<std::pair<long, long>, long> bars;
    std::vector<bool> paired(total, false);
    for (long j = 0; j < total; ++j) {
        long l = low(cols[j]);
        if (l >= 0) {
            paired[l] = true;
            paired[j] = true;
            if (order[l].dim == m && order[l].grade < order[j].grade)
                bars[{order[l].grade, order[j].grade}] += 1;
        }
    }
    for (long j = 0; j < total; ++j) {
        if (order[j].dim != m || paired[j]) continue;
        if (low(cols[j]) >= 0) continue; // negative column, pairs elsewhere
        bars[{order[j].grade, n + 1}] += 1;
    }
    return bars;
}

} // namespace oracle

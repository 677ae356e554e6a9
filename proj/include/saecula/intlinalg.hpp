#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace saecula {

using Int = mpz_class;

/* Dense row-major matrix over Z.  All arithmetic is arbitrary precision;
 * fixed-width shortcuts are never part of the contract. */
struct IntMatrix {
    int rows = 0, cols = 0;
    std::vector<Int> e;

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), e((size_t)r * c) {}
    IntMatrix(int r, int c, std::vector<Int> ent) : rows(r), cols(c), e(std::move(ent)) {
        if ((size_t)rows * cols != e.size()) throw std::invalid_argument("entry count");
    }

    Int& at(int r, int c) { return e[(size_t)r * cols + c]; }
    const Int& at(int r, int c) const { return e[(size_t)r * cols + c]; }

    static IntMatrix identity(int n);
    static IntMatrix zero(int r, int c) { return IntMatrix(r, c); }
    static IntMatrix from_columns(int rows, const std::vector<std::vector<Int>>& cols);

    std::vector<Int> column(int c) const;
    bool is_zero() const;

    bool operator==(const IntMatrix& o) const { return rows == o.rows && cols == o.cols && e == o.e; }
};

IntMatrix mul(const IntMatrix& a, const IntMatrix& b);
std::vector<Int> mul(const IntMatrix& a, const std::vector<Int>& v);
IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b);
IntMatrix transpose(const IntMatrix& a);

struct SmithDecomposition {
    IntMatrix U, D, V;   // U*M*V = D, diag(D) >= 0 with divisibility chain
    IntMatrix Uinv;      // maintained alongside U; columns are the adapted basis
    std::vector<Int> diagonal() const;
};

/* Canonical column-style Hermite form: column echelon, pivot rows strictly
 * increasing, pivots positive, entries left of each pivot reduced into
 * [0, pivot), zero columns dropped.  Unique per column lattice, so equality
 * of forms is equality of lattices. */
IntMatrix hnf(const IntMatrix& m);
SmithDecomposition snf(const IntMatrix& m);
IntMatrix kernel_basis(const IntMatrix& m);  // saturated, returned in HNF
bool in_column_lattice(const IntMatrix& m, const std::vector<Int>& v);

/* Incremental column echelon over Z.  Columns stay echelon (pivot rows
 * increasing, pivots positive, zeros above each pivot) while columns are
 * merged in; the reduced-left-of-pivot property is restored on export.
 * Echelon columns are already a lattice basis, which is what the grade-sliced
 * cycle/boundary computations consume. */
struct ColumnEchelon {
    int rows = 0;
    std::vector<std::vector<Int>> col;  // column-major
    std::vector<int> piv;               // piv[j] = pivot row of col[j]

    explicit ColumnEchelon(int r = 0) : rows(r) {}
    void add_column(std::vector<Int> c);
    void add_columns(const IntMatrix& m);
    int rank() const { return (int)col.size(); }
    // least j with piv[j] >= r, i.e. columns j.. vanish on rows < r
    int first_pivot_at_or_below(int r) const;
    IntMatrix basis() const;             // echelon, not reduced
    IntMatrix canonical() const;         // full HNF
    // back-substitution; nullopt when v is outside the column lattice
    std::optional<std::vector<Int>> solve(const std::vector<Int>& v) const;
    bool contains(const std::vector<Int>& v) const { return solve(v).has_value(); }
};

/* Same interface modulo a prime.  Pivots are normalized to 1; canonical()
 * is the reduced column echelon form. */
struct ColumnEchelonFp {
    int rows = 0;
    int64_t p = 2;
    std::vector<std::vector<int64_t>> col;
    std::vector<int> piv;

    ColumnEchelonFp(int r, int64_t prime) : rows(r), p(prime) {}
    void add_column(std::vector<int64_t> c);
    void add_columns(const IntMatrix& m);
    int rank() const { return (int)col.size(); }
    int first_pivot_at_or_below(int r) const;
    IntMatrix basis() const;
    IntMatrix canonical() const;
    std::optional<std::vector<Int>> solve(const std::vector<Int>& v) const;
};

int64_t fp_inv(int64_t a, int64_t p);
std::vector<int64_t> fp_column(const IntMatrix& m, int c, int64_t p);

/* Kernel accumulator: feed columns left to right; every column that reduces
 * to zero yields one kernel basis vector over the columns seen so far.  The
 * vectors collected after t columns form a saturated basis of the kernel of
 * the first t columns (the transform matrix stays unimodular throughout). */
struct KernelBuilder {
    int rows = 0;
    int fed = 0;
    std::vector<std::vector<Int>> col, tr;  // echelon columns + their expressions
    std::vector<int> piv;
    std::vector<std::vector<Int>> kernel;   // found kernel vectors, coords = fed columns

    explicit KernelBuilder(int r = 0) : rows(r) {}
    // returns index into kernel if the column closed a relation
    std::optional<int> add_column(const std::vector<Int>& c);
    void add_columns(const IntMatrix& m);
};

struct KernelBuilderFp {
    int rows = 0;
    int64_t p = 2;
    int fed = 0;
    std::vector<std::vector<int64_t>> col, tr;
    std::vector<int> piv;
    std::vector<std::vector<int64_t>> kernel;

    KernelBuilderFp(int r, int64_t prime) : rows(r), p(prime) {}
    std::optional<int> add_column(std::vector<int64_t> c);
    void add_columns(const IntMatrix& m);
};

/* Coefficient domain.  Z is the default; Q is handled through saturated
 * integer lattices so the integer back-substitution stays valid; Fp swaps in
 * mod-p echelon arithmetic. */
enum class CoeffKind { Z, Q, Fp };

struct Coeff {
    CoeffKind kind = CoeffKind::Z;
    int64_t p = 0;
    bool is_field() const { return kind != CoeffKind::Z; }
    bool operator==(const Coeff&) const = default;
    static Coeff z() { return {CoeffKind::Z, 0}; }
    static Coeff q() { return {CoeffKind::Q, 0}; }
    static Coeff fp(int64_t p) { return {CoeffKind::Fp, p}; }
    std::string str() const;
};

// smallest saturated lattice containing the column span
IntMatrix saturate(const IntMatrix& m);

/* Domain-dispatched canonical forms: these four are the only entry points the
 * algebra layers above use, so Z, Q and Fp share one code path up there. */
IntMatrix col_basis(const IntMatrix& gens, const Coeff& c);
IntMatrix kernel(const IntMatrix& m, const Coeff& c);
std::optional<std::vector<Int>> solve_in_basis(const IntMatrix& basis, const std::vector<Int>& v,
                                               const Coeff& c);
bool spans_contain(const IntMatrix& basis, const IntMatrix& cols, const Coeff& c);

inline Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace saecula

#include "saecula/abgrp.hpp"

#include <algorithm>

namespace saecula {

namespace {

long li(int x) { return static_cast<long>(x); }
int ii(long x) { return static_cast<int>(x); }

IntMatrix neg(const IntMatrix& m) {
    IntMatrix out = m;
    for (auto& v : out.e) v = -v;
    return out;
}

} // namespace

AbPresentation AbPresentation::free_of_rank(Coeff c, long n) {
    AbPresentation p;
    p.coeff = c;
    p.ambient_rank = n;
    p.relations = IntMatrix(ii(n), 0);
    return p;
}

bool pres_equal(const AbPresentation& a, const AbPresentation& b) {
    return a.coeff == b.coeff && a.ambient_rank == b.ambient_rank &&
           a.relations == b.relations;
}

SubgroupElt sub_zero(const AbPresentation& g) {
    return {g, col_basis(g.relations, g.coeff)};
}

SubgroupElt sub_full(const AbPresentation& g) {
    return {g, col_basis(IntMatrix::identity(ii(g.ambient_rank)), g.coeff)};
}

SubgroupElt sub_from_gens(const AbPresentation& g, const IntMatrix& gens) {
    if (li(gens.rows) != g.ambient_rank)
        throw ValidationError("generator rows do not match ambient rank");
    return {g, col_basis(hconcat(gens, g.relations), g.coeff)};
}

bool sub_leq(const SubgroupElt& a, const SubgroupElt& b) {
    return spans_contain(b.basis, a.basis, a.parent.coeff);
}

bool sub_contains_vec(const SubgroupElt& a, const std::vector<Int>& v) {
    return solve_in_basis(a.basis, v, a.parent.coeff).has_value();
}

SubgroupElt sub_join(const SubgroupElt& a, const SubgroupElt& b) {
    return {a.parent, col_basis(hconcat(a.basis, b.basis), a.parent.coeff)};
}

SubgroupElt sub_meet(const SubgroupElt& a, const SubgroupElt& b) {
    const Coeff& c = a.parent.coeff;
    IntMatrix block = hconcat(a.basis, neg(b.basis));
    IntMatrix ker = kernel(block, c);
    IntMatrix xa(a.basis.cols, ker.cols);
    for (int i = 0; i < a.basis.cols; ++i)
        for (int j = 0; j < ker.cols; ++j) xa.at(i, j) = ker.at(i, j);
    IntMatrix gens = mul(a.basis, xa);
    return {a.parent, col_basis(hconcat(gens, a.parent.relations), c)};
}

AbHom AbHom::identity(const AbPresentation& g) {
    return {g, g, IntMatrix::identity(ii(g.ambient_rank))};
}

bool hom_well_defined(const AbHom& f) {
    if (li(f.matrix.rows) != f.target.ambient_rank) return false;
    if (li(f.matrix.cols) != f.source.ambient_rank) return false;
    if (f.source.coeff != f.target.coeff) return false;
    if (f.source.relations.cols == 0) return true;
    IntMatrix mapped = mul(f.matrix, f.source.relations);
    SubgroupElt tz = sub_zero(f.target);
    return spans_contain(tz.basis, mapped, f.target.coeff);
}

AbHom hom_compose(const AbHom& g, const AbHom& f) {
    if (!pres_equal(f.target, g.source))
        throw ValidationError("hom composition: target/source mismatch");
    return {f.source, g.target, mul(g.matrix, f.matrix)};
}

SubgroupElt hom_image(const AbHom& f, const SubgroupElt& s) {
    IntMatrix mapped = mul(f.matrix, s.basis);
    return {f.target, col_basis(hconcat(mapped, f.target.relations), f.target.coeff)};
}

SubgroupElt hom_preimage(const AbHom& f, const SubgroupElt& t) {
    const Coeff& c = f.source.coeff;
    IntMatrix block = hconcat(f.matrix, neg(t.basis));
    IntMatrix ker = kernel(block, c);
    int n = f.matrix.cols;
    IntMatrix x(n, ker.cols);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < ker.cols; ++j) x.at(i, j) = ker.at(i, j);
    return {f.source, col_basis(hconcat(x, f.source.relations), c)};
}

namespace {

// coordinates of den's columns in num's basis; throws when not nested
IntMatrix coords_in(const SubgroupElt& num, const SubgroupElt& den) {
    const Coeff& c = num.parent.coeff;
    IntMatrix w(num.basis.cols, den.basis.cols);
    for (int j = 0; j < den.basis.cols; ++j) {
        auto sol = solve_in_basis(num.basis, den.basis.column(j), c);
        if (!sol)
            throw NaturalityFailure("quotient: denominator not inside numerator");
        for (int i = 0; i < num.basis.cols; ++i) w.at(i, j) = (*sol)[i];
    }
    return w;
}

} // namespace

QuotientShape quotient_shape(const SubgroupElt& num, const SubgroupElt& den) {
    return quotient_data(num, den).shape;
}

QuotientData quotient_data(const SubgroupElt& num, const SubgroupElt& den) {
    const Coeff& c = num.parent.coeff;
    IntMatrix w = coords_in(num, den);
    int k = num.basis.cols;
    QuotientData out;
    out.shape.coeff = c;
    if (c.kind == CoeffKind::Z) {
        SmithDecomposition s = snf(w);
        std::vector<Int> diag = s.diagonal();
        long rank_w = 0;
        for (const auto& d : diag)
            if (d != 0) ++rank_w;
        out.shape.free_rank = k - rank_w;
        std::vector<std::vector<Int>> gens;
        for (size_t i = 0; i < diag.size(); ++i) {
            if (diag[i] > 1) {
                out.shape.invariant_factors.push_back(diag[i]);
                gens.push_back(mul(num.basis, s.Uinv.column(ii(i))));
            }
        }
        for (int i = ii(diag.size()); i < k; ++i)
            gens.push_back(mul(num.basis, s.Uinv.column(i)));
        for (size_t i = 0; i < diag.size(); ++i)
            if (diag[i] == 0) gens.push_back(mul(num.basis, s.Uinv.column(ii(i))));
        out.gens = IntMatrix::from_columns(num.basis.rows, gens);
    } else {
        IntMatrix wb = col_basis(w, c);
        out.shape.free_rank = k - wb.cols;
        // complement basis: unit vectors extending the span of w
        IntMatrix cur = wb;
        std::vector<std::vector<Int>> gens;
        for (int i = 0; i < k && li(gens.size()) < out.shape.free_rank; ++i) {
            std::vector<Int> e(k, 0);
            e[i] = 1;
            if (!solve_in_basis(cur, e, c)) {
                gens.push_back(mul(num.basis, e));
                IntMatrix ecol(k, 1);
                ecol.at(i, 0) = 1;
                cur = col_basis(hconcat(cur, ecol), c);
            }
        }
        out.gens = IntMatrix::from_columns(num.basis.rows, gens);
    }
    return out;
}

JhVector jh_vector(const QuotientShape& q) {
    JhVector v;
    switch (q.coeff.kind) {
        case CoeffKind::Z: {
            v.free_rank = q.free_rank;
            v.finite = q.free_rank == 0;
            for (Int d : q.invariant_factors) {
                for (Int p = 2; p * p <= d; ++p) {
                    while (d % p == 0) {
                        v.torsion[p] += 1;
                        d /= p;
                    }
                }
                if (d > 1) v.torsion[d] += 1;
            }
            break;
        }
        case CoeffKind::Fp:
            if (q.free_rank > 0) v.torsion[Int(q.coeff.p)] = q.free_rank;
            break;
        case CoeffKind::Q:
            v.free_rank = q.free_rank;
            break;
    }
    return v;
}

JhVector jh_add(const JhVector& a, const JhVector& b) {
    JhVector v;
    v.finite = a.finite && b.finite;
    v.free_rank = a.free_rank + b.free_rank;
    v.torsion = a.torsion;
    for (const auto& [p, m] : b.torsion) v.torsion[p] += m;
    return v;
}

bool JhDelta::nonnegative() const {
    if (free_rank < 0) return false;
    for (const auto& [p, m] : torsion)
        if (m < 0) return false;
    return true;
}

JhDelta jh_delta(const JhVector& a) {
    JhDelta d;
    d.free_rank = a.free_rank;
    d.torsion = a.torsion;
    return d;
}

JhDelta jh_delta_add(const JhDelta& a, const JhDelta& b) {
    JhDelta d = a;
    d.free_rank += b.free_rank;
    for (const auto& [p, m] : b.torsion) d.torsion[p] += m;
    return d;
}

JhDelta jh_delta_sub(const JhDelta& a, const JhDelta& b) {
    JhDelta d = a;
    d.free_rank -= b.free_rank;
    for (const auto& [p, m] : b.torsion) d.torsion[p] -= m;
    return d;
}

JhVector jh_from_delta(const JhDelta& d, const Coeff& c) {
    if (!d.nonnegative())
        throw NaturalityFailure("negative multiplicity after inversion");
    JhVector v;
    v.free_rank = d.free_rank;
    for (const auto& [p, m] : d.torsion)
        if (m != 0) v.torsion[p] = m;
    v.finite = c.kind != CoeffKind::Z || d.free_rank == 0;
    return v;
}

std::string shape_str(const QuotientShape& q) {
    std::string base;
    switch (q.coeff.kind) {
        case CoeffKind::Z: base = "Z"; break;
        case CoeffKind::Q: base = "Q"; break;
        case CoeffKind::Fp: base = "F" + std::to_string(q.coeff.p); break;
    }
    std::string out;
    if (q.free_rank == 1) out = base;
    else if (q.free_rank > 1) out = base + "^" + std::to_string(q.free_rank);
    for (const auto& d : q.invariant_factors) {
        if (!out.empty()) out += " + ";
        out += "C" + d.get_str();
    }
    return out.empty() ? "0" : out;
}

} // namespace saecula

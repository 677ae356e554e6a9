#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "gen.hpp"
#include "oracles.hpp"
#include "saecula/homology.hpp"

using namespace saecula;

namespace {

// disk glued in twice: a vertex and a loop at grade 1, then 2-cells with
// boundary 4z (grade 2) and 2z (grade 3); H_1 runs Z -> Z/4 -> Z/2
FilteredComplex disk(Coeff c = Coeff::z()) {
    FilteredComplex x;
    x.coeff = c;
    x.cells.push_back({0, 0, 1, {}});
    x.cells.push_back({1, 1, 1, {}});
    x.cells.push_back({2, 2, 2, {{1, Int(4)}}});
    x.cells.push_back({3, 2, 3, {{1, Int(2)}}});
    return x;
}

JhVector object_jh(const AbPresentation& g) {
    return jh_vector(quotient_shape(sub_full(g), sub_zero(g)));
}

std::map<std::pair<long, long>, long> field_bars(const HomologyBarcode& bc) {
    std::map<std::pair<long, long>, long> out;
    for (const auto& [itv, bar] : bc)
        if (bar.shape.free_rank > 0) out[{itv.p, itv.q}] = bar.shape.free_rank;
    return out;
}

using FactorKey = std::tuple<long, long, long, std::vector<Int>>;

std::vector<FactorKey> homology_keys(const HomologyBarcode& bc) {
    std::vector<FactorKey> out;
    for (const auto& [itv, bar] : bc)
        out.emplace_back(itv.p, itv.q, bar.shape.free_rank, bar.shape.invariant_factors);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<FactorKey> diagram_keys(const Barcode& bc) {
    std::vector<FactorKey> out;
    for (const auto& [itv, fac] : bc)
        out.emplace_back(itv.p, itv.q, fac.shape.free_rank, fac.shape.invariant_factors);
    std::sort(out.begin(), out.end());
    return out;
}

IntMatrix boundary_matrix(const FilteredComplex& x, long m) {
    std::vector<long> rows, cols;
    for (const auto& c : x.cells) {
        if (c.dim == m - 1) rows.push_back(c.id);
        if (c.dim == m) cols.push_back(c.id);
    }
    IntMatrix d(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) {
        for (const auto& cell : x.cells)
            if (cell.id == cols[j])
                for (const auto& [fid, coef] : cell.boundary) {
                    size_t i = static_cast<size_t>(
                        std::find(rows.begin(), rows.end(), fid) - rows.begin());
                    d.at(static_cast<int>(i), static_cast<int>(j)) = coef;
                }
    }
    return d;
}

} // namespace

TEST_CASE("complex validation") {
    FilteredComplex x = disk();
    CHECK(validate(x).empty());
    validate_or_throw(x);

    FilteredComplex dup = disk();
    dup.cells[3].id = 2;
    CHECK(!validate(dup).empty());

    FilteredComplex grade = disk();
    grade.cells[0].grade = 0;
    CHECK(!validate(grade).empty());

    FilteredComplex late = disk();
    late.cells[2].grade = 1; // face would appear before... same grade is fine
    CHECK(validate(late).empty());
    late.cells[1].grade = 2; // now the 2-cells cite a face from the future
    CHECK(!validate(late).empty());

    FilteredComplex wrongdim = disk();
    wrongdim.cells[2].boundary = {{0, Int(1)}}; // 0-cell face of a 2-cell
    CHECK(!validate(wrongdim).empty());

    FilteredComplex missing = disk();
    missing.cells[2].boundary = {{7, Int(1)}};
    CHECK(!validate(missing).empty());

    // dd != 0
    FilteredComplex dd;
    dd.coeff = Coeff::z();
    dd.cells.push_back({0, 0, 1, {}});
    dd.cells.push_back({1, 0, 1, {}});
    dd.cells.push_back({2, 1, 1, {{0, Int(1)}, {1, Int(-1)}}});
    dd.cells.push_back({3, 1, 1, {{0, Int(1)}, {1, Int(-1)}}});
    dd.cells.push_back({4, 2, 2, {{2, Int(1)}, {3, Int(1)}}});
    CHECK(!validate(dd).empty());
    dd.cells[4].boundary = {{2, Int(1)}, {3, Int(-1)}};
    CHECK(validate(dd).empty());

    FilteredComplex notprime = disk(Coeff::fp(2));
    CHECK(validate(notprime).empty());
}

TEST_CASE("cycle and boundary filtrations of the disk") {
    FilteredComplex x = disk();
    CycleBoundaryFiltrations f1 = cycle_boundary_filtrations(x, 1);
    REQUIRE(f1.cell_ids == std::vector<long>{1});
    CHECK(f1.z[0].basis.cols == 0);
    for (long a = 1; a <= 3; ++a) CHECK(f1.z[a] == sub_full(f1.ambient));
    CHECK(f1.b[0].basis.cols == 0);
    CHECK(f1.b[1].basis.cols == 0);
    IntMatrix four(1, 1), two(1, 1);
    four.at(0, 0) = 4;
    two.at(0, 0) = 2;
    CHECK(f1.b[2] == sub_from_gens(f1.ambient, four));
    CHECK(f1.b[3] == sub_from_gens(f1.ambient, two));
    CHECK(f1.b[4] == f1.z[3]);

    CycleBoundaryFiltrations f2 = cycle_boundary_filtrations(x, 2);
    REQUIRE(f2.cell_ids == std::vector<long>{2, 3});
    CHECK(f2.z[2].basis.cols == 0);
    IntMatrix kv(2, 1);
    kv.at(0, 0) = 1;
    kv.at(1, 0) = -2;
    CHECK(f2.z[3] == sub_from_gens(f2.ambient, kv));
    for (long a = 0; a <= 3; ++a) CHECK(f2.b[a].basis.cols == 0);
    CHECK(f2.b[4] == f2.z[3]);
}

TEST_CASE("disk barcode with representatives") {
    FilteredComplex x = disk();

    HomologyBarcode h0 = homology_barcode(x, 0);
    REQUIRE(h0.size() == 1);
    CHECK(h0.at({1, 4}).shape.free_rank == 1);
    CHECK(h0.at({1, 4}).reps ==
          std::vector<std::vector<std::pair<long, Int>>>{{{0, Int(1)}}});

    HomologyBarcode h1 = homology_barcode(x, 1);
    REQUIRE(h1.size() == 3);
    CHECK(h1.at({1, 2}).shape.free_rank == 1);
    CHECK(h1.at({1, 2}).shape.invariant_factors.empty());
    CHECK(shape_str(h1.at({1, 3}).shape) == "C2");
    CHECK(shape_str(h1.at({1, 4}).shape) == "C2");
    CHECK(h1.at({1, 2}).reps ==
          std::vector<std::vector<std::pair<long, Int>>>{{{1, Int(4)}}});
    CHECK(h1.at({1, 3}).reps ==
          std::vector<std::vector<std::pair<long, Int>>>{{{1, Int(2)}}});
    CHECK(h1.at({1, 4}).reps ==
          std::vector<std::vector<std::pair<long, Int>>>{{{1, Int(1)}}});

    HomologyBarcode h2 = homology_barcode(x, 2);
    REQUIRE(h2.size() == 1);
    CHECK(h2.at({3, 4}).shape.free_rank == 1);
    CHECK(h2.at({3, 4}).reps ==
          std::vector<std::vector<std::pair<long, Int>>>{
              {{2, Int(1)}, {3, Int(-2)}}});

    // degrees without cells have empty barcodes
    CHECK(homology_barcode(x, 3).empty());
}

TEST_CASE("homology diagram of the disk matches the tower Z -> Z/4 -> Z/2") {
    FilteredComplex x = disk();
    ChainDiagram d = homology_diagram(x, 1);
    REQUIRE(validate(d).empty());
    REQUIRE(d.length() == 3);
    CHECK(shape_str(quotient_shape(sub_full(d.obj(1)), sub_zero(d.obj(1)))) == "Z");
    CHECK(shape_str(quotient_shape(sub_full(d.obj(2)), sub_zero(d.obj(2)))) == "C4");
    CHECK(shape_str(quotient_shape(sub_full(d.obj(3)), sub_zero(d.obj(3)))) == "C2");

    Barcode generic = barcode(d);
    CHECK(diagram_keys(generic) == homology_keys(homology_barcode(x, 1)));
}

TEST_CASE("representatives are cycles born at the bar") {
    gen::Rng r(501);
    for (int t = 0; t < 25; ++t) {
        FilteredComplex x = gen::random_torsion_complex(r, Coeff::z(), 10, 3);
        REQUIRE(validate(x).empty());
        for (long m = 0; m <= x.top_dim(); ++m) {
            IntMatrix bd = boundary_matrix(x, m);
            std::map<long, size_t> colpos;
            {
                size_t j = 0;
                for (const auto& c : x.cells)
                    if (c.dim == m) colpos[c.id] = j++;
            }
            std::map<long, long> grade_of;
            for (const auto& c : x.cells) grade_of[c.id] = c.grade;
            for (const auto& [itv, bar] : homology_barcode(x, m)) {
                for (const auto& rep : bar.reps) {
                    REQUIRE(!rep.empty());
                    std::vector<Int> v(static_cast<size_t>(bd.cols), Int(0));
                    long maxgrade = 0;
                    for (const auto& [id, coef] : rep) {
                        v[colpos.at(id)] = coef;
                        maxgrade = std::max(maxgrade, grade_of.at(id));
                    }
                    if (bd.rows > 0) CHECK(IntMatrix::from_columns(bd.rows, {mul(bd, v)}).is_zero());
                    CHECK(maxgrade == itv.p);
                }
            }
        }
    }
}

TEST_CASE("field barcodes match the classical persistence oracle") {
    gen::Rng r(502);
    for (Coeff c : {Coeff::fp(2), Coeff::fp(5)}) {
        for (int t = 0; t < 30; ++t) {
            FilteredComplex x = gen::random_simplicial(r, c, 12, 3);
            REQUIRE(validate(x).empty());
            for (long m = 0; m <= x.top_dim(); ++m) {
                auto expect = oracle::classical_persistence(x, m, c.p);
                CHECK(field_bars(homology_barcode(x, m)) == expect);
            }
        }
    }
}

TEST_CASE("sweep engine agrees with the generic saecular path") {
    gen::Rng r(503);
    for (int t = 0; t < 20; ++t) {
        FilteredComplex x = gen::random_torsion_complex(r, Coeff::z(), 9, 3);
        for (long m = 0; m <= x.top_dim(); ++m) {
            ChainDiagram d = homology_diagram(x, m);
            CHECK(homology_keys(homology_barcode(x, m)) == diagram_keys(barcode(d)));
        }
    }
    for (int t = 0; t < 12; ++t) {
        FilteredComplex x = gen::random_simplicial(r, Coeff::z(), 10, 2);
        for (long m = 0; m <= x.top_dim(); ++m) {
            ChainDiagram d = homology_diagram(x, m);
            CHECK(homology_keys(homology_barcode(x, m)) == diagram_keys(barcode(d)));
        }
    }
    for (Coeff c : {Coeff::q(), Coeff::fp(3)}) {
        for (int t = 0; t < 10; ++t) {
            FilteredComplex x = gen::random_simplicial(r, c, 10, 2);
            for (long m = 0; m <= x.top_dim(); ++m) {
                ChainDiagram d = homology_diagram(x, m);
                CHECK(homology_keys(homology_barcode(x, m)) == diagram_keys(barcode(d)));
            }
        }
    }
}

TEST_CASE("spectral subgroups nest and quotients are consistent") {
    gen::Rng r(504);
    for (int t = 0; t < 10; ++t) {
        FilteredComplex x = gen::random_simplicial(r, Coeff::fp(2), 10, 2);
        long n = x.top_grade();
        for (long m = 0; m <= x.top_dim(); ++m)
            for (long r2 = 0; r2 <= n + 1; ++r2)
                for (long p = 0; p <= n; ++p) {
                    SpectralSubgroups s = ls_subgroups(x, p, m - p, r2);
                    CHECK(sub_leq(s.b, s.z));
                    CHECK(sub_leq(s.den, s.z));
                    SpectralTerm term = ls_term(x, p, m - p, r2);
                    CHECK(term.z_shape == quotient_shape(s.z, sub_zero(s.z.parent)));
                    CHECK(term.b_shape == quotient_shape(s.b, sub_zero(s.b.parent)));
                    CHECK(term.e_shape == quotient_shape(s.z, s.den));
                }
    }
}

TEST_CASE("spectral pages of the disk") {
    FilteredComplex x = disk();
    // page 1, degree 1: E^1_{1,0} = Z (the loop survives one step),
    // E^1_{2,-1} = E^1_{3,-2} = 0 (no degree-1 cells at grades 2, 3)
    std::vector<SpectralTerm> page = ls_terms(x, 1, 1);
    REQUIRE(page.size() == 4);
    CHECK(page[0].e_shape.trivial()); // p = 0: nothing below grade 1
    CHECK(page[1].e_shape.free_rank == 1);
    CHECK(page[1].e_shape.invariant_factors.empty());
    CHECK(page[2].e_shape.trivial());
    CHECK(page[3].e_shape.trivial());

    // at page r the loop class has been hit by 4z and 2z; on large pages in
    // degree 1 the infinity term at p = 1 is the surviving C2
    std::vector<SpectralTerm> inf = ls_terms(x, 1, 5);
    CHECK(shape_str(inf[1].e_shape) == "C2");
    CHECK(inf[0].e_shape.trivial());
    CHECK(inf[2].e_shape.trivial());
    CHECK(inf[3].e_shape.trivial());

    // degree 2: the essential cycle A - 2B appears at grade 3
    std::vector<SpectralTerm> deg2 = ls_terms(x, 2, 5);
    CHECK(deg2[3].e_shape.free_rank == 1);
    CHECK(deg2[0].e_shape.trivial());
    CHECK(deg2[1].e_shape.trivial());
    CHECK(deg2[2].e_shape.trivial());
}

TEST_CASE("infinity page reassembles the homology of the full complex") {
    gen::Rng r(505);
    for (Coeff c : {Coeff::fp(2), Coeff::fp(5)}) {
        for (int t = 0; t < 10; ++t) {
            FilteredComplex x = gen::random_simplicial(r, c, 11, 2);
            long n = x.top_grade();
            for (long m = 0; m <= x.top_dim(); ++m) {
                JhVector total;
                for (const SpectralTerm& term : ls_terms(x, m, n + 2))
                    total = jh_add(total, jh_vector(term.e_shape));
                JhVector expect;
                for (const auto& [itv, bar] : homology_barcode(x, m))
                    if (itv.q == n + 1) expect = jh_add(expect, jh_vector(bar.shape));
                CHECK(total == expect);
            }
        }
    }
}

TEST_CASE("page predictions from a hand barcode") {
    // degree-m bars: [1,3) and [2,5); degree-(m-1) bars: [1,2) and [3,5);
    // chain length n = 4, essential death is 5
    Coeff c = Coeff::fp(2);
    auto mk = [&](long p, long q) {
        HomologyBar b;
        b.support = {p, q};
        b.shape.coeff = c;
        b.shape.free_rank = 1;
        return std::pair<Interval, HomologyBar>({p, q}, b);
    };
    HomologyBarcode bm{mk(1, 3), mk(2, 5)}, bm1{mk(1, 2), mk(3, 5)};
    long n = 4;

    auto dim = [](const JhVector& v) {
        long s = 0;
        for (const auto& [pr, m] : v.torsion) s += m;
        return s;
    };

    // z at (p, r): degree-m bars born by p, plus degree-(m-1) bars born by
    // p-r that die by p
    CHECK(dim(ls_predict_z(bm, bm1, n, 2, 0)) == 2 + 1); // [1,2) dies by 2, a <= 2
    CHECK(dim(ls_predict_z(bm, bm1, n, 2, 1)) == 2 + 1); // a <= 1: [1,2) still counts
    CHECK(dim(ls_predict_z(bm, bm1, n, 2, 2)) == 2 + 0); // a <= 0: none
    CHECK(dim(ls_predict_z(bm, bm1, n, 1, 1)) == 1 + 0);

    // b at (p, r): degree-m bars born by p dying by min(p+r, n)
    CHECK(dim(ls_predict_b(bm, n, 2, 0)) == 0);
    CHECK(dim(ls_predict_b(bm, n, 2, 1)) == 1); // [1,3): b <= 3
    CHECK(dim(ls_predict_b(bm, n, 4, 9)) == 1); // [2,5) is essential, never a boundary
    CHECK(dim(ls_predict_b(bm, n, 1, 2)) == 1);

    // e at (p, r): degree-m bars born exactly at p living past min(p+r-1, n),
    // plus degree-(m-1) bars dying exactly at p born by p-r
    CHECK(dim(ls_predict_e(bm, bm1, n, 2, 1)) == 1 + 1); // [2,5) alive past 2; [1,2) with a <= 1
    CHECK(dim(ls_predict_e(bm, bm1, n, 2, 2)) == 1 + 0); // [1,2) needs a <= 0 now
    CHECK(dim(ls_predict_e(bm, bm1, n, 1, 1)) == 1 + 0); // [1,3) alive past 1
    CHECK(dim(ls_predict_e(bm, bm1, n, 1, 3)) == 0 + 0); // [1,3) dead at min(3,4)=3
    CHECK(dim(ls_predict_e(bm, bm1, n, 5, 1)) == 0 + 1); // [3,5)? p=5 out of range for m; m-1 dies at 5
}

TEST_CASE("enumeration check passes over fields and refuses infinite length") {
    LsReport disk_report = ls_enumeration_check(disk(Coeff::fp(2)), 2, 5);
    CHECK(disk_report.ok);
    CHECK(disk_report.checked > 0);
    CHECK(disk_report.mismatches.empty());

    CHECK_THROWS_AS(ls_enumeration_check(disk(), 2, 5), InfiniteLengthError);

    gen::Rng r(506);
    for (Coeff c : {Coeff::fp(2), Coeff::fp(3)}) {
        for (int t = 0; t < 8; ++t) {
            FilteredComplex x = gen::random_torsion_complex(r, c, 9, 3);
            LsReport rep = ls_enumeration_check(x, x.top_dim(), x.top_grade() + 2);
            CHECK(rep.ok);
            CHECK(rep.mismatches.empty());
        }
    }
}

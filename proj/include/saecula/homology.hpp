#pragma once

#include <map>
#include <vector>

#include "saecula/saecular.hpp"

namespace saecula {

// One cell of a filtered complex. Boundary entries are (cell id, coefficient)
// pairs referring to cells of dimension dim-1 with grade <= this cell's.
struct Cell {
    long id = 0;
    long dim = 0;
    long grade = 1;
    std::vector<std::pair<long, Int>> boundary;
};

struct FilteredComplex {
    Coeff coeff;
    std::vector<Cell> cells;

    long top_grade() const; // n; 0 when empty
    long top_dim() const;
};

std::vector<ValidationIssue> validate(const FilteredComplex& x);
void validate_or_throw(const FilteredComplex& x);

// Cycle and boundary subgroups of the degree-m chain group of the full
// complex, one per grade. Ambient coordinates are the m-cells ordered by
// (grade, id) ascending; cell_ids maps coordinate -> cell id.
struct CycleBoundaryFiltrations {
    long m = 0;
    AbPresentation ambient;
    std::vector<long> cell_ids;
    std::vector<SubgroupElt> z; // 0..n, z[a] = cycles supported on grade <= a
    std::vector<SubgroupElt> b; // 0..n+1, b[a] = boundaries of grade <= a
                                // chains; b[n+1] = z[n]
};

CycleBoundaryFiltrations cycle_boundary_filtrations(const FilteredComplex& x, long m);

// One bar of the degree-m persistence barcode with explicit representative
// cycles, sparse by cell id; reps[i] generates the i-th cyclic factor.
struct HomologyBar {
    Interval support;
    QuotientShape shape;
    std::vector<std::vector<std::pair<long, Int>>> reps;
};

using HomologyBarcode = std::map<Interval, HomologyBar>;

HomologyBarcode homology_barcode(const FilteredComplex& x, long m);

// H_m as a chain diagram over the grades, with induced maps; indices 1..n.
ChainDiagram homology_diagram(const FilteredComplex& x, long m);

// Spectral sequence data for the grade filtration, homological convention,
// m = p + q. z = F_p /\ boundary-preimage of F_{p-r} in degree m; b =
// F_p /\ boundary-image of F_{p+r} from degree m+1; den is the denominator
// of the page subquotient e = z / den. F is clamped to 0 below grade 0 and
// to the full complex above the top grade.
struct SpectralSubgroups {
    long p = 0, q = 0, r = 0;
    SubgroupElt z, b, den;
};

SpectralSubgroups ls_subgroups(const FilteredComplex& x, long p, long q, long r);

struct SpectralTerm {
    long p = 0, q = 0, r = 0;
    QuotientShape z_shape, b_shape, e_shape;
};

SpectralTerm ls_term(const FilteredComplex& x, long p, long q, long r);
// Whole page in degrees m = p + q for p = 0..n.
std::vector<SpectralTerm> ls_terms(const FilteredComplex& x, long m, long r);

// Compares multiplicity vectors of directly computed z/b/e terms against the
// closed-form sums over barcode bars of degrees m and m-1. Requires finite
// length everywhere (field coefficients in practice).
struct LsMismatch {
    long p = 0, q = 0, r = 0;
    std::string which; // "z", "b" or "e"
    std::string detail;
};

struct LsReport {
    bool ok = true;
    long checked = 0;
    std::vector<LsMismatch> mismatches;
};

LsReport ls_enumeration_check(const FilteredComplex& x, long maxdim, long rmax);

// Barcode-side predictions used by the check; exposed for tests.
JhVector ls_predict_z(const HomologyBarcode& bm, const HomologyBarcode& bm1,
                      long n, long p, long r);
JhVector ls_predict_b(const HomologyBarcode& bm, long n, long p, long r);
JhVector ls_predict_e(const HomologyBarcode& bm, const HomologyBarcode& bm1,
                      long n, long p, long r);

} // namespace saecula

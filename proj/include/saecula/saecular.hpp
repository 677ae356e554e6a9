#pragma once

#include <functional>
#include <map>
#include <set>

#include "saecula/diagram.hpp"

namespace saecula {

// The two canonical filtrations of a chain diagram by image and kernel
// subdiagrams. khat[p] (1 <= p <= n) is the image filtration member; k[q]
// (1 <= q <= n+1) is the kernel filtration member, with k[n+1] full.
struct SaecularFiltrations {
    const ChainDiagram* diagram = nullptr;
    std::vector<SubDiagram> khat; // index 0 unused, 1..n
    std::vector<SubDiagram> k;    // index 0 unused, 1..n+1

    const SubDiagram& image_part(long p) const { return khat[p]; }
    const SubDiagram& kernel_part(long q) const { return k[q]; }
};

SaecularFiltrations saecular_filtrations(const ChainDiagram& d);

// a[p][q] = image_part(p) meet kernel_part(q), with zero row/column at 0.
struct CdfTable {
    const ChainDiagram* diagram = nullptr;
    long n = 0;
    std::vector<std::vector<SubDiagram>> a; // (n+1) x (n+2)

    const SubDiagram& at(long p, long q) const { return a[p][q]; }
};

CdfTable cdf_table(const ChainDiagram& d, const SaecularFiltrations& f);
CdfTable cdf_table(const ChainDiagram& d);

using Downset = std::set<Interval>;

std::vector<Interval> all_intervals(long n); // lexicographic order
bool is_downset(long n, const Downset& s);
Downset downset_of(long n, const Interval& itv);        // principal downset
Downset strict_downset_of(long n, const Interval& itv); // principal minus itv

// Join of the table entries over a downset; the empty downset gives the zero
// subdiagram. Throws ValidationError if s is not a downset.
SubDiagram omega_on_downset(const CdfTable& t, const Downset& s);

// One interval summand of the decomposition: numerator and denominator
// subdiagrams, the shape of the subquotient, and lifted generators expressed
// in the ambient coordinates of the object at index support.p.
struct IntervalFactor {
    Interval support;
    SubDiagram num;
    SubDiagram den;
    QuotientShape shape;
    IntMatrix generators;

    bool trivial() const { return shape.trivial(); }
};

// Factor at [p, q): numerator a[p][q], denominator a[p][q-1] v a[p-1][q].
// Verifies the interval-functor property; NaturalityFailure if violated.
IntervalFactor interval_factor(const CdfTable& t, const Interval& itv);

using Barcode = std::map<Interval, IntervalFactor>;

// All intervals with nonzero factor.
Barcode barcode(const ChainDiagram& d);
Barcode barcode_from_table(const CdfTable& t);

// Checks f(a<=b) K(a->b)-naturality: pushforwards hit the later member meet
// the image, pullbacks recover the earlier member join the kernel.
void check_naturality(const SaecularFiltrations& f, const SubDiagram& s);

struct LatticeHomIssue {
    std::string which; // "join" or "meet"
    std::string detail;
};

// Checks that the downset map is a lattice homomorphism on a family of
// downsets: omega(union) = join, omega(intersection) = meet, pairwise.
std::vector<LatticeHomIssue> check_lattice_hom(const CdfTable& t,
                                               const std::vector<Downset>& family);

// One step of the subsaecular series: after adjoining interval `support`,
// the new quotient sigma_k / sigma_{k-1} has the given shape.
struct SeriesStep {
    Interval support;
    QuotientShape shape;
    SubDiagram sigma;
};

struct SubsaecularSeries {
    std::vector<Interval> linearization;
    std::vector<SeriesStep> steps;   // one per linearization element
    std::vector<SeriesStep> reduced; // steps with nontrivial shape
};

// Runs the series along a linear extension of the interval poset (default:
// lexicographic). Throws ValidationError if `order` is not a linear
// extension covering all intervals.
SubsaecularSeries subsaecular_series(const ChainDiagram& d);
SubsaecularSeries subsaecular_series(const ChainDiagram& d,
                                     const std::vector<Interval>& order);

// Field coefficients only: one thread of basis vectors per bar, vecs[i] in
// the ambient of object support.p + i; pushing vecs[i] through the step map
// gives vecs[i+1] modulo the part of the basis from longer-lived bars.
struct DecompThread {
    Interval support;
    std::vector<std::vector<Int>> vecs;
};

// Interval decomposition over a field: for each index a, the vectors of the
// threads alive at a form a basis of the object mod relations.
std::vector<DecompThread> field_decompose(const ChainDiagram& d);

// Multiplicity vector of the image of the composite over [p, q), i.e. the
// rank invariant refined by composition factors.
JhVector rank_function(const ChainDiagram& d, const Interval& itv);

// Generalized persistence diagram obtained from the rank function by Mobius
// inversion over the interval poset; free rank inverts alongside the torsion
// multiplicities. Throws NaturalityFailure if any inverted entry is negative.
struct TypeBPd {
    std::map<Interval, JhVector> entries; // nonzero entries only
};

TypeBPd type_b_pd(const ChainDiagram& d);

} // namespace saecula

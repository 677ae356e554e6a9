// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Budgets are wall-clock seconds on a single commodity core.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "gen.hpp"
#include "oracles.hpp"
#include "saecula/json_io.hpp"

using namespace saecula;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int idx, const std::string& what, bool ok, double secs, double budget,
            const std::string& detail) {
    bool in_budget = budget <= 0 || secs < budget;
    if (ok && in_budget) {
        std::printf("[PASS] %d. %s (%.2f s", idx, what.c_str(), secs);
        if (budget > 0) std::printf(", budget %.0f s", budget);
        std::printf(")\n");
        return;
    }
    ++failures;
    std::printf("[FAIL] %d. %s (%.2f s", idx, what.c_str(), secs);
    if (budget > 0) std::printf(", budget %.0f s", budget);
    std::printf(")%s%s\n", detail.empty() && ok ? " over budget" : ": ",
                detail.empty() && ok ? "" : detail.c_str());
}

struct Timer {
    Clock::time_point start = Clock::now();
    double secs() const {
        return std::chrono::duration<double>(Clock::now() - start).count();
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

QuotientShape part_shape(const SubgroupElt& s) {
    return quotient_shape(s, sub_zero(s.parent));
}

using ShapeKey = std::pair<long, std::vector<Int>>;
ShapeKey key_of(const QuotientShape& s) { return {s.free_rank, s.invariant_factors}; }

using BarKey = std::tuple<long, long, long, std::vector<Int>>;
std::multiset<BarKey> bar_keys(const Barcode& bc) {
    std::multiset<BarKey> out;
    for (const auto& [itv, fac] : bc)
        out.insert({itv.p, itv.q, fac.shape.free_rank, fac.shape.invariant_factors});
    return out;
}

std::map<std::pair<long, long>, long> field_bars(const HomologyBarcode& bc) {
    std::map<std::pair<long, long>, long> out;
    for (const auto& [itv, bar] : bc)
        if (bar.shape.free_rank > 0) out[{itv.p, itv.q}] += bar.shape.free_rank;
    return out;
}

// two vertices joined by a ladder of parallel edges, each dying into the
// digon bounded with its predecessor; one stray vertex rounds out the count
FilteredComplex ladder_complex(Coeff c, long cells) {
    FilteredComplex x;
    x.coeff = c;
    long id = 0, grade = 1;
    x.cells.push_back({id++, 0, grade, {}});
    x.cells.push_back({id++, 0, grade, {}});
    x.cells.push_back({id++, 0, grade, {}});
    long edges = (cells - 3 + 1) / 2;
    long faces = cells - 3 - edges;
    std::vector<long> eid(static_cast<size_t>(edges));
    for (long i = 0; i < edges; ++i) {
        ++grade;
        eid[static_cast<size_t>(i)] = id;
        x.cells.push_back({id++, 1, grade, {{0, -1}, {1, 1}}});
    }
    for (long i = 0; i < faces; ++i) {
        ++grade;
        x.cells.push_back(
            {id++, 2, grade, {{eid[static_cast<size_t>(i + 1)], 1}, {eid[static_cast<size_t>(i)], -1}}});
    }
    return x;
}

void criterion_1() {
    Timer t;
    std::ostringstream det;
    ChainDiagram d = gen::cyclic_tower({9, 6, 4}, {2, 2});
    std::multiset<BarKey> want = {
        {1, 2, 0, {3}}, {1, 3, 0, {3}}, {2, 4, 0, {2}}, {3, 4, 0, {2}}};
    if (bar_keys(barcode(d)) != want) det << "barcode mismatch; ";

    CdfTable tab = cdf_table(d);
    std::vector<std::vector<Int>> l1 = {{3}, {}, {}};
    std::vector<std::vector<Int>> l2 = {{9}, {3}, {}};
    std::vector<std::vector<Int>> l3 = {{9}, {6}, {2}};
    std::vector<std::vector<Int>> l4 = {{9}, {6}, {4}};
    std::map<std::pair<long, long>, std::vector<std::vector<Int>>> grid = {
        {{1, 2}, l1}, {{1, 3}, l2}, {{1, 4}, l2},
        {{2, 3}, l2}, {{2, 4}, l3}, {{3, 4}, l4}};
    for (const auto& [pq, want_cols] : grid) {
        const SubDiagram& cell = tab.at(pq.first, pq.second);
        for (long a = 1; a <= 3; ++a) {
            QuotientShape s = part_shape(cell.part(a));
            if (s.free_rank != 0 || s.invariant_factors != want_cols[static_cast<size_t>(a - 1)])
                det << "cell (" << pq.first << "," << pq.second << ") index " << a
                    << " is " << shape_str(s) << "; ";
        }
    }
    report(1, "cyclic fixture: barcode and joint CDF cells frozen", det.str().empty(),
           t.secs(), 1.0, det.str());
}

void criterion_2() {
    Timer t;
    std::ostringstream det;
    FilteredComplex x = parse_filtered_complex(slurp(std::string(FIXTURE_DIR) + "/ddisk.json"));
    HomologyBarcode h1 = homology_barcode(x, 1);

    std::map<std::pair<long, long>, ShapeKey> want = {
        {{1, 2}, {1, {}}}, {{1, 3}, {0, {2}}}, {{1, 4}, {0, {2}}}};
    std::map<std::pair<long, long>, ShapeKey> got;
    for (const auto& [itv, bar] : h1) got[{itv.p, itv.q}] = key_of(bar.shape);
    if (got != want) det << "H1 barcode shape mismatch; ";

    // emitted generators must span the same cosets as 4z, 2z, z where z is
    // the lone 1-cell; denominators follow the nesting of the three bars
    CycleBoundaryFiltrations cb = cycle_boundary_filtrations(x, 1);
    std::map<long, long> coord;
    for (size_t i = 0; i < cb.cell_ids.size(); ++i) coord[cb.cell_ids[i]] = static_cast<long>(i);
    auto chain_vec = [&](const std::vector<std::pair<long, Int>>& sparse) {
        std::vector<Int> v(cb.cell_ids.size(), 0);
        for (const auto& [id, c] : sparse) v[static_cast<size_t>(coord.at(id))] = c;
        return v;
    };
    long zeta = x.cells[1].id;
    std::map<std::pair<long, long>, std::vector<Int>> expect_gen = {
        {{1, 2}, chain_vec({{zeta, 4}})},
        {{1, 3}, chain_vec({{zeta, 2}})},
        {{1, 4}, chain_vec({{zeta, 1}})}};
    std::map<std::pair<long, long>, std::vector<std::vector<Int>>> dens = {
        {{1, 2}, {}},
        {{1, 3}, {chain_vec({{zeta, 4}})}},
        {{1, 4}, {chain_vec({{zeta, 2}})}}};
    for (const auto& [itv, bar] : h1) {
        std::pair<long, long> pq{itv.p, itv.q};
        if (bar.reps.size() != 1) {
            det << "bar [" << itv.p << "," << itv.q << ") rep count; ";
            continue;
        }
        std::vector<std::vector<Int>> lhs_cols = dens[pq], rhs_cols = dens[pq];
        lhs_cols.push_back(chain_vec(bar.reps[0]));
        rhs_cols.push_back(expect_gen[pq]);
        long dim = static_cast<long>(cb.cell_ids.size());
        SubgroupElt lhs = sub_from_gens(
            cb.ambient, IntMatrix::from_columns(static_cast<int>(dim), lhs_cols));
        SubgroupElt rhs = sub_from_gens(
            cb.ambient, IntMatrix::from_columns(static_cast<int>(dim), rhs_cols));
        if (!(lhs == rhs)) det << "bar [" << itv.p << "," << itv.q << ") wrong coset; ";
    }
    report(2, "disk fixture: H1 barcode and generator cosets", det.str().empty(),
           t.secs(), 1.0, det.str());
}

void criterion_3() {
    Timer t;
    std::ostringstream det;
    long done = 0;
    for (long prime : {2L, 5L}) {
        gen::Rng r(500 + prime);
        for (int k = 0; k < 100; ++k) {
            FilteredComplex x = gen::random_simplicial(r, Coeff::fp(prime), 60, 3);
            ++done;
            for (long m = 0; m <= x.top_dim(); ++m) {
                auto got = field_bars(homology_barcode(x, m));
                auto want = oracle::classical_persistence(x, m, prime);
                if (got != want) {
                    det << "F" << prime << " complex " << k << " degree " << m << "; ";
                }
            }
        }
    }
    std::ostringstream what;
    what << "field barcodes equal column-reduction oracle on " << done << " complexes";
    report(3, what.str(), det.str().empty(), t.secs(), 30.0, det.str());
}

void criterion_4() {
    Timer t;
    std::ostringstream det;
    gen::Rng r(777);
    for (int k = 0; k < 200; ++k) {
        ChainDiagram d = gen::random_torsion_diagram(r, 6, 4);
        std::map<Interval, JhVector> expect;
        for (const auto& [itv, fac] : barcode(d)) {
            JhVector v = jh_vector(fac.shape);
            if (!v.zero()) expect[itv] = v;
        }
        if (type_b_pd(d).entries != expect) det << "diagram " << k << "; ";
    }
    report(4, "Mobius-inverted rank function equals JH of the barcode on 200 diagrams",
           det.str().empty(), t.secs(), 60.0, det.str());
}

void criterion_5() {
    Timer t;
    std::ostringstream det;
    FilteredComplex disk =
        parse_filtered_complex(slurp(std::string(FIXTURE_DIR) + "/ddisk.json"));
    disk.coeff = Coeff::fp(2);
    LsReport dr = ls_enumeration_check(disk, disk.top_dim(), -1);
    if (!dr.ok) det << "disk over F2: " << dr.mismatches.size() << " mismatches; ";
    long checked = dr.checked;

    gen::Rng r(321);
    for (int k = 0; k < 50; ++k) {
        long prime = (k % 2 == 0) ? 2 : 3;
        FilteredComplex x = gen::random_torsion_complex(r, Coeff::fp(prime), 40, 3);
        LsReport rep = ls_enumeration_check(x, x.top_dim(), -1);
        checked += rep.checked;
        if (!rep.ok)
            det << "complex " << k << " over F" << prime << ": "
                << rep.mismatches[0].detail << "; ";
    }
    std::ostringstream what;
    what << "spectral enumeration identities at " << checked << " grid points";
    report(5, what.str(), det.str().empty(), t.secs(), 60.0, det.str());
}

void criterion_6() {
    Timer t;
    std::ostringstream det;
    gen::Rng r(640);
    long pairs = 0;

    // exhaustive family: every downset of the interval poset, n <= 3
    for (long n = 1; n <= 3; ++n) {
        ChainDiagram d = gen::random_torsion_diagram(r, n, 3);
        while (d.length() != n) d = gen::random_torsion_diagram(r, n, 3);
        CdfTable tab = cdf_table(d);
        std::vector<Interval> itvs = all_intervals(n);
        std::vector<Downset> family;
        for (unsigned long mask = 0; mask < (1UL << itvs.size()); ++mask) {
            Downset s;
            for (size_t i = 0; i < itvs.size(); ++i)
                if (mask & (1UL << i)) s.insert(itvs[i]);
            if (is_downset(n, s)) family.push_back(std::move(s));
        }
        pairs += static_cast<long>(family.size() * family.size());
        auto issues = check_lattice_hom(tab, family);
        if (!issues.empty()) det << "n=" << n << ": " << issues[0].detail << "; ";
    }

    // random pairs on longer diagrams
    long random_pairs = 0;
    while (random_pairs < 500) {
        ChainDiagram d = gen::random_torsion_diagram(r, 6, 3);
        long n = d.length();
        CdfTable tab = cdf_table(d);
        std::vector<Interval> itvs = all_intervals(n);
        std::vector<Downset> family;
        for (int j = 0; j < 8; ++j) {
            Downset s;
            for (int u = 0; u < 3; ++u) {
                const Interval& itv = itvs[static_cast<size_t>(r.below(static_cast<long>(itvs.size())))];
                Downset pd = downset_of(n, itv);
                s.insert(pd.begin(), pd.end());
            }
            family.push_back(std::move(s));
        }
        random_pairs += static_cast<long>(family.size() * family.size());
        auto issues = check_lattice_hom(tab, family);
        if (!issues.empty()) det << "random diagram: " << issues[0].detail << "; ";
    }
    pairs += random_pairs;
    std::ostringstream what;
    what << "downset evaluation is a lattice homomorphism on " << pairs << " pairs";
    report(6, what.str(), det.str().empty(), t.secs(), 0.0, det.str());
}

void criterion_7() {
    Timer t;
    std::ostringstream det;
    gen::Rng r(777);
    for (int k = 0; k < 200; ++k) {
        ChainDiagram d = gen::random_torsion_diagram(r, 6, 4);
        std::multiset<BarKey> want = bar_keys(barcode(d));
        for (int e = 0; e < 5; ++e) {
            std::vector<Interval> order = gen::random_linear_extension(r, d.length());
            SubsaecularSeries s = subsaecular_series(d, order);
            std::multiset<BarKey> got;
            for (const SeriesStep& st : s.reduced)
                got.insert({st.support.p, st.support.q, st.shape.free_rank,
                            st.shape.invariant_factors});
            if (got != want) det << "diagram " << k << " extension " << e << "; ";
        }
    }
    report(7, "subsaecular series is linearization independent, 200 x 5 extensions",
           det.str().empty(), t.secs(), 0.0, det.str());
}

void criterion_8() {
    Timer t;
    std::ostringstream det;
    gen::Rng r(212);
    for (int k = 0; k < 100; ++k) {
        GroupDiagram d = gen::random_group_diagram(r, 4, 24);
        GSaecular s = g_saecular(d);
        if (!s.distributivity.ok) det << "diagram " << k << " not distributive; ";
        long n = d.length();
        for (long q = 1; q <= n + 1; ++q)
            for (long a = 1; a <= n; ++a)
                if (!is_normal_in(s.kernel_part(q).part(a), g_full(d.grp(a))))
                    det << "diagram " << k << " kernel " << q << " at " << a
                        << " not normal; ";
        for (const auto& [itv, fac] : coset_barcode(d)) {
            if (!fac.natural) continue;
            if (!fac.interval_ok)
                det << "diagram " << k << " factor not interval-like; ";
            for (long sz : fac.sizes)
                if (sz != fac.sizes.front())
                    det << "diagram " << k << " nonconstant cardinality; ";
        }
    }
    report(8, "group suite: distributivity, normal kernels, constant coset factors",
           det.str().empty(), t.secs(), 120.0, det.str());
}

void criterion_9() {
    std::ostringstream det;
    FilteredComplex xf = ladder_complex(Coeff::fp(2), 2000);
    if (static_cast<long>(xf.cells.size()) != 2000) det << "cell count off; ";
    Timer tf;
    HomologyBarcode hf = homology_barcode(xf, 1);
    double f2_secs = tf.secs();
    if (hf.size() != 998) det << "F2 bar count " << hf.size() << "; ";

    FilteredComplex xz = ladder_complex(Coeff::z(), 2000);
    Timer tz;
    HomologyBarcode hz = homology_barcode(xz, 1);
    double z_secs = tz.secs();
    if (hz.size() != 998) det << "Z bar count " << hz.size() << "; ";
    for (const auto& [itv, bar] : hz)
        if (key_of(bar.shape) != ShapeKey{1, {}}) det << "non-free Z bar; ";

    bool ok = det.str().empty() && f2_secs < 10.0 && z_secs < 60.0;
    std::ostringstream what;
    what << "2000-cell H1 floor: F2 " << std::fixed;
    what.precision(2);
    what << f2_secs << " s (budget 10), Z " << z_secs << " s (budget 60)";
    report(9, what.str(), ok, f2_secs + z_secs, 0.0, det.str());
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (failures == 0) {
        std::printf("acceptance: all 9 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", failures);
    return 1;
}

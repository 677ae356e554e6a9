#include "saecula/homology.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

namespace saecula {

namespace {

struct DimIndex {
    // positions into cells, sorted by (grade, id)
    std::vector<long> order;
    std::map<long, long> coord_of_id; // cell id -> ambient coordinate
};

DimIndex dim_index(const FilteredComplex& x, long m) {
    DimIndex di;
    for (size_t i = 0; i < x.cells.size(); ++i)
        if (x.cells[i].dim == m) di.order.push_back(static_cast<long>(i));
    std::sort(di.order.begin(), di.order.end(), [&](long a, long b) {
        const Cell &ca = x.cells[a], &cb = x.cells[b];
        return std::tie(ca.grade, ca.id) < std::tie(cb.grade, cb.id);
    });
    for (size_t i = 0; i < di.order.size(); ++i)
        di.coord_of_id[x.cells[di.order[i]].id] = static_cast<long>(i);
    return di;
}

// boundary matrix from degree m to degree m-1 in the (grade, id) coordinates
IntMatrix boundary_matrix(const FilteredComplex& x, const DimIndex& from,
                          const DimIndex& to) {
    IntMatrix bd(static_cast<int>(to.order.size()), static_cast<int>(from.order.size()));
    for (size_t j = 0; j < from.order.size(); ++j)
        for (const auto& [fid, c] : x.cells[from.order[j]].boundary)
            bd.at(static_cast<int>(to.coord_of_id.at(fid)), static_cast<int>(j)) += c;
    return bd;
}

} // namespace

long FilteredComplex::top_grade() const {
    long n = 0;
    for (const auto& c : cells) n = std::max(n, c.grade);
    return n;
}

long FilteredComplex::top_dim() const {
    long d = 0;
    for (const auto& c : cells) d = std::max(d, c.dim);
    return d;
}

std::vector<ValidationIssue> validate(const FilteredComplex& x) {
    std::vector<ValidationIssue> issues;
    if (x.coeff.kind == CoeffKind::Fp) {
        Int p = x.coeff.p;
        if (x.coeff.p < 2 || mpz_probab_prime_p(p.get_mpz_t(), 30) == 0)
            issues.push_back({0, "field characteristic is not prime"});
    }
    std::map<long, const Cell*> by_id;
    for (const auto& c : x.cells) {
        if (!by_id.emplace(c.id, &c).second)
            issues.push_back({c.id, "duplicate cell id"});
        if (c.grade < 1) issues.push_back({c.id, "grade must be at least 1"});
        if (c.dim < 0) issues.push_back({c.id, "negative dimension"});
    }
    if (!issues.empty()) return issues;
    for (const auto& c : x.cells) {
        for (const auto& [fid, coeff] : c.boundary) {
            auto it = by_id.find(fid);
            if (it == by_id.end()) {
                issues.push_back({c.id, "boundary references missing cell"});
            } else {
                if (it->second->dim != c.dim - 1)
                    issues.push_back({c.id, "boundary face has wrong dimension"});
                if (it->second->grade > c.grade)
                    issues.push_back({c.id, "boundary face enters after the cell"});
            }
            (void)coeff;
        }
    }
    if (!issues.empty()) return issues;
    for (const auto& c : x.cells) {
        if (c.dim < 2 && x.coeff.kind != CoeffKind::Fp) {
            // dd lands in degree < 0 only via missing faces, already checked
        }
        std::map<long, Int> dd;
        for (const auto& [fid, c1] : c.boundary)
            for (const auto& [gid, c2] : by_id.at(fid)->boundary) dd[gid] += c1 * c2;
        for (auto& [gid, v] : dd) {
            if (x.coeff.kind == CoeffKind::Fp) v %= x.coeff.p;
            if (v != 0) {
                std::ostringstream msg;
                msg << "dd != 0: cells " << c.id << " and " << gid;
                issues.push_back({c.id, msg.str()});
                break;
            }
        }
    }
    return issues;
}

void validate_or_throw(const FilteredComplex& x) {
    auto issues = validate(x);
    if (!issues.empty()) throw ValidationError(issues.front().message);
}

namespace {

// kernel vectors of the degree-m boundary map in (grade, id) column order,
// padded to full length, with the grade at which each relation closed
struct StampedKernel {
    std::vector<std::vector<Int>> vecs;
    std::vector<long> stamps;
};

StampedKernel stamped_kernel(const FilteredComplex& x, const DimIndex& dm,
                             const DimIndex& dm1, const Coeff& coeff) {
    StampedKernel out;
    long k = static_cast<long>(dm.order.size());
    IntMatrix bd = boundary_matrix(x, dm, dm1);
    if (coeff.kind == CoeffKind::Fp) {
        KernelBuilderFp kb(bd.rows, coeff.p);
        for (int j = 0; j < bd.cols; ++j) {
            auto hit = kb.add_column(fp_column(bd, j, coeff.p));
            if (hit) {
                std::vector<Int> v(static_cast<size_t>(k), 0);
                const auto& kv = kb.kernel[static_cast<size_t>(*hit)];
                for (size_t t = 0; t < kv.size(); ++t) v[t] = kv[t];
                out.vecs.push_back(std::move(v));
                out.stamps.push_back(x.cells[dm.order[static_cast<size_t>(j)]].grade);
            }
        }
    } else {
        KernelBuilder kb(bd.rows);
        for (int j = 0; j < bd.cols; ++j) {
            auto hit = kb.add_column(bd.column(j));
            if (hit) {
                std::vector<Int> v(static_cast<size_t>(k), 0);
                const auto& kv = kb.kernel[static_cast<size_t>(*hit)];
                for (size_t t = 0; t < kv.size(); ++t) v[t] = kv[t];
                out.vecs.push_back(std::move(v));
                out.stamps.push_back(x.cells[dm.order[static_cast<size_t>(j)]].grade);
            }
        }
    }
    return out;
}

} // namespace

CycleBoundaryFiltrations cycle_boundary_filtrations(const FilteredComplex& x, long m) {
    validate_or_throw(x);
    CycleBoundaryFiltrations out;
    out.m = m;
    long n = x.top_grade();
    DimIndex dm = dim_index(x, m), dm1 = dim_index(x, m - 1), dup = dim_index(x, m + 1);
    long k = static_cast<long>(dm.order.size());
    out.ambient = AbPresentation::free_of_rank(x.coeff, k);
    for (long i : dm.order) out.cell_ids.push_back(x.cells[i].id);

    StampedKernel sk = stamped_kernel(x, dm, dm1, x.coeff);
    out.z.resize(static_cast<size_t>(n + 1));
    for (long a = 0; a <= n; ++a) {
        std::vector<std::vector<Int>> cols;
        for (size_t i = 0; i < sk.vecs.size(); ++i)
            if (sk.stamps[i] <= a) cols.push_back(sk.vecs[i]);
        out.z[static_cast<size_t>(a)] =
            sub_from_gens(out.ambient, IntMatrix::from_columns(static_cast<int>(k), cols));
    }
    IntMatrix bdu = boundary_matrix(x, dup, dm);
    out.b.resize(static_cast<size_t>(n + 2));
    for (long a = 0; a <= n; ++a) {
        std::vector<std::vector<Int>> cols;
        for (size_t j = 0; j < dup.order.size(); ++j)
            if (x.cells[dup.order[j]].grade <= a) cols.push_back(bdu.column(static_cast<int>(j)));
        out.b[static_cast<size_t>(a)] =
            sub_from_gens(out.ambient, IntMatrix::from_columns(static_cast<int>(k), cols));
    }
    out.b[static_cast<size_t>(n + 1)] = out.z[static_cast<size_t>(n)];
    return out;
}

namespace {

// Pivot-row-keyed column echelon with event capture, used by the barcode
// sweep. Rows are ordered by descending grade so that "supported on grade
// <= p" is a suffix condition on pivot rows.
struct EventEchelonZ {
    int rows = 0;
    std::vector<std::vector<Int>> col;
    std::map<int, int> slot_at_row; // pivot row -> slot
    std::map<int, std::vector<Int>> changed; // slot -> snapshot at step start
    std::vector<int> fresh;                  // slots created this step

    explicit EventEchelonZ(int r) : rows(r) {}

    void begin_step() {
        changed.clear();
        fresh.clear();
    }

    void snapshot(int slot) {
        if (!changed.count(slot) &&
            std::find(fresh.begin(), fresh.end(), slot) == fresh.end())
            changed.emplace(slot, col[static_cast<size_t>(slot)]);
    }

    static int top_row(const std::vector<Int>& c) {
        for (size_t r = 0; r < c.size(); ++r)
            if (c[r] != 0) return static_cast<int>(r);
        return -1;
    }

    void add_column(std::vector<Int> c) {
        int r;
        while ((r = top_row(c)) >= 0) {
            auto it = slot_at_row.find(r);
            if (it == slot_at_row.end()) {
                if (c[static_cast<size_t>(r)] < 0)
                    for (auto& v : c) v = -v;
                int slot = static_cast<int>(col.size());
                col.push_back(std::move(c));
                slot_at_row[r] = slot;
                fresh.push_back(slot);
                return;
            }
            int slot = it->second;
            std::vector<Int>& e = col[static_cast<size_t>(slot)];
            Int &a = e[static_cast<size_t>(r)], b = c[static_cast<size_t>(r)];
            if (b % a == 0) {
                Int f = b / a;
                for (size_t i = static_cast<size_t>(r); i < c.size(); ++i)
                    if (e[i] != 0) c[i] -= f * e[i];
            } else {
                snapshot(slot);
                Int g, s, t;
                mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(),
                           b.get_mpz_t());
                Int u = a / g, v = b / g;
                for (size_t i = static_cast<size_t>(r); i < c.size(); ++i) {
                    Int ne = s * e[i] + t * c[i];
                    Int nc = u * c[i] - v * e[i];
                    e[i] = ne;
                    c[i] = nc;
                }
            }
        }
    }

    // coordinates over slots via back-substitution; must succeed for inputs
    // that lie in the span
    std::vector<Int> solve(std::vector<Int> v) const {
        std::vector<Int> coords(col.size(), 0);
        int r;
        while ((r = top_row(v)) >= 0) {
            auto it = slot_at_row.find(r);
            if (it == slot_at_row.end())
                throw NaturalityFailure("barcode sweep: vector outside span");
            int slot = it->second;
            const auto& e = col[static_cast<size_t>(slot)];
            Int q, rem;
            mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(),
                        v[static_cast<size_t>(r)].get_mpz_t(),
                        e[static_cast<size_t>(r)].get_mpz_t());
            if (rem != 0)
                throw NaturalityFailure("barcode sweep: non-integral coordinates");
            coords[static_cast<size_t>(slot)] = q;
            for (size_t i = static_cast<size_t>(r); i < v.size(); ++i)
                if (e[i] != 0) v[i] -= q * e[i];
        }
        return coords;
    }
};

struct EventEchelonFp {
    int rows = 0;
    int64_t p = 2;
    std::vector<std::vector<int64_t>> col;
    std::map<int, int> slot_at_row;
    std::map<int, std::vector<int64_t>> changed;
    std::vector<int> fresh;

    EventEchelonFp(int r, int64_t prime) : rows(r), p(prime) {}

    void begin_step() {
        changed.clear();
        fresh.clear();
    }

    static int top_row(const std::vector<int64_t>& c) {
        for (size_t r = 0; r < c.size(); ++r)
            if (c[r] != 0) return static_cast<int>(r);
        return -1;
    }

    void add_column(std::vector<int64_t> c) {
        int r;
        while ((r = top_row(c)) >= 0) {
            auto it = slot_at_row.find(r);
            if (it == slot_at_row.end()) {
                int64_t inv = fp_inv(c[static_cast<size_t>(r)], p);
                for (auto& v : c) v = static_cast<int64_t>((__int128)v * inv % p);
                int slot = static_cast<int>(col.size());
                col.push_back(std::move(c));
                slot_at_row[r] = slot;
                fresh.push_back(slot);
                return;
            }
            const auto& e = col[static_cast<size_t>(it->second)];
            int64_t f = c[static_cast<size_t>(r)]; // e's pivot is 1
            for (size_t i = static_cast<size_t>(r); i < c.size(); ++i)
                if (e[i] != 0) {
                    int64_t nv = (c[i] - (__int128)f * e[i] % p) % p;
                    c[i] = (nv % p + p) % p;
                }
        }
    }

    std::vector<Int> solve(std::vector<int64_t> v) const {
        std::vector<Int> coords(col.size(), 0);
        int r;
        while ((r = top_row(v)) >= 0) {
            auto it = slot_at_row.find(r);
            if (it == slot_at_row.end())
                throw NaturalityFailure("barcode sweep: vector outside span");
            int slot = it->second;
            const auto& e = col[static_cast<size_t>(slot)];
            int64_t f = v[static_cast<size_t>(r)];
            coords[static_cast<size_t>(slot)] = f;
            for (size_t i = static_cast<size_t>(r); i < v.size(); ++i)
                if (e[i] != 0) {
                    int64_t nv = (v[i] - (__int128)f * e[i] % p) % p;
                    v[i] = (nv % p + p) % p;
                }
        }
        return coords;
    }
};

struct SweepLayout {
    long n = 0;
    std::vector<long> ext_cellpos;   // ambient coordinate -> cell position
    std::vector<long> cell_ids;      // ambient coordinate -> id
    std::vector<int> int_of_ext;     // external coordinate -> internal row
    std::vector<int> ext_of_int;
    std::vector<long> row_grade;     // internal row -> grade
    std::vector<int> row_start;      // grade p -> first internal row with grade <= p
};

SweepLayout sweep_layout(const FilteredComplex& x, const DimIndex& dm, long n) {
    SweepLayout L;
    L.n = n;
    long k = static_cast<long>(dm.order.size());
    L.ext_cellpos = dm.order;
    for (long i : dm.order) L.cell_ids.push_back(x.cells[i].id);
    std::vector<int> ints(static_cast<size_t>(k));
    std::iota(ints.begin(), ints.end(), 0);
    std::sort(ints.begin(), ints.end(), [&](int a, int b) {
        const Cell& ca = x.cells[dm.order[static_cast<size_t>(a)]];
        const Cell& cb = x.cells[dm.order[static_cast<size_t>(b)]];
        if (ca.grade != cb.grade) return ca.grade > cb.grade;
        return ca.id < cb.id;
    });
    L.ext_of_int = ints;
    L.int_of_ext.resize(static_cast<size_t>(k));
    for (int r = 0; r < k; ++r) L.int_of_ext[static_cast<size_t>(ints[static_cast<size_t>(r)])] = r;
    for (int r = 0; r < k; ++r)
        L.row_grade.push_back(x.cells[dm.order[static_cast<size_t>(ints[static_cast<size_t>(r)])]].grade);
    L.row_start.assign(static_cast<size_t>(n + 2), static_cast<int>(k));
    for (long p = 0; p <= n + 1; ++p) {
        int first = static_cast<int>(k);
        for (int r = 0; r < k; ++r)
            if (L.row_grade[static_cast<size_t>(r)] <= p) {
                first = r;
                break;
            }
        L.row_start[static_cast<size_t>(p)] = first;
    }
    return L;
}

std::vector<std::pair<long, Int>> to_sparse(const std::vector<Int>& internal_vec,
                                            const SweepLayout& L) {
    std::vector<std::pair<long, Int>> out;
    for (size_t r = 0; r < internal_vec.size(); ++r)
        if (internal_vec[r] != 0)
            out.push_back({L.cell_ids[static_cast<size_t>(L.ext_of_int[r])], internal_vec[r]});
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

template <typename Ech, typename ColT>
void extract_factors(const FilteredComplex& x, Ech& ech, const SweepLayout& L, long q,
                     HomologyBarcode& bars, const Coeff& coeff) {
    if (ech.changed.empty() && ech.fresh.empty()) return;
    std::map<int, int> row_of_slot;
    for (const auto& [row, slot] : ech.slot_at_row) row_of_slot[slot] = row;

    // candidate grades: pivot rows of slots changed or created this step
    std::set<long> grades;
    for (const auto& [slot, old] : ech.changed) {
        (void)old;
        grades.insert(L.row_grade[static_cast<size_t>(row_of_slot.at(slot))]);
    }
    for (int slot : ech.fresh)
        grades.insert(L.row_grade[static_cast<size_t>(row_of_slot.at(slot))]);

    for (long p : grades) {
        // a cycle killed in its birth grade spans no interval
        if (p >= q) continue;
        // F: changed/fresh slots whose pivot grade is exactly p
        std::vector<int> fset;
        for (const auto& [slot, old] : ech.changed) {
            (void)old;
            if (L.row_grade[static_cast<size_t>(row_of_slot.at(slot))] == p)
                fset.push_back(slot);
        }
        for (int slot : ech.fresh)
            if (L.row_grade[static_cast<size_t>(row_of_slot.at(slot))] == p)
                fset.push_back(slot);
        if (fset.empty()) continue;
        std::sort(fset.begin(), fset.end());
        std::map<int, int> fpos;
        for (size_t i = 0; i < fset.size(); ++i) fpos[fset[i]] = static_cast<int>(i);

        // denominator generators beyond the unit-covered coordinates:
        // snapshots of changed slots with pivot grade exactly p
        std::vector<std::vector<Int>> wcols;
        for (const auto& [slot, old] : ech.changed) {
            if (L.row_grade[static_cast<size_t>(row_of_slot.at(slot))] != p) continue;
            std::vector<Int> coords = ech.solve(old);
            std::vector<Int> w(fset.size(), 0);
            for (size_t s = 0; s < coords.size(); ++s) {
                if (coords[s] == 0) continue;
                auto it = fpos.find(static_cast<int>(s));
                // coordinates outside F are unit-covered by the denominator
                if (it != fpos.end()) w[static_cast<size_t>(it->second)] = coords[s];
            }
            wcols.push_back(std::move(w));
        }
        IntMatrix w = IntMatrix::from_columns(static_cast<int>(fset.size()), wcols);
        AbPresentation small = AbPresentation::free_of_rank(coeff, static_cast<long>(fset.size()));
        QuotientData qd = quotient_data(sub_full(small), sub_from_gens(small, w));
        if (qd.shape.trivial()) continue;

        HomologyBar bar;
        bar.support = {p, q};
        bar.shape = qd.shape;
        for (int j = 0; j < qd.gens.cols; ++j) {
            std::vector<Int> amb(static_cast<size_t>(ech.rows), 0);
            for (size_t i = 0; i < fset.size(); ++i) {
                const Int& coef = qd.gens.at(static_cast<int>(i), j);
                if (coef == 0) continue;
                const auto& colv = ech.col[static_cast<size_t>(fset[i])];
                for (size_t rr = 0; rr < colv.size(); ++rr) {
                    if constexpr (std::is_same_v<ColT, int64_t>)
                        amb[rr] += coef * Int(colv[rr]);
                    else
                        amb[rr] += coef * colv[rr];
                }
            }
            if (coeff.kind == CoeffKind::Fp)
                for (auto& v : amb) {
                    v %= coeff.p;
                    if (v < 0) v += coeff.p;
                }
            std::vector<std::pair<long, Int>> rep = to_sparse(amb, L);
            // fix the unit ambiguity: lowest cell id carries a positive sign
            if (!rep.empty() && rep.front().second < 0)
                for (auto& [id, coef] : rep) coef = -coef;
            bar.reps.push_back(std::move(rep));
        }
        bars.emplace(Interval{p, q}, std::move(bar));
    }
    (void)x;
}

} // namespace

HomologyBarcode homology_barcode(const FilteredComplex& x, long m) {
    validate_or_throw(x);
    HomologyBarcode bars;
    long n = x.top_grade();
    DimIndex dm = dim_index(x, m), dm1 = dim_index(x, m - 1), dup = dim_index(x, m + 1);
    if (dm.order.empty()) return bars;
    SweepLayout L = sweep_layout(x, dm, n);
    StampedKernel sk = stamped_kernel(x, dm, dm1, x.coeff);
    int k = static_cast<int>(dm.order.size());

    auto internal_boundary_col = [&](long j) {
        std::vector<Int> c(static_cast<size_t>(k), 0);
        for (const auto& [fid, coeff] : x.cells[dup.order[static_cast<size_t>(j)]].boundary) {
            int ext = static_cast<int>(dm.coord_of_id.at(fid));
            c[static_cast<size_t>(L.int_of_ext[static_cast<size_t>(ext)])] += coeff;
        }
        return c;
    };
    auto internal_kernel_col = [&](const std::vector<Int>& v) {
        std::vector<Int> c(static_cast<size_t>(k), 0);
        for (size_t ext = 0; ext < v.size(); ++ext)
            c[static_cast<size_t>(L.int_of_ext[ext])] = v[ext];
        return c;
    };

    if (x.coeff.kind == CoeffKind::Fp) {
        int64_t p = x.coeff.p;
        EventEchelonFp ech(k, p);
        auto to_fp = [&](const std::vector<Int>& c) {
            std::vector<int64_t> o(c.size());
            for (size_t i = 0; i < c.size(); ++i) {
                Int r = c[i] % p;
                if (r < 0) r += p;
                o[i] = r.get_si();
            }
            return o;
        };
        size_t next = 0;
        for (long q = 1; q <= n; ++q) {
            ech.begin_step();
            bool any = false;
            while (next < dup.order.size() &&
                   x.cells[dup.order[next]].grade == q) {
                ech.add_column(to_fp(internal_boundary_col(static_cast<long>(next))));
                any = true;
                ++next;
            }
            if (any) extract_factors<EventEchelonFp, int64_t>(x, ech, L, q, bars, x.coeff);
        }
        ech.begin_step();
        for (const auto& v : sk.vecs) ech.add_column(to_fp(internal_kernel_col(v)));
        extract_factors<EventEchelonFp, int64_t>(x, ech, L, n + 1, bars, x.coeff);
    } else {
        EventEchelonZ ech(k);
        size_t next = 0;
        for (long q = 1; q <= n; ++q) {
            ech.begin_step();
            bool any = false;
            while (next < dup.order.size() &&
                   x.cells[dup.order[next]].grade == q) {
                ech.add_column(internal_boundary_col(static_cast<long>(next)));
                any = true;
                ++next;
            }
            if (any) extract_factors<EventEchelonZ, Int>(x, ech, L, q, bars, x.coeff);
        }
        ech.begin_step();
        for (const auto& v : sk.vecs) ech.add_column(internal_kernel_col(v));
        extract_factors<EventEchelonZ, Int>(x, ech, L, n + 1, bars, x.coeff);
    }
    return bars;
}

ChainDiagram homology_diagram(const FilteredComplex& x, long m) {
    CycleBoundaryFiltrations f = cycle_boundary_filtrations(x, m);
    long n = x.top_grade();
    if (n == 0) throw ValidationError("empty complex");
    ChainDiagram d;
    d.coeff = x.coeff;
    auto coords_matrix = [&](const SubgroupElt& big, const IntMatrix& cols) {
        IntMatrix w(big.basis.cols, cols.cols);
        for (int j = 0; j < cols.cols; ++j) {
            auto sol = solve_in_basis(big.basis, cols.column(j), x.coeff);
            if (!sol) throw NaturalityFailure("homology diagram: containment failed");
            for (int i = 0; i < big.basis.cols; ++i) w.at(i, j) = (*sol)[i];
        }
        return w;
    };
    for (long a = 1; a <= n; ++a) {
        const SubgroupElt& za = f.z[static_cast<size_t>(a)];
        AbPresentation pres;
        pres.coeff = x.coeff;
        pres.ambient_rank = za.basis.cols;
        pres.relations =
            col_basis(coords_matrix(za, f.b[static_cast<size_t>(a)].basis), x.coeff);
        d.objects.push_back(std::move(pres));
    }
    for (long a = 1; a < n; ++a) {
        AbHom h;
        h.source = d.objects[static_cast<size_t>(a - 1)];
        h.target = d.objects[static_cast<size_t>(a)];
        h.matrix = coords_matrix(f.z[static_cast<size_t>(a + 1)],
                                 f.z[static_cast<size_t>(a)].basis);
        d.steps.push_back(std::move(h));
    }
    return d;
}

namespace {

struct LsContext {
    const FilteredComplex* x = nullptr;
    long n = 0;
    std::map<long, DimIndex> dims;
    std::map<long, AbPresentation> ambients;
    std::map<long, AbHom> bds;
    std::map<std::pair<long, long>, SubgroupElt> chains;
    std::map<std::tuple<long, long, long>, SubgroupElt> zs, ims;

    const DimIndex& dim(long m) {
        auto it = dims.find(m);
        if (it == dims.end()) it = dims.emplace(m, dim_index(*x, m)).first;
        return it->second;
    }
    const AbPresentation& ambient(long m) {
        auto it = ambients.find(m);
        if (it == ambients.end())
            it = ambients
                     .emplace(m, AbPresentation::free_of_rank(
                                     x->coeff, static_cast<long>(dim(m).order.size())))
                     .first;
        return it->second;
    }
    const AbHom& boundary_hom(long m) {
        auto it = bds.find(m);
        if (it == bds.end())
            it = bds.emplace(m, AbHom{ambient(m), ambient(m - 1),
                                      boundary_matrix(*x, dim(m), dim(m - 1))})
                     .first;
        return it->second;
    }
    // chains of degree m supported on grade <= c (clamped)
    const SubgroupElt& chain_sub(long m, long c) {
        c = std::clamp(c, 0L, n);
        auto it = chains.find({m, c});
        if (it != chains.end()) return it->second;
        const DimIndex& di = dim(m);
        const AbPresentation& amb = ambient(m);
        SubgroupElt s = sub_zero(amb);
        if (c > 0) {
            std::vector<std::vector<Int>> cols;
            for (size_t i = 0; i < di.order.size(); ++i)
                if (x->cells[di.order[i]].grade <= c) {
                    std::vector<Int> e(di.order.size(), 0);
                    e[i] = 1;
                    cols.push_back(std::move(e));
                }
            s = sub_from_gens(
                amb, IntMatrix::from_columns(static_cast<int>(di.order.size()), cols));
        }
        return chains.emplace(std::pair(m, c), std::move(s)).first->second;
    }

    // both approximants depend only on the clamped filtration cutoffs
    std::tuple<long, long, long> cycles_key(long p, long m, long r) const {
        return {m, std::clamp(p, 0L, n), std::clamp(p - r, 0L, n)};
    }
    std::tuple<long, long, long> boundaries_key(long p, long m, long r) const {
        return {m, std::clamp(p, 0L, n), std::clamp(p + r, 0L, n)};
    }
    const SubgroupElt& approx_cycles(long p, long m, long r) {
        // F_p /\ preimage of F_{p-r} one degree down
        auto key = cycles_key(p, m, r);
        auto it = zs.find(key);
        if (it == zs.end())
            it = zs.emplace(key, sub_meet(chain_sub(m, std::min(p, n)),
                                          hom_preimage(boundary_hom(m),
                                                       chain_sub(m - 1, p - r))))
                     .first;
        return it->second;
    }
    const SubgroupElt& approx_boundaries(long p, long m, long r) {
        auto key = boundaries_key(p, m, r);
        auto it = ims.find(key);
        if (it == ims.end())
            it = ims.emplace(key,
                             sub_meet(chain_sub(m, std::min(p, n)),
                                      hom_image(boundary_hom(m + 1),
                                                chain_sub(m + 1, std::min(p + r, n)))))
                     .first;
        return it->second;
    }
};

} // namespace

SpectralSubgroups ls_subgroups(const FilteredComplex& x, long p, long q, long r) {
    validate_or_throw(x);
    LsContext ctx;
    ctx.x = &x;
    ctx.n = x.top_grade();
    long m = p + q;
    SpectralSubgroups out;
    out.p = p;
    out.q = q;
    out.r = r;
    out.z = ctx.approx_cycles(p, m, r);
    out.b = ctx.approx_boundaries(p, m, r);
    out.den = sub_join(ctx.approx_cycles(p - 1, m, r - 1),
                       ctx.approx_boundaries(p, m, r - 1));
    return out;
}

SpectralTerm ls_term(const FilteredComplex& x, long p, long q, long r) {
    SpectralSubgroups s = ls_subgroups(x, p, q, r);
    SpectralTerm t;
    t.p = p;
    t.q = q;
    t.r = r;
    const AbPresentation& amb = s.z.parent;
    t.z_shape = quotient_shape(s.z, sub_zero(amb));
    t.b_shape = quotient_shape(s.b, sub_zero(amb));
    t.e_shape = quotient_shape(s.z, sub_meet(s.den, s.z));
    return t;
}

std::vector<SpectralTerm> ls_terms(const FilteredComplex& x, long m, long r) {
    std::vector<SpectralTerm> page;
    long n = x.top_grade();
    for (long p = 0; p <= n; ++p) page.push_back(ls_term(x, p, m - p, r));
    return page;
}

namespace {

JhVector bar_jh(const HomologyBar& b) { return jh_vector(b.shape); }

} // namespace

JhVector ls_predict_b(const HomologyBarcode& bm, long n, long p, long r) {
    JhVector acc;
    long cap = std::min(p + r, n);
    for (const auto& [itv, bar] : bm)
        if (itv.p <= p && itv.q <= cap) acc = jh_add(acc, bar_jh(bar));
    return acc;
}

JhVector ls_predict_z(const HomologyBarcode& bm, const HomologyBarcode& bm1, long n,
                      long p, long r) {
    JhVector acc;
    for (const auto& [itv, bar] : bm)
        if (itv.p <= p) acc = jh_add(acc, bar_jh(bar));
    for (const auto& [itv, bar] : bm1)
        if (itv.p <= p - r && itv.q <= p) acc = jh_add(acc, bar_jh(bar));
    (void)n;
    return acc;
}

JhVector ls_predict_e(const HomologyBarcode& bm, const HomologyBarcode& bm1, long n,
                      long p, long r) {
    JhVector acc;
    long blo = std::min(p + r - 1, n) + 1;
    for (const auto& [itv, bar] : bm)
        if (itv.p == p && itv.q >= blo) acc = jh_add(acc, bar_jh(bar));
    for (const auto& [itv, bar] : bm1)
        if (itv.p <= p - r && itv.q == p) acc = jh_add(acc, bar_jh(bar));
    return acc;
}

LsReport ls_enumeration_check(const FilteredComplex& x, long maxdim, long rmax) {
    validate_or_throw(x);
    long n = x.top_grade();
    if (rmax < 0) rmax = n + 2;
    LsReport rep;
    std::map<long, HomologyBarcode> bc;
    for (long m = -1; m <= maxdim; ++m)
        bc[m] = m < 0 ? HomologyBarcode{} : homology_barcode(x, m);
    for (long m = 0; m <= maxdim; ++m)
        for (const auto& [itv, bar] : bc[m])
            if (!jh_vector(bar.shape).finite)
                throw InfiniteLengthError("enumeration requires finite length; use field coefficients");

    LsContext ctx;
    ctx.x = &x;
    ctx.n = n;
    auto jh_of = [&](const SubgroupElt& num, const SubgroupElt& den) {
        JhVector v = jh_vector(quotient_shape(num, den));
        if (!v.finite)
            throw InfiniteLengthError("enumeration requires finite length; use field coefficients");
        return v;
    };
    std::map<std::tuple<long, long, long>, JhVector> zjh, bjh;
    auto whole_jh = [&](std::map<std::tuple<long, long, long>, JhVector>& cache,
                        const std::tuple<long, long, long>& key, const SubgroupElt& s) {
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, jh_of(s, sub_zero(s.parent))).first;
        return it->second;
    };
    std::ostringstream det;
    for (long m = 0; m <= maxdim; ++m) {
        for (long p = 0; p <= n; ++p) {
            for (long r = 0; r <= rmax; ++r) {
                long q = m - p;
                const SubgroupElt& z = ctx.approx_cycles(p, m, r);
                const SubgroupElt& b = ctx.approx_boundaries(p, m, r);
                SubgroupElt den = sub_join(ctx.approx_cycles(p - 1, m, r - 1),
                                           ctx.approx_boundaries(p, m, r - 1));
                struct Cmp {
                    const char* which;
                    JhVector got, want;
                } cmps[] = {
                    {"z", whole_jh(zjh, ctx.cycles_key(p, m, r), z),
                     ls_predict_z(bc[m], bc[m - 1], n, p, r)},
                    {"b", whole_jh(bjh, ctx.boundaries_key(p, m, r), b),
                     ls_predict_b(bc[m], n, p, r)},
                    {"e", jh_of(z, sub_meet(den, z)), ls_predict_e(bc[m], bc[m - 1], n, p, r)},
                };
                for (const auto& c : cmps) {
                    ++rep.checked;
                    if (!(c.got == c.want)) {
                        rep.ok = false;
                        std::ostringstream msg;
                        msg << c.which << " mismatch at p=" << p << " q=" << q
                            << " r=" << r;
                        rep.mismatches.push_back({p, q, r, c.which, msg.str()});
                    }
                }
            }
        }
    }
    return rep;
}

} // namespace saecula

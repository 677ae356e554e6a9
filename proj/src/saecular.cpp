#include "saecula/saecular.hpp"

#include <algorithm>
#include <sstream>

namespace saecula {

SaecularFiltrations saecular_filtrations(const ChainDiagram& d) {
    long n = d.length();
    SaecularFiltrations f;
    f.diagram = &d;
    f.khat.resize(static_cast<size_t>(n + 1));
    f.k.resize(static_cast<size_t>(n + 2));
    for (long p = 1; p <= n; ++p) {
        SubDiagram s;
        for (long a = 1; a <= n; ++a) {
            if (a <= p)
                s.parts.push_back(sub_full(d.obj(a)));
            else
                s.parts.push_back(sub_from_gens(d.obj(a), d.composite(p, a)));
        }
        f.khat[static_cast<size_t>(p)] = std::move(s);
    }
    for (long q = 1; q <= n + 1; ++q) {
        SubDiagram s;
        for (long a = 1; a <= n; ++a) {
            if (q == n + 1) {
                s.parts.push_back(sub_full(d.obj(a)));
            } else if (a < q) {
                s.parts.push_back(hom_preimage(d.composite_hom(a, q), sub_zero(d.obj(q))));
            } else {
                s.parts.push_back(sub_zero(d.obj(a)));
            }
        }
        f.k[static_cast<size_t>(q)] = std::move(s);
    }
    return f;
}

CdfTable cdf_table(const ChainDiagram& d, const SaecularFiltrations& f) {
    long n = d.length();
    CdfTable t;
    t.diagram = &d;
    t.n = n;
    t.a.assign(static_cast<size_t>(n + 1),
               std::vector<SubDiagram>(static_cast<size_t>(n + 2)));
    SubDiagram zero = zero_subdiagram(d);
    for (long p = 0; p <= n; ++p)
        for (long q = 0; q <= n + 1; ++q) {
            if (p == 0 || q == 0)
                t.a[p][q] = zero;
            else
                t.a[p][q] = sub_meet_diag(f.khat[static_cast<size_t>(p)],
                                          f.k[static_cast<size_t>(q)]);
        }
    return t;
}

CdfTable cdf_table(const ChainDiagram& d) {
    return cdf_table(d, saecular_filtrations(d));
}

std::vector<Interval> all_intervals(long n) {
    std::vector<Interval> out;
    for (long p = 1; p <= n; ++p)
        for (long q = p + 1; q <= n + 1; ++q) out.push_back({p, q});
    return out;
}

bool is_downset(long n, const Downset& s) {
    for (const Interval& i : s) {
        if (i.p < 1 || i.q <= i.p || i.q > n + 1) return false;
        if (i.p > 1 && !s.count({i.p - 1, i.q})) return false;
        if (i.q - 1 > i.p && !s.count({i.p, i.q - 1})) return false;
    }
    return true;
}

Downset downset_of(long n, const Interval& itv) {
    Downset s;
    for (long p = 1; p <= itv.p; ++p)
        for (long q = p + 1; q <= itv.q; ++q) s.insert({p, q});
    (void)n;
    return s;
}

Downset strict_downset_of(long n, const Interval& itv) {
    Downset s = downset_of(n, itv);
    s.erase(itv);
    return s;
}

SubDiagram omega_on_downset(const CdfTable& t, const Downset& s) {
    if (!is_downset(t.n, s)) throw ValidationError("not a downset of the interval poset");
    SubDiagram acc = zero_subdiagram(*t.diagram);
    for (const Interval& i : s) acc = sub_join_diag(acc, t.at(i.p, i.q));
    return acc;
}

IntervalFactor interval_factor(const CdfTable& t, const Interval& itv) {
    IntervalFactor f;
    f.support = itv;
    f.num = t.at(itv.p, itv.q);
    f.den = sub_join_diag(t.at(itv.p, itv.q - 1), t.at(itv.p - 1, itv.q));
    IntervalCheck chk = is_interval_functor(*t.diagram, f.num, f.den);
    if (chk.kind == IntervalCheck::Kind::Failure)
        throw NaturalityFailure("factor at [" + std::to_string(itv.p) + "," +
                                std::to_string(itv.q) + "): " + chk.detail);
    if (chk.kind == IntervalCheck::Kind::Zero) {
        f.shape.coeff = t.diagram->coeff;
        f.generators = IntMatrix(
            static_cast<int>(t.diagram->obj(itv.p).ambient_rank), 0);
        return f;
    }
    if (!(chk.itv == itv))
        throw NaturalityFailure("factor at [" + std::to_string(itv.p) + "," +
                                std::to_string(itv.q) + ") supported on [" +
                                std::to_string(chk.itv.p) + "," +
                                std::to_string(chk.itv.q) + ")");
    QuotientData qd = quotient_data(f.num.part(itv.p), f.den.part(itv.p));
    f.shape = qd.shape;
    f.generators = qd.gens;
    return f;
}

Barcode barcode_from_table(const CdfTable& t) {
    Barcode bc;
    for (const Interval& i : all_intervals(t.n)) {
        IntervalFactor f = interval_factor(t, i);
        if (!f.trivial()) bc.emplace(i, std::move(f));
    }
    return bc;
}

Barcode barcode(const ChainDiagram& d) {
    validate_or_throw(d);
    return barcode_from_table(cdf_table(d));
}

void check_naturality(const SaecularFiltrations& f, const SubDiagram& s) {
    const ChainDiagram& d = *f.diagram;
    long n = d.length();
    for (long a = 1; a <= n; ++a)
        for (long b = a + 1; b <= n; ++b) {
            AbHom F = d.composite_hom(a, b);
            SubgroupElt lhs = hom_image(F, s.part(a));
            SubgroupElt rhs = sub_meet(s.part(b), f.khat[static_cast<size_t>(a)].part(b));
            if (!(lhs == rhs)) {
                std::ostringstream msg;
                msg << "pushforward naturality fails at " << a << "<=" << b;
                throw NaturalityFailure(msg.str());
            }
            SubgroupElt lhs2 = hom_preimage(F, s.part(b));
            SubgroupElt rhs2 = sub_join(s.part(a), f.k[static_cast<size_t>(b)].part(a));
            if (!(lhs2 == rhs2)) {
                std::ostringstream msg;
                msg << "pullback naturality fails at " << a << "<=" << b;
                throw NaturalityFailure(msg.str());
            }
        }
}

std::vector<LatticeHomIssue> check_lattice_hom(const CdfTable& t,
                                               const std::vector<Downset>& family) {
    std::vector<LatticeHomIssue> issues;
    std::vector<SubDiagram> omegas;
    omegas.reserve(family.size());
    for (const auto& s : family) omegas.push_back(omega_on_downset(t, s));
    for (size_t i = 0; i < family.size(); ++i)
        for (size_t j = i; j < family.size(); ++j) {
            Downset uni = family[i], inter;
            uni.insert(family[j].begin(), family[j].end());
            std::set_intersection(family[i].begin(), family[i].end(), family[j].begin(),
                                  family[j].end(), std::inserter(inter, inter.begin()));
            if (!(omega_on_downset(t, uni) == sub_join_diag(omegas[i], omegas[j]))) {
                std::ostringstream msg;
                msg << "pair (" << i << "," << j << ")";
                issues.push_back({"join", msg.str()});
            }
            if (!(omega_on_downset(t, inter) == sub_meet_diag(omegas[i], omegas[j]))) {
                std::ostringstream msg;
                msg << "pair (" << i << "," << j << ")";
                issues.push_back({"meet", msg.str()});
            }
        }
    return issues;
}

SubsaecularSeries subsaecular_series(const ChainDiagram& d) {
    return subsaecular_series(d, all_intervals(d.length()));
}

SubsaecularSeries subsaecular_series(const ChainDiagram& d,
                                     const std::vector<Interval>& order) {
    validate_or_throw(d);
    long n = d.length();
    std::vector<Interval> all = all_intervals(n);
    {
        std::vector<Interval> sorted = order;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != all)
            throw ValidationError("order is not a permutation of the intervals");
        Downset prefix;
        for (const Interval& i : order) {
            prefix.insert(i);
            if (!is_downset(n, prefix))
                throw ValidationError("order is not a linear extension");
        }
    }
    CdfTable t = cdf_table(d);
    SubsaecularSeries out;
    out.linearization = order;
    SubDiagram sigma = zero_subdiagram(d);
    for (const Interval& i : order) {
        SubDiagram next = sub_join_diag(sigma, t.at(i.p, i.q));
        IntervalCheck chk = is_interval_functor(d, next, sigma);
        SeriesStep step;
        step.support = i;
        step.sigma = next;
        step.shape.coeff = d.coeff;
        if (chk.kind == IntervalCheck::Kind::Failure)
            throw NaturalityFailure("series step at [" + std::to_string(i.p) + "," +
                                    std::to_string(i.q) + "): " + chk.detail);
        if (chk.kind == IntervalCheck::Kind::Is) {
            if (!(chk.itv == i))
                throw NaturalityFailure("series step supported off its interval");
            step.shape = quotient_shape(next.part(i.p), sigma.part(i.p));
        }
        sigma = next;
        out.steps.push_back(step);
    }
    for (const auto& s : out.steps)
        if (!s.shape.trivial()) out.reduced.push_back(s);
    return out;
}

std::vector<DecompThread> field_decompose(const ChainDiagram& d) {
    if (!d.coeff.is_field())
        throw ValidationError("interval decomposition requires field coefficients");
    Barcode bc = barcode(d);
    std::vector<DecompThread> threads;
    for (const auto& [itv, f] : bc) {
        for (int j = 0; j < f.generators.cols; ++j) {
            DecompThread th;
            th.support = itv;
            std::vector<Int> v = f.generators.column(j);
            th.vecs.push_back(v);
            for (long a = itv.p; a < itv.q - 1 && a < d.length(); ++a) {
                v = mul(d.step(a).matrix, v);
                th.vecs.push_back(v);
            }
            threads.push_back(std::move(th));
        }
    }
    return threads;
}

JhVector rank_function(const ChainDiagram& d, const Interval& itv) {
    long b = std::min(itv.q - 1, d.length());
    SubgroupElt image = sub_from_gens(d.obj(b), d.composite(itv.p, b));
    return jh_vector(quotient_shape(image, sub_zero(d.obj(b))));
}

TypeBPd type_b_pd(const ChainDiagram& d) {
    validate_or_throw(d);
    long n = d.length();
    auto rank_at = [&](long p, long q) -> JhDelta {
        if (p < 1 || q > n + 1 || p >= q) return JhDelta{};
        return jh_delta(rank_function(d, {p, q}));
    };
    TypeBPd pd;
    for (const Interval& i : all_intervals(n)) {
        JhDelta v = rank_at(i.p, i.q);
        v = jh_delta_sub(v, rank_at(i.p - 1, i.q));
        v = jh_delta_sub(v, rank_at(i.p, i.q + 1));
        v = jh_delta_add(v, rank_at(i.p - 1, i.q + 1));
        JhVector jv = jh_from_delta(v, d.coeff);
        if (!jv.zero()) pd.entries.emplace(i, std::move(jv));
    }
    return pd;
}

} // namespace saecula

#include "saecula/fingroup.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

namespace saecula {

namespace {

uint64_t mix64(uint64_t& s) {
    s += 0x9e3779b97f4a7c15ull;
    uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

GroupPtr make_group(std::vector<std::vector<int>> table) {
    long n = static_cast<long>(table.size());
    if (n == 0) throw ValidationError("empty multiplication table");
    if (n > kMaxGroupOrder) throw OrderCapError("group order exceeds 512");
    for (long i = 0; i < n; ++i) {
        if (static_cast<long>(table[i].size()) != n)
            throw ValidationError("multiplication table is not square");
        for (long j = 0; j < n; ++j)
            if (table[i][j] < 0 || table[i][j] >= n)
                throw ValidationError("table entry out of range");
    }
    for (long j = 0; j < n; ++j)
        if (table[0][j] != j || table[j][0] != j)
            throw ValidationError("element 0 is not an identity");
    for (long i = 0; i < n; ++i) {
        std::vector<bool> seen_row(n, false), seen_col(n, false);
        for (long j = 0; j < n; ++j) {
            if (seen_row[table[i][j]]) throw ValidationError("row is not a permutation");
            seen_row[table[i][j]] = true;
            if (seen_col[table[j][i]]) throw ValidationError("column is not a permutation");
            seen_col[table[j][i]] = true;
        }
    }
    auto assoc = [&](long a, long b, long c) {
        return table[table[a][b]][c] == table[a][table[b][c]];
    };
    if (n <= 64) {
        for (long a = 0; a < n; ++a)
            for (long b = 0; b < n; ++b)
                for (long c = 0; c < n; ++c)
                    if (!assoc(a, b, c)) throw ValidationError("multiplication is not associative");
    } else {
        uint64_t s = 0x5aec01a5u;
        for (int t = 0; t < 200000; ++t) {
            long a = static_cast<long>(mix64(s) % static_cast<uint64_t>(n));
            long b = static_cast<long>(mix64(s) % static_cast<uint64_t>(n));
            long c = static_cast<long>(mix64(s) % static_cast<uint64_t>(n));
            if (!assoc(a, b, c)) throw ValidationError("multiplication is not associative");
        }
    }
    auto g = std::make_shared<FiniteGroup>();
    g->order = n;
    g->inv.assign(n, 0);
    for (long i = 0; i < n; ++i) {
        int vi = -1;
        for (long j = 0; j < n; ++j)
            if (table[i][j] == 0) {
                vi = static_cast<int>(j);
                break;
            }
        if (vi < 0 || table[vi][i] != 0) throw ValidationError("element has no two-sided inverse");
        g->inv[i] = vi;
    }
    g->table = std::move(table);
    return g;
}

GSubgroup g_trivial(GroupPtr g) {
    GSubgroup s;
    s.group = std::move(g);
    s.elems.set(0);
    return s;
}

GSubgroup g_full(GroupPtr g) {
    GSubgroup s;
    s.group = std::move(g);
    for (long i = 0; i < s.group->order; ++i) s.elems.set(static_cast<size_t>(i));
    return s;
}

GSubgroup closure(GroupPtr g, const ElemSet& gens) {
    GSubgroup s;
    s.group = std::move(g);
    s.elems = gens;
    s.elems.set(0);
    std::vector<int> members;
    std::queue<int> work;
    for (long i = 0; i < s.group->order; ++i)
        if (s.elems.test(static_cast<size_t>(i))) work.push(static_cast<int>(i));
    while (!work.empty()) {
        int x = work.front();
        work.pop();
        for (int y : members) {
            for (int z : {s.group->mul(x, y), s.group->mul(y, x)})
                if (!s.elems.test(static_cast<size_t>(z))) {
                    s.elems.set(static_cast<size_t>(z));
                    work.push(z);
                }
        }
        int xx = s.group->mul(x, x);
        if (!s.elems.test(static_cast<size_t>(xx))) {
            s.elems.set(static_cast<size_t>(xx));
            work.push(xx);
        }
        members.push_back(x);
    }
    return s;
}

bool g_leq(const GSubgroup& a, const GSubgroup& b) {
    return (a.elems & ~b.elems).none();
}

bool is_subgroup(const GSubgroup& s) {
    if (!s.contains(0)) return false;
    for (long i = 0; i < s.group->order; ++i) {
        if (!s.contains(static_cast<int>(i))) continue;
        for (long j = 0; j < s.group->order; ++j)
            if (s.contains(static_cast<int>(j)) &&
                !s.contains(s.group->mul(static_cast<int>(i), static_cast<int>(j))))
                return false;
    }
    return true;
}

GSubgroup g_meet(const GSubgroup& a, const GSubgroup& b) {
    GSubgroup s;
    s.group = a.group;
    s.elems = a.elems & b.elems;
    return s;
}

GSubgroup g_join(const GSubgroup& a, const GSubgroup& b) {
    return closure(a.group, a.elems | b.elems);
}

GSubgroup normal_closure(const GSubgroup& h, const GSubgroup& amb) {
    GSubgroup cur = closure(h.group, h.elems);
    for (;;) {
        ElemSet conj = cur.elems;
        for (long a = 0; a < h.group->order; ++a) {
            if (!amb.contains(static_cast<int>(a))) continue;
            for (long x = 0; x < h.group->order; ++x)
                if (cur.contains(static_cast<int>(x)))
                    conj.set(static_cast<size_t>(h.group->mul(
                        h.group->mul(static_cast<int>(a), static_cast<int>(x)),
                        h.group->inv[static_cast<size_t>(a)])));
        }
        if (conj == cur.elems) return cur;
        cur = closure(h.group, conj);
    }
}

bool is_normal_in(const GSubgroup& h, const GSubgroup& amb) {
    for (long a = 0; a < h.group->order; ++a) {
        if (!amb.contains(static_cast<int>(a))) continue;
        for (long x = 0; x < h.group->order; ++x)
            if (h.contains(static_cast<int>(x)) &&
                !h.contains(h.group->mul(h.group->mul(static_cast<int>(a), static_cast<int>(x)),
                                         h.group->inv[static_cast<size_t>(a)])))
                return false;
    }
    return true;
}

bool ghom_valid(const GroupHom& f) {
    if (!f.source || !f.target) return false;
    if (static_cast<long>(f.map.size()) != f.source->order) return false;
    for (int v : f.map)
        if (v < 0 || v >= f.target->order) return false;
    if (f.map[0] != 0) return false;
    for (long a = 0; a < f.source->order; ++a)
        for (long b = 0; b < f.source->order; ++b)
            if (f.map[static_cast<size_t>(f.source->mul(static_cast<int>(a), static_cast<int>(b)))] !=
                f.target->mul(f.map[static_cast<size_t>(a)], f.map[static_cast<size_t>(b)]))
                return false;
    return true;
}

GroupHom ghom_identity(GroupPtr g) {
    GroupHom f;
    f.source = g;
    f.target = g;
    f.map.resize(static_cast<size_t>(g->order));
    for (long i = 0; i < g->order; ++i) f.map[static_cast<size_t>(i)] = static_cast<int>(i);
    return f;
}

GroupHom ghom_compose(const GroupHom& g, const GroupHom& f) {
    GroupHom h;
    h.source = f.source;
    h.target = g.target;
    h.map.resize(f.map.size());
    for (size_t i = 0; i < f.map.size(); ++i)
        h.map[i] = g.map[static_cast<size_t>(f.map[i])];
    return h;
}

GSubgroup ghom_image(const GroupHom& f, const GSubgroup& s) {
    GSubgroup t;
    t.group = f.target;
    for (long i = 0; i < f.source->order; ++i)
        if (s.contains(static_cast<int>(i))) t.elems.set(static_cast<size_t>(f.map[static_cast<size_t>(i)]));
    return t;
}

GSubgroup ghom_preimage(const GroupHom& f, const GSubgroup& t) {
    GSubgroup s;
    s.group = f.source;
    for (long i = 0; i < f.source->order; ++i)
        if (t.contains(f.map[static_cast<size_t>(i)])) s.elems.set(static_cast<size_t>(i));
    return s;
}

GSubgroup ghom_kernel(const GroupHom& f) {
    return ghom_preimage(f, g_trivial(f.target));
}

GroupHom GroupDiagram::composite_hom(long a, long b) const {
    GroupHom h = ghom_identity(grp(a));
    for (long i = a; i < b; ++i) h = ghom_compose(step(i), h);
    return h;
}

std::vector<ValidationIssue> validate(const GroupDiagram& d) {
    std::vector<ValidationIssue> issues;
    if (d.groups.empty()) {
        issues.push_back({0, "diagram has no groups"});
        return issues;
    }
    if (d.steps.size() + 1 != d.groups.size()) {
        issues.push_back({0, "diagram needs exactly one map per consecutive pair"});
        return issues;
    }
    for (size_t i = 0; i < d.steps.size(); ++i) {
        const GroupHom& f = d.steps[i];
        if (f.source != d.groups[i] || f.target != d.groups[i + 1]) {
            issues.push_back({static_cast<long>(i + 1), "map endpoints disagree with diagram"});
            continue;
        }
        if (!ghom_valid(f))
            issues.push_back({static_cast<long>(i + 1), "map is not a homomorphism"});
    }
    return issues;
}

void validate_or_throw(const GroupDiagram& d) {
    auto issues = validate(d);
    if (!issues.empty()) throw ValidationError(issues.front().message);
}

bool GSubDiagram::operator==(const GSubDiagram& o) const {
    if (parts.size() != o.parts.size()) return false;
    for (size_t i = 0; i < parts.size(); ++i)
        if (!(parts[i] == o.parts[i])) return false;
    return true;
}

GSubDiagram g_zero_subdiagram(const GroupDiagram& d) {
    GSubDiagram s;
    for (const auto& g : d.groups) s.parts.push_back(g_trivial(g));
    return s;
}

GSubDiagram g_full_subdiagram(const GroupDiagram& d) {
    GSubDiagram s;
    for (const auto& g : d.groups) s.parts.push_back(g_full(g));
    return s;
}

bool g_subdiagram_leq(const GSubDiagram& a, const GSubDiagram& b) {
    for (size_t i = 0; i < a.parts.size(); ++i)
        if (!g_leq(a.parts[i], b.parts[i])) return false;
    return true;
}

GSubDiagram g_sub_join(const GSubDiagram& a, const GSubDiagram& b) {
    GSubDiagram s;
    for (size_t i = 0; i < a.parts.size(); ++i) s.parts.push_back(g_join(a.parts[i], b.parts[i]));
    return s;
}

GSubDiagram g_sub_meet(const GSubDiagram& a, const GSubDiagram& b) {
    GSubDiagram s;
    for (size_t i = 0; i < a.parts.size(); ++i) s.parts.push_back(g_meet(a.parts[i], b.parts[i]));
    return s;
}

namespace {

std::vector<GSubDiagram> saecular_khat(const GroupDiagram& d) {
    long n = d.length();
    std::vector<GSubDiagram> khat;
    for (long p = 1; p <= n; ++p) {
        GSubDiagram s;
        for (long a = 1; a <= n; ++a) {
            if (a <= p)
                s.parts.push_back(g_full(d.grp(a)));
            else
                s.parts.push_back(ghom_image(d.composite_hom(p, a), g_full(d.grp(p))));
        }
        khat.push_back(std::move(s));
    }
    return khat;
}

std::vector<GSubDiagram> saecular_k(const GroupDiagram& d) {
    long n = d.length();
    std::vector<GSubDiagram> k;
    for (long q = 1; q <= n + 1; ++q) {
        GSubDiagram s;
        for (long a = 1; a <= n; ++a) {
            if (q == n + 1)
                s.parts.push_back(g_full(d.grp(a)));
            else if (a < q)
                s.parts.push_back(ghom_kernel(d.composite_hom(a, q)));
            else
                s.parts.push_back(g_trivial(d.grp(a)));
        }
        k.push_back(std::move(s));
    }
    return k;
}

std::string subdiagram_str(const GSubDiagram& s) {
    std::ostringstream os;
    for (size_t a = 0; a < s.parts.size(); ++a) {
        if (a) os << " | ";
        bool first = true;
        for (long i = 0; i < s.parts[a].group->order; ++i)
            if (s.parts[a].contains(static_cast<int>(i))) {
                if (!first) os << ",";
                os << i;
                first = false;
            }
    }
    return os.str();
}

} // namespace

GSaecular g_saecular(const GroupDiagram& d) {
    validate_or_throw(d);
    GSaecular out;
    out.diagram = &d;
    out.khat = saecular_khat(d);
    out.k = saecular_k(d);

    std::vector<GSubDiagram> lat;
    auto index_of = [&](const GSubDiagram& s) {
        for (size_t t = 0; t < lat.size(); ++t)
            if (lat[t] == s) return static_cast<int>(t);
        return -1;
    };
    auto push_unique = [&](GSubDiagram s) {
        int t = index_of(s);
        if (t >= 0) return t;
        lat.push_back(std::move(s));
        return static_cast<int>(lat.size() - 1);
    };
    for (const auto& s : out.khat) push_unique(s);
    for (const auto& s : out.k) push_unique(s);
    push_unique(g_zero_subdiagram(d));
    // close under meet and join; each new element is later paired with
    // everything before it, so every unordered pair is visited once
    for (size_t i = 0; i < lat.size(); ++i)
        for (size_t j = 0; j < i; ++j) {
            push_unique(g_sub_meet(lat[i], lat[j]));
            push_unique(g_sub_join(lat[i], lat[j]));
        }
    out.lattice = lat;

    size_t sz = lat.size();
    std::vector<std::vector<int>> meet_tab(sz, std::vector<int>(sz, 0));
    std::vector<std::vector<int>> join_tab(sz, std::vector<int>(sz, 0));
    for (size_t i = 0; i < sz; ++i)
        for (size_t j = 0; j <= i; ++j) {
            int mi = index_of(g_sub_meet(lat[i], lat[j]));
            int ji = index_of(g_sub_join(lat[i], lat[j]));
            meet_tab[i][j] = meet_tab[j][i] = mi;
            join_tab[i][j] = join_tab[j][i] = ji;
        }

    DistributivityReport& rep = out.distributivity;
    rep.lattice_size = static_cast<long>(sz);
    for (size_t a = 0; a < sz && rep.ok; ++a)
        for (size_t b = 0; b < sz && rep.ok; ++b)
            for (size_t c = 0; c < sz; ++c) {
                ++rep.triples_checked;
                int lhs = meet_tab[a][static_cast<size_t>(join_tab[b][c])];
                int rhs = join_tab[static_cast<size_t>(meet_tab[a][b])]
                                  [static_cast<size_t>(meet_tab[a][c])];
                if (lhs != rhs) {
                    rep.ok = false;
                    std::ostringstream os;
                    os << "distributivity fails for a=" << subdiagram_str(lat[a])
                       << " b=" << subdiagram_str(lat[b]) << " c=" << subdiagram_str(lat[c]);
                    rep.detail = os.str();
                    break;
                }
            }
    return out;
}

bool g_is_natural(const GroupDiagram& d, const GSubDiagram& s) {
    long n = d.length();
    auto khat = saecular_khat(d);
    auto k = saecular_k(d);
    for (long a = 1; a <= n; ++a)
        for (long b = a; b <= n; ++b) {
            GroupHom f = d.composite_hom(a, b);
            if (!(ghom_image(f, s.part(a)) ==
                  g_meet(s.part(b), khat[static_cast<size_t>(a - 1)].part(b))))
                return false;
            if (!(ghom_preimage(f, s.part(b)) ==
                  g_join(s.part(a), k[static_cast<size_t>(b - 1)].part(a))))
                return false;
        }
    return true;
}

namespace {

// Omega of the downset below [p,q) in the interval order, memoized over the
// grid; entries with p < 1 or q <= p are the trivial subdiagram.
struct OmegaGrid {
    const GroupDiagram* d = nullptr;
    std::vector<GSubDiagram> khat, k;
    std::map<std::pair<long, long>, GSubDiagram> memo;

    GSubDiagram cdf(long p, long q) const {
        GSubDiagram s;
        for (long a = 1; a <= d->length(); ++a)
            s.parts.push_back(g_meet(khat[static_cast<size_t>(p - 1)].part(a),
                                     k[static_cast<size_t>(q - 1)].part(a)));
        return s;
    }

    const GSubDiagram& num(long p, long q) {
        auto key = std::make_pair(p, q);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        GSubDiagram v;
        if (p < 1 || q <= p)
            v = g_zero_subdiagram(*d);
        else {
            v = cdf(p, q);
            v = g_sub_join(v, num(p - 1, q));
            v = g_sub_join(v, num(p, q - 1));
        }
        return memo.emplace(key, std::move(v)).first->second;
    }

    GSubDiagram den(long p, long q) {
        return g_sub_join(num(p - 1, q), num(p, q - 1));
    }
};

std::vector<int> coset_reps_of(const GSubgroup& num, const GSubgroup& den) {
    std::vector<int> reps;
    std::set<int> seen;
    for (long x = 0; x < num.group->order; ++x) {
        if (!num.contains(static_cast<int>(x)) || seen.count(static_cast<int>(x))) continue;
        reps.push_back(static_cast<int>(x));
        for (long h = 0; h < num.group->order; ++h)
            if (den.contains(static_cast<int>(h)))
                seen.insert(num.group->mul(static_cast<int>(x), static_cast<int>(h)));
    }
    return reps;
}

int coset_index_of(int x, const std::vector<int>& reps, const GSubgroup& den) {
    for (size_t i = 0; i < reps.size(); ++i) {
        // same left coset iff reps[i]^-1 x lies in den
        int r = reps[i];
        int v = den.group->mul(den.group->inv[static_cast<size_t>(r)], x);
        if (den.contains(v)) return static_cast<int>(i);
    }
    return -1;
}

} // namespace

std::map<Interval, CosetFactor> coset_barcode(const GroupDiagram& d) {
    validate_or_throw(d);
    long n = d.length();
    OmegaGrid grid;
    grid.d = &d;
    grid.khat = saecular_khat(d);
    grid.k = saecular_k(d);

    std::map<Interval, CosetFactor> out;
    for (long p = 1; p <= n; ++p)
        for (long q = p + 1; q <= n + 1; ++q) {
            GSubDiagram num = grid.num(p, q);
            GSubDiagram den = grid.den(p, q);
            std::vector<long> live;
            for (long a = 1; a <= n; ++a)
                if (!(num.part(a) == den.part(a))) live.push_back(a);
            if (live.empty()) continue;

            CosetFactor f;
            f.support = {p, q};
            f.natural = g_is_natural(d, num) && g_is_natural(d, den);
            long lo = p, hi = std::min(q - 1, n);
            f.interval_ok = static_cast<long>(live.size()) == hi - lo + 1 &&
                            live.front() == lo && live.back() == hi;
            f.den_normal = true;
            for (long a : live)
                if (!is_normal_in(den.part(a), num.part(a))) f.den_normal = false;
            for (long a : live) {
                f.coset_reps.push_back(coset_reps_of(num.part(a), den.part(a)));
                f.sizes.push_back(static_cast<long>(f.coset_reps.back().size()));
            }
            for (size_t i = 0; i + 1 < live.size(); ++i) {
                long a = live[i];
                if (live[i + 1] != a + 1) break;
                const GroupHom& st = d.step(a);
                std::vector<int> ind;
                bool inj = true;
                std::set<int> hit;
                for (int r : f.coset_reps[i]) {
                    int j = coset_index_of(st(r), f.coset_reps[i + 1], den.part(a + 1));
                    if (j < 0 || !hit.insert(j).second) inj = false;
                    ind.push_back(j);
                }
                if (!inj || f.sizes[i] != f.sizes[i + 1]) f.interval_ok = false;
                f.induced.push_back(std::move(ind));
            }
            out.emplace(Interval{p, q}, std::move(f));
        }
    return out;
}

std::map<Interval, NormalizedFactor> normalized_barcode(const GroupDiagram& d) {
    validate_or_throw(d);
    long n = d.length();
    OmegaGrid grid;
    grid.d = &d;
    grid.khat = saecular_khat(d);
    grid.k = saecular_k(d);

    std::map<Interval, NormalizedFactor> out;
    for (long p = 1; p <= n; ++p)
        for (long q = p + 1; q <= n + 1; ++q) {
            GSubDiagram num = grid.num(p, q);
            GSubDiagram den = grid.den(p, q);
            std::vector<GSubgroup> ncl;
            for (long a = 1; a <= n; ++a)
                ncl.push_back(normal_closure(den.part(a), num.part(a)));
            std::vector<long> live;
            for (long a = 1; a <= n; ++a)
                if (!(num.part(a) == ncl[static_cast<size_t>(a - 1)])) live.push_back(a);
            if (live.empty()) continue;

            NormalizedFactor f;
            f.support = {p, q};
            f.natural = g_is_natural(d, num) && g_is_natural(d, den);
            long lo = p, hi = std::min(q - 1, n);
            f.interval_ok = static_cast<long>(live.size()) == hi - lo + 1 &&
                            live.front() == lo && live.back() == hi;
            std::vector<std::vector<int>> reps;
            for (long a : live) {
                const GSubgroup& na = num.part(a);
                const GSubgroup& ka = ncl[static_cast<size_t>(a - 1)];
                std::vector<int> r = coset_reps_of(na, ka);
                long m = static_cast<long>(r.size());
                std::vector<std::vector<int>> table(static_cast<size_t>(m),
                                                    std::vector<int>(static_cast<size_t>(m), 0));
                for (long i = 0; i < m; ++i)
                    for (long j = 0; j < m; ++j)
                        table[static_cast<size_t>(i)][static_cast<size_t>(j)] = coset_index_of(
                            na.group->mul(r[static_cast<size_t>(i)], r[static_cast<size_t>(j)]), r, ka);
                f.orders.push_back(m);
                f.quotients.push_back(make_group(std::move(table)));
                reps.push_back(std::move(r));
            }
            for (size_t i = 0; i + 1 < live.size(); ++i) {
                long a = live[i];
                if (live[i + 1] != a + 1) break;
                const GroupHom& st = d.step(a);
                std::vector<int> ind;
                bool inj = true;
                std::set<int> hit;
                for (int r : reps[i]) {
                    int j = coset_index_of(st(r), reps[i + 1], ncl[static_cast<size_t>(a)]);
                    if (j < 0 || !hit.insert(j).second) inj = false;
                    ind.push_back(j);
                }
                if (!inj || f.orders[i] != f.orders[i + 1]) f.interval_ok = false;
                f.induced.push_back(std::move(ind));
            }
            out.emplace(Interval{p, q}, std::move(f));
        }
    return out;
}

} // namespace saecula

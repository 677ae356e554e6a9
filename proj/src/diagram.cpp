#include "saecula/diagram.hpp"

#include <sstream>

namespace saecula {

IntMatrix ChainDiagram::composite(long a, long b) const {
    IntMatrix m = IntMatrix::identity(static_cast<int>(obj(a).ambient_rank));
    for (long t = a; t < b; ++t) m = mul(step(t).matrix, m);
    return m;
}

AbHom ChainDiagram::composite_hom(long a, long b) const {
    return {obj(a), obj(b), composite(a, b)};
}

std::vector<ValidationIssue> validate(const ChainDiagram& d) {
    std::vector<ValidationIssue> issues;
    if (d.objects.empty()) {
        issues.push_back({0, "diagram has no objects"});
        return issues;
    }
    if (d.steps.size() + 1 != d.objects.size()) {
        issues.push_back({0, "expected one map per consecutive pair"});
        return issues;
    }
    if (d.coeff.kind == CoeffKind::Fp) {
        Int p = d.coeff.p;
        if (d.coeff.p < 2 || mpz_probab_prime_p(p.get_mpz_t(), 30) == 0)
            issues.push_back({0, "field characteristic is not prime"});
    }
    for (size_t i = 0; i < d.objects.size(); ++i) {
        const auto& o = d.objects[i];
        if (!(o.coeff == d.coeff))
            issues.push_back({static_cast<long>(i + 1), "object coefficient mismatch"});
        if (o.relations.rows != o.ambient_rank)
            issues.push_back({static_cast<long>(i + 1), "relation rows differ from ambient rank"});
    }
    if (!issues.empty()) return issues;
    for (size_t i = 0; i < d.steps.size(); ++i) {
        const auto& f = d.steps[i];
        std::ostringstream msg;
        if (!pres_equal(f.source, d.objects[i]) || !pres_equal(f.target, d.objects[i + 1])) {
            msg << "map " << i + 1 << " endpoints disagree with objects";
            issues.push_back({static_cast<long>(i + 1), msg.str()});
        } else if (!hom_well_defined(f)) {
            msg << "map " << i + 1 << " is not well defined on relations";
            issues.push_back({static_cast<long>(i + 1), msg.str()});
        }
    }
    return issues;
}

void validate_or_throw(const ChainDiagram& d) {
    auto issues = validate(d);
    if (!issues.empty()) throw ValidationError(issues.front().message);
}

bool SubDiagram::operator==(const SubDiagram& o) const {
    if (parts.size() != o.parts.size()) return false;
    for (size_t i = 0; i < parts.size(); ++i)
        if (!(parts[i] == o.parts[i])) return false;
    return true;
}

SubDiagram zero_subdiagram(const ChainDiagram& d) {
    SubDiagram s;
    for (const auto& o : d.objects) s.parts.push_back(sub_zero(o));
    return s;
}

SubDiagram full_subdiagram(const ChainDiagram& d) {
    SubDiagram s;
    for (const auto& o : d.objects) s.parts.push_back(sub_full(o));
    return s;
}

bool subdiagram_leq(const SubDiagram& a, const SubDiagram& b) {
    for (size_t i = 0; i < a.parts.size(); ++i)
        if (!sub_leq(a.parts[i], b.parts[i])) return false;
    return true;
}

bool is_subdiagram(const ChainDiagram& d, const SubDiagram& s) {
    if (static_cast<long>(s.parts.size()) != d.length()) return false;
    for (long a = 1; a < d.length(); ++a) {
        IntMatrix mapped = mul(d.step(a).matrix, s.part(a).basis);
        if (!spans_contain(s.part(a + 1).basis, mapped, d.coeff)) return false;
    }
    return true;
}

SubDiagram sub_join_diag(const SubDiagram& a, const SubDiagram& b) {
    SubDiagram s;
    for (size_t i = 0; i < a.parts.size(); ++i)
        s.parts.push_back(sub_join(a.parts[i], b.parts[i]));
    return s;
}

SubDiagram sub_meet_diag(const SubDiagram& a, const SubDiagram& b) {
    SubDiagram s;
    for (size_t i = 0; i < a.parts.size(); ++i)
        s.parts.push_back(sub_meet(a.parts[i], b.parts[i]));
    return s;
}

IntervalCheck is_interval_functor(const ChainDiagram& d, const SubDiagram& num,
                                  const SubDiagram& den) {
    IntervalCheck out;
    long n = d.length();
    if (!subdiagram_leq(den, num)) {
        out.kind = IntervalCheck::Kind::Failure;
        out.detail = "denominator not below numerator";
        return out;
    }
    if (!is_subdiagram(d, num) || !is_subdiagram(d, den)) {
        out.kind = IntervalCheck::Kind::Failure;
        out.detail = "not a subdiagram";
        return out;
    }
    std::vector<bool> live(static_cast<size_t>(n + 1), false);
    long first = 0, last = 0;
    for (long a = 1; a <= n; ++a) {
        bool nz = !quotient_shape(num.part(a), den.part(a)).trivial();
        live[static_cast<size_t>(a)] = nz;
        if (nz) {
            if (first == 0) first = a;
            last = a;
        }
    }
    if (first == 0) return out; // zero everywhere
    for (long a = first; a <= last; ++a) {
        if (!live[static_cast<size_t>(a)]) {
            out.kind = IntervalCheck::Kind::Failure;
            out.detail = "support not contiguous at index " + std::to_string(a);
            return out;
        }
    }
    for (long a = first; a < last; ++a) {
        const AbHom& f = d.step(a);
        SubgroupElt im = hom_image(f, num.part(a));
        if (!(sub_join(im, den.part(a + 1)) == num.part(a + 1))) {
            out.kind = IntervalCheck::Kind::Failure;
            out.detail = "induced map not surjective at index " + std::to_string(a);
            return out;
        }
        SubgroupElt pre = hom_preimage(f, den.part(a + 1));
        if (!(sub_meet(pre, num.part(a)) == den.part(a))) {
            out.kind = IntervalCheck::Kind::Failure;
            out.detail = "induced map not injective at index " + std::to_string(a);
            return out;
        }
    }
    out.kind = IntervalCheck::Kind::Is;
    out.itv = {first, last + 1};
    return out;
}

} // namespace saecula

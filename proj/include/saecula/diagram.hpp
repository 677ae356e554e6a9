#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "saecula/abgrp.hpp"

namespace saecula {

// Half-open interval [p, q) of indices, 1 <= p < q <= n+1; q == n+1 plays
// the role of "never dies". Default ordering is lexicographic and is used as
// the default linearization of the interval poset.
struct Interval {
    long p = 0;
    long q = 0;

    auto operator<=>(const Interval&) const = default;
    bool contains(long a) const { return p <= a && a < q; }
    long length() const { return q - p; }
};

// Product (i.e. pointwise) order on intervals; downsets live in this order.
inline bool poset_leq(const Interval& a, const Interval& b) {
    return a.p <= b.p && a.q <= b.q;
}

// Diagram of f.g. modules over a chain 1 -> 2 -> ... -> n.
struct ChainDiagram {
    Coeff coeff;
    std::vector<AbPresentation> objects; // size n
    std::vector<AbHom> steps;            // size n-1, steps[i]: objects[i] -> objects[i+1]

    long length() const { return static_cast<long>(objects.size()); }
    const AbPresentation& obj(long a) const { return objects[a - 1]; } // 1-based
    const AbHom& step(long a) const { return steps[a - 1]; }           // a -> a+1
    IntMatrix composite(long a, long b) const; // matrix of a -> b, a <= b
    AbHom composite_hom(long a, long b) const;
};

struct ValidationIssue {
    long index = 0;
    std::string message;
};

// Empty vector means valid.
std::vector<ValidationIssue> validate(const ChainDiagram& d);
void validate_or_throw(const ChainDiagram& d);

// One subgroup per index; the containment and naturality constraints are not
// enforced by the type, only by the functions producing them.
struct SubDiagram {
    std::vector<SubgroupElt> parts; // size n

    const SubgroupElt& part(long a) const { return parts[a - 1]; }
    SubgroupElt& part(long a) { return parts[a - 1]; }

    bool operator==(const SubDiagram& o) const;
};

SubDiagram zero_subdiagram(const ChainDiagram& d);
SubDiagram full_subdiagram(const ChainDiagram& d);
bool subdiagram_leq(const SubDiagram& a, const SubDiagram& b);
// True when every step maps part(a) into part(a+1).
bool is_subdiagram(const ChainDiagram& d, const SubDiagram& s);

SubDiagram sub_join_diag(const SubDiagram& a, const SubDiagram& b);
SubDiagram sub_meet_diag(const SubDiagram& a, const SubDiagram& b);

// Verdict of the interval-functor test for a subquotient of a diagram:
// either the subquotient is zero everywhere, or it is supported on one
// interval with every interior step an isomorphism, or it fails.
struct IntervalCheck {
    enum class Kind { Zero, Is, Failure } kind = Kind::Zero;
    Interval itv;       // valid when kind == Is
    std::string detail; // valid when kind == Failure
};

IntervalCheck is_interval_functor(const ChainDiagram& d, const SubDiagram& num,
                                  const SubDiagram& den);

} // namespace saecula

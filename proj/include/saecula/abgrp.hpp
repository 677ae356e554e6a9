#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "saecula/errors.hpp"
#include "saecula/intlinalg.hpp"

namespace saecula {

// Finitely generated module presented as ambient coordinates modulo a
// relation lattice. Over a field the relations are just a subspace; over Z
// they generate the subgroup identified with zero.
struct AbPresentation {
    Coeff coeff;
    long ambient_rank = 0;
    IntMatrix relations; // canonical column basis, ambient_rank rows

    static AbPresentation free_of_rank(Coeff c, long n);
};

bool pres_equal(const AbPresentation& a, const AbPresentation& b);

// Subgroup of a presented group containing its relation lattice, stored as a
// canonical column basis of the preimage lattice in ambient coordinates.
// Canonicity makes equality a matrix comparison.
struct SubgroupElt {
    AbPresentation parent;
    IntMatrix basis;

    bool operator==(const SubgroupElt& o) const { return basis == o.basis; }
    bool operator!=(const SubgroupElt& o) const { return !(*this == o); }
};

SubgroupElt sub_zero(const AbPresentation& g);
SubgroupElt sub_full(const AbPresentation& g);
SubgroupElt sub_from_gens(const AbPresentation& g, const IntMatrix& gens);
bool sub_leq(const SubgroupElt& a, const SubgroupElt& b);
bool sub_contains_vec(const SubgroupElt& a, const std::vector<Int>& v);

SubgroupElt sub_join(const SubgroupElt& a, const SubgroupElt& b);
SubgroupElt sub_meet(const SubgroupElt& a, const SubgroupElt& b);

// Homomorphism between presented groups, as a matrix on ambient coordinates.
struct AbHom {
    AbPresentation source;
    AbPresentation target;
    IntMatrix matrix;

    static AbHom identity(const AbPresentation& g);
};

bool hom_well_defined(const AbHom& f);
AbHom hom_compose(const AbHom& g, const AbHom& f); // g after f

SubgroupElt hom_image(const AbHom& f, const SubgroupElt& s);
SubgroupElt hom_preimage(const AbHom& f, const SubgroupElt& t);

// Isomorphism type of a subquotient: free rank plus invariant factors
// d_1 | d_2 | ... (each > 1). Over a field torsion is empty and free_rank is
// the dimension.
struct QuotientShape {
    Coeff coeff;
    long free_rank = 0;
    std::vector<Int> invariant_factors;

    bool trivial() const { return free_rank == 0 && invariant_factors.empty(); }
    bool operator==(const QuotientShape& o) const {
        return free_rank == o.free_rank && invariant_factors == o.invariant_factors;
    }
};

// num/den as a subquotient; den must be contained in num.
QuotientShape quotient_shape(const SubgroupElt& num, const SubgroupElt& den);

// Shape plus lifted generators: column i of gens maps onto the i-th cyclic
// factor (torsion factors first, in invariant-factor order, then free).
struct QuotientData {
    QuotientShape shape;
    IntMatrix gens; // ambient coordinates of the parent
};

QuotientData quotient_data(const SubgroupElt& num, const SubgroupElt& den);

// Composition-factor multiplicities. Over Z the key is the prime; over F_p
// the single key p counts dimensions; over Q the free rank is used as the
// length and torsion stays empty.
struct JhVector {
    bool finite = true;
    long free_rank = 0; // only meaningful when !finite over Z, or over Q
    std::map<Int, long> torsion;

    bool operator==(const JhVector& o) const {
        return finite == o.finite && free_rank == o.free_rank && torsion == o.torsion;
    }
    bool zero() const { return free_rank == 0 && torsion.empty(); }
};

JhVector jh_vector(const QuotientShape& q);
JhVector jh_add(const JhVector& a, const JhVector& b);
// a - b; negative multiplicities throw NaturalityFailure unless allow_negative.
struct JhDelta {
    std::map<Int, long> torsion;
    long free_rank = 0;
    bool nonnegative() const;
};
JhDelta jh_delta(const JhVector& a);
JhDelta jh_delta_add(const JhDelta& a, const JhDelta& b);
JhDelta jh_delta_sub(const JhDelta& a, const JhDelta& b);
// throws NaturalityFailure if any coordinate is negative
JhVector jh_from_delta(const JhDelta& d, const Coeff& c);

std::string shape_str(const QuotientShape& q);

} // namespace saecula

#pragma once

#include <bitset>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "saecula/diagram.hpp"
#include "saecula/errors.hpp"

namespace saecula {

inline constexpr long kMaxGroupOrder = 512;

// Multiplication table over element indices 0..order-1, identity = 0.
// Axioms are verified exhaustively up to order 64, spot-checked above.
struct FiniteGroup {
    long order = 1;
    std::vector<std::vector<int>> table;
    std::vector<int> inv;

    int mul(int a, int b) const { return table[a][b]; }
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

GroupPtr make_group(std::vector<std::vector<int>> table);

using ElemSet = std::bitset<kMaxGroupOrder>;

struct GSubgroup {
    GroupPtr group;
    ElemSet elems;

    long size() const { return static_cast<long>(elems.count()); }
    bool contains(int x) const { return elems.test(static_cast<size_t>(x)); }
    bool operator==(const GSubgroup& o) const { return elems == o.elems; }
};

GSubgroup g_trivial(GroupPtr g);
GSubgroup g_full(GroupPtr g);
GSubgroup closure(GroupPtr g, const ElemSet& gens);
bool g_leq(const GSubgroup& a, const GSubgroup& b);
bool is_subgroup(const GSubgroup& s);

GSubgroup g_meet(const GSubgroup& a, const GSubgroup& b);
GSubgroup g_join(const GSubgroup& a, const GSubgroup& b);

// Smallest subgroup of `amb` containing h and closed under conjugation by
// elements of `amb`; requires h <= amb.
GSubgroup normal_closure(const GSubgroup& h, const GSubgroup& amb);
bool is_normal_in(const GSubgroup& h, const GSubgroup& amb);

struct GroupHom {
    GroupPtr source;
    GroupPtr target;
    std::vector<int> map; // image of each source element

    int operator()(int x) const { return map[x]; }
};

bool ghom_valid(const GroupHom& f);
GroupHom ghom_identity(GroupPtr g);
GroupHom ghom_compose(const GroupHom& g, const GroupHom& f);
GSubgroup ghom_image(const GroupHom& f, const GSubgroup& s);
GSubgroup ghom_preimage(const GroupHom& f, const GSubgroup& t);
GSubgroup ghom_kernel(const GroupHom& f);

struct GroupDiagram {
    std::vector<GroupPtr> groups;
    std::vector<GroupHom> steps; // steps[i]: groups[i] -> groups[i+1]

    long length() const { return static_cast<long>(groups.size()); }
    GroupPtr grp(long a) const { return groups[a - 1]; }
    const GroupHom& step(long a) const { return steps[a - 1]; }
    GroupHom composite_hom(long a, long b) const;
};

std::vector<ValidationIssue> validate(const GroupDiagram& d);
void validate_or_throw(const GroupDiagram& d);

struct GSubDiagram {
    std::vector<GSubgroup> parts;

    const GSubgroup& part(long a) const { return parts[a - 1]; }
    GSubgroup& part(long a) { return parts[a - 1]; }
    bool operator==(const GSubDiagram& o) const;
};

GSubDiagram g_zero_subdiagram(const GroupDiagram& d);
GSubDiagram g_full_subdiagram(const GroupDiagram& d);
bool g_subdiagram_leq(const GSubDiagram& a, const GSubDiagram& b);
GSubDiagram g_sub_join(const GSubDiagram& a, const GSubDiagram& b);
GSubDiagram g_sub_meet(const GSubDiagram& a, const GSubDiagram& b);

struct DistributivityReport {
    bool ok = true;
    long lattice_size = 0;
    long triples_checked = 0;
    std::string detail;
};

struct GSaecular {
    const GroupDiagram* diagram = nullptr;
    std::vector<GSubDiagram> khat;    // khat[p-1]: image member, p = 1..n
    std::vector<GSubDiagram> k;       // k[q-1]: kernel member, q = 1..n+1
    std::vector<GSubDiagram> lattice; // meet/join closure of all members
    DistributivityReport distributivity;

    const GSubDiagram& image_part(long p) const { return khat[static_cast<size_t>(p - 1)]; }
    const GSubDiagram& kernel_part(long q) const { return k[static_cast<size_t>(q - 1)]; }
};

GSaecular g_saecular(const GroupDiagram& d);

// Naturality of a subdiagram: forward images agree with the meet against the
// image filtration, preimages with the join against the kernel filtration.
bool g_is_natural(const GroupDiagram& d, const GSubDiagram& s);

// Left cosets of den inside num at each support index, pointed at den, with
// the induced maps between consecutive coset sets.
struct CosetFactor {
    Interval support;
    bool natural = true;     // naturality equations held for num and den
    bool interval_ok = true; // bijective inside, singleton outside
    bool den_normal = false; // normality of den_a in num_a (constant on support)
    std::vector<std::vector<int>> coset_reps; // one list per support index
    std::vector<std::vector<int>> induced;    // coset index maps, per in-support step
    std::vector<long> sizes;                  // coset counts per support index
};

std::map<Interval, CosetFactor> coset_barcode(const GroupDiagram& d);

// Quotients num_a / normal_closure(den_a in num_a) with induced maps.
struct NormalizedFactor {
    Interval support;
    bool natural = true;
    bool interval_ok = true;
    std::vector<long> orders;          // quotient orders per support index
    std::vector<GroupPtr> quotients;   // coset multiplication tables
    std::vector<std::vector<int>> induced; // per in-support step
};

std::map<Interval, NormalizedFactor> normalized_barcode(const GroupDiagram& d);

} // namespace saecula

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "acat/torsor.hpp"

namespace acat {

// ------------------------------------------------- combinatorial domains --

enum class ComponentKind { Disc, Sphere, Annulus };
enum class IntervalLength { Zero, Finite, Infinite, Sliding };  // [0, inf] = Sliding
enum class Direction { In, Out };

// A combinatorial mixed-curve family descriptor.  Only the data entering
// dimensions, facet enumeration and orientation torsors is tracked: component
// kinds, marked-point counts by role, intervals/rays, and the symmetric flag
// on stabilizing points.
struct TopType {
    struct Component {
        ComponentKind kind = ComponentKind::Disc;
        long long boundary_in = 0;    // incoming boundary marked points
        long long boundary_out = 0;   // outgoing boundary marked points
        long long bulk_in = 0;        // incoming bulk points (each carries a ray)
        long long bulk_out = 0;
        long long stab = 0;           // stabilizing points (sym flag below)
        long long stab_nonsym = 0;
    };
    std::vector<Component> components;
    long long boundary_nodes = 0;  // pairs, one incoming one outgoing preimage
    long long interior_nodes = 0;
    std::vector<IntervalLength> intervals;
    long long rays_in = 0;
    long long rays_out = 0;

    long long total(long long Component::*field) const;
    // Euler characteristic of the capped-off smoothing
    long long chi_capped() const;
    long long boundary_circles() const;  // after smoothing boundary nodes
    bool smoothing_valid() const;        // discs/spheres/annuli only
};

// parameters of the distinguished families
struct FamilyParams {
    std::string kind;           // bub | mu | star | CO | OC | 2CO | CY | H*...
    long long s = 0;            // boundary inputs (mu-type)
    long long s2 = 0;           // second boundary count where applicable
    long long bulk = 0;
    long long stab = 0;
};

struct FamilyDescriptor {
    FamilyParams params;
    TopType top;
    long long dim = 0;           // dimension of the open stratum
    TorsorWord orientation;      // the torsor S(F), degrees linear in n
    LinExpr s_degree;            // its total degree
};

// builds the named families; throws on unstable parameters
FamilyDescriptor build_family(const FamilyParams& p);

// stabilization: adds bulk/stab/boundary-in marked points to a family;
// S(i^*F) = S(F) is recorded by returning the same torsor
FamilyDescriptor stabilize(const FamilyDescriptor& f, long long add_bulk,
                           long long add_stab, long long add_boundary_in,
                           bool added_stab_symmetric = true);

// attach two families at matched points; the length parameter only matters
// for ray-ray attachments
struct Attachment {
    enum class Kind { RayToRay, BoundaryToBoundary, InteriorNode } kind;
    IntervalLength length = IntervalLength::Zero;
    bool same_boundary_component = false;  // boundary self-gluing
};

struct AttachResult {
    FamilyDescriptor family;
    SignLedger ledger;   // the eq-style isomorphism S(At F) ~ S(F1)S(F2)
    SignExpr sign;       // declared non-Koszul factor (boundary self-gluing)
};

AttachResult attach(const FamilyDescriptor& a, const FamilyDescriptor& b,
                    const Attachment& at);

// ------------------------------------------------------ boundary strata --

struct Facet {
    std::string description;
    int boundary_sign = +1;  // +1 at the 0-end, -1 at the infinity end
    // for mu-type families: the two-level splitting data
    long long outer_s = 0, inner_s = 0, position = 0;
    long long outer_bulk = 0, inner_bulk = 0;
    long long outer_stab = 0, inner_stab = 0;
    bool sphere_bubble = false;
};

// codimension-one strata; supported for the mu families (two-level stable
// trees) and the sliding-interval families (two ends)
std::vector<Facet> boundary_strata(const FamilyDescriptor& f);

// independent enumerator used by the acceptance tests: stable two-level
// ribbon trees with s leaves and marked-point distributions
std::vector<Facet> ribbon_tree_facets(long long s, long long bulk, long long stab);

struct BijectionReport {
    bool pass = false;
    long long facet_count = 0;
    long long term_count = 0;
    std::string detail;
};

// facets of R(mu, s, l) against the quadratic terms of the A-infinity
// relation template with bulk/stab redistribution
BijectionReport ainfty_term_bijection(long long s, long long bulk, long long stab);

// ------------------------------------------------------- appendix ledgers --

struct LedgerRow {
    std::string name;
    LedgerScript script;
};

// the sign tables of the closed-open / hh-unit / open-closed / Cardy lemmas,
// as ledger scripts; loaded from the ledgers/ corpus directory
std::vector<LedgerRow> appendix_c_rows(const std::string& ledger_dir);

struct SignTable {
    std::vector<std::pair<std::string, int>> rows;
    bool all_match = true;
};

SignTable appendix_c_ledgers(const std::string& ledger_dir, long long n);

}  // namespace acat

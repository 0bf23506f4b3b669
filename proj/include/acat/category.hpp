#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "acat/module.hpp"

namespace acat {

// Internal conventions, used consistently across this and the dependent
// layers:
//   * morphism spaces are stored on the shifted basis C(X,Y) =
//     sigma(C)^vee hom(X,Y); stored degrees are the reduced ones
//     (hom degree minus i(1)), and structure constants act on reduced
//     elements;
//   * a cochain stores the degree of its underlying multilinear maps; its
//     CC^* degree is stored + i(1);
//   * all interleaving signs are Koszul reorder signs of the symbol
//     sequences, computed by koszul_reorder_sign; coefficients are pulled
//     out to the left with the R-linearity sign.

struct CochainEntry {
    std::vector<int> objs;  // C_0 .. C_s (length s+1)
    std::vector<int> ins;   // basis ids, ins[i] in hom(C_i, C_{i+1})
    int out = 0;            // basis id in the value space for (C_0, C_s)
    RingElement coeff;

    size_t len() const { return ins.size(); }
};

struct Cochain {
    Degree deg;  // degree of the underlying maps
    long long len_trunc = 0;
    std::vector<CochainEntry> entries;

    bool is_zero() const { return entries.empty(); }
    Cochain operator+(const Cochain& o) const;
    Cochain operator-(const Cochain& o) const;
    Cochain scaled(long long c) const;
    bool operator==(const Cochain& o) const;
};

// Accumulates entries, combining duplicates and dropping zeros/overflow.
class CochainBuilder {
public:
    CochainBuilder(Degree deg, long long len_trunc) : deg_(std::move(deg)), len_(len_trunc) {}
    void add(std::vector<int> objs, std::vector<int> ins, int out, RingElement coeff);
    Cochain take();

private:
    Degree deg_;
    long long len_;
    std::map<std::tuple<std::vector<int>, std::vector<int>, int>, RingElement> acc_;
};

class AinfCategory {
public:
    RingSpecPtr ring;
    std::vector<std::string> objects;
    std::map<std::pair<int, int>, DgModule> homs;
    Cochain mu;  // deg = i(1); includes length-0 curvature entries
    long long trunc_N = 1;
    long long len_L = 0;

    const DgModule* hom(int a, int b) const;
    size_t hom_rank(int a, int b) const;
    const BasisElt& hom_basis(int a, int b, int idx) const;
    int reduced_parity(int a, int b, int idx) const;
    Degree reduced_degree(int a, int b, int idx) const;

    // curvature entries lie in F_{>=1}; entries degree-homogeneous; homs valid
    void validate() const;
    bool flat() const;  // no length-0 structure constants
};

struct AinfFunctor {
    const AinfCategory* src = nullptr;
    const AinfCategory* tgt = nullptr;
    std::vector<int> obj_map;
    Cochain comps;  // degree 0; length-0 components must have coeff in F_1
    bool is_identity = false;

    static AinfFunctor identity(const AinfCategory& c);
    void validate() const;
};

// psi{phi_1,...,phi_k} with functor decorations fs[0..k] (nullptr = identity).
// psi lives on tgt; the phi_i and the result live on src.
struct BraceArgs {
    const AinfCategory* src = nullptr;
    const AinfCategory* tgt = nullptr;
    const Cochain* psi = nullptr;
    std::vector<const Cochain*> phis;
    std::vector<const AinfFunctor*> fs;  // size phis.size() + 1; empty = all identity
    long long len_trunc = 0;
};

Cochain brace(const BraceArgs& args);

// convenience: everything over one category with identity functors
Cochain brace(const AinfCategory& c, const Cochain& psi, const std::vector<const Cochain*>& phis);

// d-part of the Hochschild differential: value-complex differential plus the
// interior differentials of the inputs (diagonal-valued cochains).
Cochain cc_d(const AinfCategory& c, const Cochain& alpha);

// del(alpha) = d(alpha) + mu{alpha} - alpha{mu}
Cochain cc_differential(const AinfCategory& c, const Cochain& alpha);

struct RelationFailure {
    std::vector<int> objs;
    std::vector<int> ins;
    int out = 0;
    RingElement residual;
};

struct AinfReport {
    bool pass = true;
    std::vector<RelationFailure> failures;
    std::string summary() const;
};

// d_{CC}(mu) + mu{mu} = 0 below the truncation orders
AinfReport check_ainfty(const AinfCategory& c);

// cup product of diagonal-valued cochains: mu{psi, phi}
Cochain cup(const AinfCategory& c, const Cochain& psi, const Cochain& phi);

// ------------------------------------------------------------ cohomology --

struct CohomologyClass {
    Degree deg;                       // hom-convention degree
    std::map<int, Rational> rep;      // representative in the reduced basis
    std::string label;
};

struct CohomologyTable {
    // per object pair: classes and the composition table
    std::map<std::pair<int, int>, std::vector<CohomologyClass>> classes;
    // ((a,b) idx i) o ((b,c) idx j) = sum_k coeff * ((a,c) idx k)
    std::map<std::tuple<int, int, int, int, int>, std::vector<std::pair<int, Rational>>> table;
};

// requires a flat category (trivial filtration / no curvature)
CohomologyTable cohomology_category(const AinfCategory& c);

// ------------------------------------------------------------- functors --

struct FunctorReport {
    bool pass = true;
    std::vector<RelationFailure> failures;
};

// d_{CC}(F) + mu_D{}_F - F{mu_C} = 0
FunctorReport verify_functor(const AinfFunctor& f);

// nu-fun structure maps on natural-transformation cochains between functors
// (all decorations identity when fs omitted): s = 0 gives 0; s = 1 gives
// mu_D{a} + a{mu_C}; s >= 2 gives mu_D{a_1,...,a_s}.
Cochain nu_fun_mu(const AinfCategory& c, const std::vector<const Cochain*>& args);

struct UnitReport {
    bool pass = true;
    bool closed = false;
    bool left_unit = false;       // H(L^1)(e) = id
    bool left_right_match = false;  // H(L^1) = -H(R^1) on e
    std::string detail;
};

// Implemented with the bimodule machinery (L^1, R^1 into hom(Delta,Delta)).
UnitReport hh_unit_check(const AinfCategory& c, const Cochain& e);

}  // namespace acat

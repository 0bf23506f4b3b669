#pragma once

#include "acat/bimodule.hpp"

namespace acat {

// A pre-bounding cochain: an object C together with b in F_1 hom(C,C) of
// shifted degree 0.
struct PreBoundingCochain {
    int object = 0;
    ModuleElt b;  // coefficients over the reduced basis of hom(C, C)

    void validate(const AinfCategory& c) const;
};

// curvature(b) = d(b) + sum_k mu^k(b,...,b), truncated
ModuleElt bc_curvature(const AinfCategory& c, const PreBoundingCochain& b);

struct McSolution {
    bool solved = false;
    PreBoundingCochain cochain;            // particular solution when solved
    long long obstruction_order = -1;      // first order with no solution
    ModuleElt obstruction;                 // representative when obstructed
    std::vector<ModuleElt> family_basis;   // kernel directions per final order
    bool integral = true;                  // solvable over Z (else only over Q)
};

// order-by-order Maurer-Cartan solver for one object
McSolution solve_mc(const AinfCategory& c, int object);

// category of chosen (pre-)bounding cochains: objects are the pairs, homs are
// the underlying homs, mu given by b-insertions
AinfCategory bc_category(const AinfCategory& c,
                         const std::vector<PreBoundingCochain>& bcs);

// the A-infinity functor F: C^{bc} -> C with F^0 = b, F^1 = id
AinfFunctor bc_functor(const AinfCategory& c_bc, const AinfCategory& c,
                       const std::vector<PreBoundingCochain>& bcs);

// pushforward of a cochain: alpha^{bc}(c_1..c_s) = sum alpha(b,..,b,c_1,b,..)
Cochain cochain_bc(const AinfCategory& c_bc, const AinfCategory& c,
                   const std::vector<PreBoundingCochain>& bcs, const Cochain& alpha);

// pushforward of a bimodule morphism rho: sigma C_Delta -> C^! along the
// bc functor (arms and the C^! value get b-insertions)
HomToShriek rho_bc(const AinfCategory& c_bc, const AinfCategory& c,
                   const std::vector<PreBoundingCochain>& bcs, const HomToShriek& rho);

}  // namespace acat

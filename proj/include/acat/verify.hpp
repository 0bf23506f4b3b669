#pragma once

#include "acat/doc.hpp"

namespace acat {

struct VerifyReport {
    std::string name;
    bool pass = true;
    std::vector<std::string> failures;

    std::string text() const;
};

// residual of d(p*q) + *(dp, q) + (-1)^{|p|} *(p, dq) over the qc basis
VerifyReport verify_leibniz_star(const Document& doc);

// CO(p * q) = CO(p) cup CO(q) + del(H_CO(p,q)) over all basis pairs
VerifyReport verify_co_algebra(const Document& doc);

// OC(CO(p) cap a) = p * OC(a) + del(H_OC(p,a)) over basis p and test chains
VerifyReport verify_oc_module(const Document& doc);

// CO(fOC(g)) = (-1)^{n(n+1)/2} mu_bar(CY_*(g)) + del(H2_CY)(g)
VerifyReport verify_cardy(const Document& doc);

}  // namespace acat

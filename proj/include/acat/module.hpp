#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "acat/ring.hpp"

namespace acat {

struct BasisElt {
    std::string label;
    Degree deg;
};

struct GradedModule {
    RingSpecPtr ring;
    std::vector<BasisElt> basis;

    size_t rank() const { return basis.size(); }
    int parity_of(size_t i) const { return basis[i].deg.parity(); }
};

// Element of a free module, coefficients on the left.
struct ModuleElt {
    std::map<int, RingElement> c;

    void add(int idx, const RingElement& r);
    ModuleElt operator+(const ModuleElt& o) const;
    ModuleElt operator-(const ModuleElt& o) const;
    bool is_zero() const;
};

using SparseCol = std::vector<std::pair<int, RingElement>>;

// Free differential graded module: d given on basis elements, extended by the
// graded Leibniz rule over d_R.
class DgModule {
public:
    DgModule() = default;
    DgModule(GradedModule base, std::vector<SparseCol> d_cols, long long trunc);

    const GradedModule& base() const { return base_; }
    const RingSpecPtr& ring() const { return base_.ring; }
    size_t rank() const { return base_.rank(); }
    const BasisElt& at(size_t i) const { return base_.basis[i]; }
    long long trunc() const { return trunc_; }
    const std::vector<SparseCol>& d_cols() const { return d_cols_; }

    ModuleElt apply_d(const ModuleElt& x) const;
    // f given by columns, f(e_i) = col[i]; map_parity is the parity of f.
    ModuleElt apply_linear(const std::vector<SparseCol>& cols, int map_parity,
                           const ModuleElt& x) const;

    // d_M^2 = 0 up to truncation, and d has degree i(1)
    void validate() const;

private:
    GradedModule base_;
    std::vector<SparseCol> d_cols_;
    long long trunc_ = 1;
};

struct ChainMap {
    const DgModule* source = nullptr;
    const DgModule* target = nullptr;
    Degree deg;
    std::vector<SparseCol> cols;
    bool closed_flag = false;
};

DgModule tensor(const DgModule& m, const DgModule& n);
DgModule shift(const Degree& g, const DgModule& m);
// Hom^*(M, N) with the differential  del(f) = d_N f + (-1)^{|f|} f d_M
DgModule hom_complex(const DgModule& m, const DgModule& n);

// index helpers for tensor/hom bases (row-major pairs)
inline size_t pair_index(size_t i, size_t j, size_t n_cols) { return i * n_cols + j; }

struct HomologyGroup {
    Degree deg;
    long long free_rank = 0;
    std::vector<long long> invariant_factors;  // > 1
};

enum class CoeffField { Integers, Rationals };

// Homology of a DgModule whose differential has constant (weight-zero,
// integer) coefficients.  The optional window restricts to degrees whose
// first free coordinate lies in [lo, hi].
std::vector<HomologyGroup> homology(const DgModule& m, CoeffField field,
                                    std::optional<std::pair<long long, long long>> window = {});

}  // namespace acat

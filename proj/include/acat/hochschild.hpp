#pragma once

#include "acat/category.hpp"

namespace acat {

// Hochschild chain generator m[c_1|...|c_s] with diagonal coefficients:
// objs = (C_0,...,C_s), m in C(C_s, C_0), tens[i] in C(C_i, C_{i+1}).
struct ChainGen {
    std::vector<int> objs;
    int m = 0;
    std::vector<int> tens;

    bool operator<(const ChainGen& o) const {
        if (objs != o.objs) return objs < o.objs;
        if (m != o.m) return m < o.m;
        return tens < o.tens;
    }
    bool operator==(const ChainGen& o) const {
        return objs == o.objs && m == o.m && tens == o.tens;
    }
};

struct Chain {
    long long len_trunc = 0;
    std::map<ChainGen, RingElement> terms;

    bool is_zero() const { return terms.empty(); }
    void add(const ChainGen& g, const RingElement& r);
    Chain operator+(const Chain& o) const;
    Chain operator-(const Chain& o) const;
    Chain scaled(long long c) const;
    bool operator==(const Chain& o) const { return (*this - o).is_zero(); }
};

// eqn (2.8)-style b: value/interior differentials, the mu wrap terms, and the
// interior mu insertions.
Chain hochschild_b(const AinfCategory& c, const Chain& ch);

// b^{1|1}(phi, ch): the one-cochain wrap insertion
Chain hochschild_b11(const AinfCategory& c, const Cochain& phi, const Chain& ch);

// cap product on classes: requires del(phi) = 0 and b(ch) = 0; returns the
// representing chain b11(phi, ch).
Chain cap(const AinfCategory& c, const Cochain& phi, const Chain& ch);

// pushforward along an A-infinity functor (diagonal coefficients): the wrap
// by F^{s+1+t} combined with F-blocks on the tail
Chain functor_pushforward(const AinfFunctor& f, const Chain& ch);

// ------------------------------------------------------------ computation --

struct HHGroup {
    long long degree = 0;    // reported (unshifted by sigma(CC)) degree
    long long rank = 0;
    std::vector<long long> torsion;
    bool valid = false;      // provably unaffected by the length truncation
};

struct HHReport {
    bool cohomology = true;
    long long length_trunc = 0;
    std::vector<HHGroup> groups;
    std::string window_note;
};

// Ranks of HH^* / HH_* of a flat category over k (Z or Q) within the length
// truncation; degrees are reported in the shifted (CC-degree) convention and
// a group is marked valid only when no dropped length can contribute to it
// or its neighbours.
HHReport hh_cohomology(const AinfCategory& c, CoeffField field, long long deg_lo,
                       long long deg_hi);
HHReport hh_homology(const AinfCategory& c, CoeffField field, long long deg_lo,
                     long long deg_hi);

}  // namespace acat

#pragma once

#include "acat/hochschild.hpp"

namespace acat {

// ---------------------------------------------------- finite bimodules --

// mu^{s|1|t} structure constant.  Right-arm objects are listed D_t..D_0, so
// the full input list (lins, m, rins) composes left to right.
struct BimodEntry {
    std::vector<int> lobjs;  // C_0..C_s
    std::vector<int> lins;
    std::vector<int> robjs;  // D_t..D_0
    std::vector<int> rins;
    int m_in = 0;   // in values(C_s, D_t)
    int m_out = 0;  // in values(C_0, D_0)
    RingElement coeff;
};

struct Bimodule {
    const AinfCategory* c0 = nullptr;
    const AinfCategory* c1 = nullptr;
    std::map<std::pair<int, int>, DgModule> values;
    std::vector<BimodEntry> mu;

    const DgModule* value(int a, int b) const;
    size_t value_rank(int a, int b) const;
    int value_parity(int a, int b, int idx) const;
    Degree value_degree(int a, int b, int idx) const;
};

struct BimodHom {
    const Bimodule* source = nullptr;
    const Bimodule* target = nullptr;
    Degree deg;
    long long len_trunc = 0;  // s + t <= len_trunc
    std::vector<BimodEntry> entries;

    bool is_zero() const { return entries.empty(); }
    BimodHom operator+(const BimodHom& o) const;
    BimodHom operator-(const BimodHom& o) const;
    BimodHom scaled(long long c) const;
    bool operator==(const BimodHom& o) const { return (*this - o).is_zero(); }
};

BimodHom bimod_identity(const Bimodule& m, long long len_trunc);

// sigma(C)^vee C_Delta: values are the reduced hom complexes and
// mu^{s|1|t} = mu^{s+1+t}
Bimodule diagonal_shifted(const AinfCategory& c);
// shift of a bimodule by sigma(g)
Bimodule bimodule_shift(const Degree& g, const Bimodule& m);
// pullback along functors on both sides
Bimodule pullback(const AinfFunctor& f0, const AinfFunctor& f1, const Bimodule& m);
BimodHom pullback_hom(const AinfFunctor& f0, const AinfFunctor& f1, const Bimodule& pm,
                      const Bimodule& pn, const BimodHom& rho);

// mu_M viewed as a degree-1 endomorphism (for the equation and braces)
BimodHom bimod_mu_as_hom(const Bimodule& m, long long len_trunc);

// residual of d(mu_M) + mu_M{mu_C0; id;} + mu_M{; mu_M;} + mu_M{; id; mu_C1}
BimodHom bimodule_equation_residual(const Bimodule& m, long long len_trunc);

// differential and composition of the dg category of bimodules
BimodHom bimod_differential(const BimodHom& rho);
BimodHom bimod_compose(const BimodHom& psi, const BimodHom& rho);

// left/right action of a diagonal-valued cochain on the shifted diagonal
// bimodule: L1(phi) = mu{phi; id;}, R1(phi) = mu{; id; phi}
BimodHom left_action_l1(const AinfCategory& c, const Cochain& phi);
BimodHom right_action_r1(const AinfCategory& c, const Cochain& phi);

// is x a boundary in hom(shifted diagonal, shifted diagonal)?
bool bimod_hom_is_boundary(const AinfCategory& c, const BimodHom& x);

// ------------------------------------------------ inverse dualizing C^! --

// generator of C^!(C_0, C_1): a functional on C(D_0,...,D_u) with values in
// C(D_0, C_1) (x) C(C_0, D_u); elements carry the sigma(2) shift in their
// declared degree.
struct ShriekGen {
    std::vector<int> dobjs;  // D_0..D_u
    std::vector<int> dins;
    int out1 = 0;  // in hom(D_0, C_1)
    int out2 = 0;  // in hom(C_0, D_u)

    bool operator<(const ShriekGen& o) const {
        return std::tie(dobjs, dins, out1, out2) <
               std::tie(o.dobjs, o.dins, o.out1, o.out2);
    }
    bool operator==(const ShriekGen& o) const {
        return dobjs == o.dobjs && dins == o.dins && out1 == o.out1 && out2 == o.out2;
    }
};

// homogeneous element of C^!(a, b)
struct ShriekElt {
    int a = 0, b = 0;
    Degree deg;              // includes the sigma(2) shift
    long long len_trunc = 0;
    std::map<ShriekGen, RingElement> terms;

    bool is_zero() const { return terms.empty(); }
    void add(const ShriekGen& g, const RingElement& r);
    ShriekElt operator+(const ShriekElt& o) const;
    ShriekElt operator-(const ShriekElt& o) const;
    ShriekElt scaled(long long c) const;
    bool operator==(const ShriekElt& o) const { return (*this - o).is_zero(); }
};

// the three structure families of C^!; lmu consumes left-arm inputs
// (c-basis ids along lobjs), rmu right-arm inputs
ShriekElt shriek_lmu(const AinfCategory& c, const std::vector<int>& lobjs,
                     const std::vector<int>& lins, const ShriekElt& phi);
ShriekElt shriek_cmu(const AinfCategory& c, const ShriekElt& phi);
ShriekElt shriek_rmu(const AinfCategory& c, const ShriekElt& phi,
                     const std::vector<int>& robjs, const std::vector<int>& rins);
// value-complex differential (hom-complex commutator form)
ShriekElt shriek_d(const AinfCategory& c, const ShriekElt& phi);

// bimodule morphism sigma(rho) C_Delta -> C^!
struct ShriekHomEntry {
    std::vector<int> lobjs;
    std::vector<int> lins;
    std::vector<int> robjs;
    std::vector<int> rins;
    int m_in = 0;
    ShriekGen out;
    RingElement coeff;
};

struct HomToShriek {
    const AinfCategory* cat = nullptr;
    Degree deg;
    long long len_trunc = 0;
    std::vector<ShriekHomEntry> entries;

    bool is_zero() const { return entries.empty(); }
    HomToShriek operator+(const HomToShriek& o) const;
    HomToShriek operator-(const HomToShriek& o) const;
    HomToShriek scaled(long long c) const;
    bool operator==(const HomToShriek& o) const { return (*this - o).is_zero(); }
};

HomToShriek shriek_hom_differential(const HomToShriek& rho);

// Hochschild chains with C^! coefficients
struct ShriekChainGen {
    std::vector<int> objs;
    ShriekGen m;  // in C^!(objs.back(), objs.front())
    std::vector<int> tens;

    bool operator<(const ShriekChainGen& o) const {
        return std::tie(objs, m, tens) < std::tie(o.objs, o.m, o.tens);
    }
};

struct ShriekChain {
    long long len_trunc = 0;
    std::map<ShriekChainGen, RingElement> terms;

    bool is_zero() const { return terms.empty(); }
    void add(const ShriekChainGen& g, const RingElement& r);
    ShriekChain operator+(const ShriekChain& o) const;
    ShriekChain operator-(const ShriekChain& o) const;
    ShriekChain scaled(long long c) const;
    bool operator==(const ShriekChain& o) const { return (*this - o).is_zero(); }
};

// b on C^!-valued chains (wrap terms use lmu/cmu/rmu)
ShriekChain shriek_b(const AinfCategory& c, const ShriekChain& ch);

// pushforward of a diagonal chain along rho: sigma(rho) C_Delta -> C^!
ShriekChain rho_pushforward(const HomToShriek& rho, const Chain& ch);

// mu-bar: fCC_*(C, C^!) -> CC^*(C)
Cochain mu_bar(const AinfCategory& c, const ShriekChain& ch);

}  // namespace acat

#pragma once

// Shared toy categories used across the test suites and the acceptance run.

#include <map>
#include <string>
#include <vector>

#include "acat/category.hpp"

namespace acat::fixtures {

inline RingSpecPtr z_ring() { return RingSpec::integers(); }

// Z[t], t of degree 0 (one NE generator)
inline RingSpecPtr t_ring() {
    static RingSpecPtr r = [] {
        MonoidSpec mon;
        mon.ambient_rank = 1;
        mon.generators = {{1}};
        mon.grading_map = {{0}};
        return std::make_shared<const RingSpec>(GradingDatum::standard_z(), mon, BulkSpec{});
    }();
    return r;
}

struct HomSpec {
    int a, b;
    std::vector<std::pair<std::string, long long>> basis;  // label, hom degree
};

struct MuSpec {
    std::vector<int> objs;
    std::vector<std::string> ins;
    std::string out;
    std::string coeff;  // ring literal
};

// Builds a category from hom-degree data; stores reduced degrees internally.
inline AinfCategory make_category(RingSpecPtr ring, std::vector<std::string> objects,
                                  const std::vector<HomSpec>& homs,
                                  const std::vector<MuSpec>& mus, long long n, long long l) {
    AinfCategory c;
    c.ring = std::move(ring);
    c.objects = std::move(objects);
    c.trunc_N = n;
    c.len_L = l;
    auto z = c.ring->datum();
    std::map<std::tuple<int, int, std::string>, int> index;
    for (const auto& h : homs) {
        GradedModule base;
        base.ring = c.ring;
        for (const auto& [label, deg] : h.basis) {
            index[{h.a, h.b, label}] = static_cast<int>(base.basis.size());
            base.basis.push_back({label, Degree::of_int(z, deg - 1)});  // reduced
        }
        c.homs.emplace(std::make_pair(h.a, h.b),
                       DgModule(std::move(base), {}, n));
    }
    CochainBuilder mu(Degree::of_int(z, 1), l);
    for (const auto& m : mus) {
        std::vector<int> ins;
        for (size_t i = 0; i < m.ins.size(); ++i)
            ins.push_back(index.at({m.objs[i], m.objs[i + 1], m.ins[i]}));
        int out = index.at({m.objs.front(), m.objs.back(), m.out});
        mu.add(m.objs, ins, out, parse_ring_element(c.ring, n, m.coeff));
    }
    c.mu = mu.take();
    return c;
}

// one object, hom = <e> in degree 0, mu^2(e,e) = e
inline AinfCategory point_category(long long n = 6, long long l = 6) {
    return make_category(z_ring(), {"pt"}, {{0, 0, {{"e", 0}, }}},
                         {{{0, 0, 0}, {"e", "e"}, "e", "1"}}, n, l);
}

// Z[x]/x^2 with |x| = 0 (use rational homology downstream for Q-ranks)
inline AinfCategory kx_category(long long n = 6, long long l = 6) {
    std::vector<MuSpec> mus = {
        {{0, 0, 0}, {"1", "1"}, "1", "1"},
        {{0, 0, 0}, {"1", "x"}, "x", "1"},
        {{0, 0, 0}, {"x", "1"}, "x", "1"},
    };
    return make_category(z_ring(), {"L"}, {{0, 0, {{"1", 0}, {"x", 0}}}}, mus, n, l);
}

// dg algebra <1, u, v> with d(u) = v encoded as mu^1, product via the
// standard shifted dictionary mu^2(a,b) = (-1)^{|a|} a b
inline AinfCategory dg_category(long long n = 6, long long l = 6) {
    std::vector<MuSpec> mus = {
        {{0, 0}, {"u"}, "v", "1"},  // mu^1(u) = v
        // unital products: 1*1=1, 1*u=u, u*1=u, 1*v=v, v*1=-v (|v| = 1)
        {{0, 0, 0}, {"1", "1"}, "1", "1"},
        {{0, 0, 0}, {"1", "u"}, "u", "1"},
        {{0, 0, 0}, {"u", "1"}, "u", "1"},
        {{0, 0, 0}, {"1", "v"}, "v", "1"},
        {{0, 0, 0}, {"v", "1"}, "v", "-1"},
        // u*u = 0, u*v = v*u = 0, v*v = 0
    };
    return make_category(z_ring(), {"A"},
                         {{0, 0, {{"1", 0}, {"u", 0}, {"v", 1}}}}, mus, n, l);
}

// curved toy over Z[t]: basis x (hom 1), y (hom 2); mu^0 = -t y, mu^1(x) = y;
// the bounding cochain is b = t x
inline AinfCategory curved_toy(long long n = 6, long long l = 6) {
    std::vector<MuSpec> mus = {
        {{0}, {}, "y", "-1*r0"},
        {{0, 0}, {"x"}, "y", "1"},
    };
    return make_category(t_ring(), {"C"}, {{0, 0, {{"x", 1}, {"y", 2}}}}, mus, n, l);
}

// obstructed toy: mu^0 = t y with no degree-1 morphisms to bound it
inline AinfCategory obstructed_toy(long long n = 6, long long l = 6) {
    std::vector<MuSpec> mus = {
        {{0}, {}, "y", "r0"},
    };
    return make_category(t_ring(), {"C"}, {{0, 0, {{"y", 2}}}}, mus, n, l);
}

// curved toy with a unit: e (hom 0), x (hom 1), y (hom 2); mu^1(x) = y,
// mu^0 = -t y, products via the shifted dictionary mu^2(a,b) = (-1)^{|a|} ab
// with e the unit and x*x = x*y = y*y = 0; b = t x is bounding.
inline AinfCategory unital_curved_toy(long long n = 6, long long l = 6) {
    std::vector<MuSpec> mus = {
        {{0}, {}, "y", "-1*r0"},
        {{0, 0}, {"x"}, "y", "1"},
        {{0, 0, 0}, {"e", "e"}, "e", "1"},
        {{0, 0, 0}, {"e", "x"}, "x", "1"},
        {{0, 0, 0}, {"x", "e"}, "x", "-1"},
        {{0, 0, 0}, {"e", "y"}, "y", "1"},
        {{0, 0, 0}, {"y", "e"}, "y", "1"},
    };
    return make_category(t_ring(), {"C"},
                         {{0, 0, {{"e", 0}, {"x", 1}, {"y", 2}}}}, mus, n, l);
}

// helper to look up a basis index by label
inline int basis_index(const AinfCategory& c, int a, int b, const std::string& label) {
    const DgModule* h = c.hom(a, b);
    for (size_t i = 0; h && i < h->rank(); ++i)
        if (h->at(i).label == label) return static_cast<int>(i);
    throw MathError("fixture: no basis element " + label);
}

// single-entry cochain helper
inline Cochain simple_cochain(const AinfCategory& c, long long deg_int,
                              std::vector<int> objs, std::vector<int> ins, int out,
                              const std::string& coeff) {
    CochainBuilder b(Degree::of_int(c.ring->datum(), deg_int), c.len_L);
    b.add(std::move(objs), std::move(ins), out, parse_ring_element(c.ring, c.trunc_N, coeff));
    return b.take();
}

namespace detail {
// two objects P, Q with identities and a single arrow f: P -> Q
inline AinfCategory arrow_category_impl(long long n, long long l) {
    std::vector<HomSpec> homs = {
        {0, 0, {{"eP", 0}}},
        {1, 1, {{"eQ", 0}}},
        {0, 1, {{"f", 0}}},
    };
    std::vector<MuSpec> mus = {
        {{0, 0, 0}, {"eP", "eP"}, "eP", "1"},
        {{1, 1, 1}, {"eQ", "eQ"}, "eQ", "1"},
        {{0, 0, 1}, {"eP", "f"}, "f", "1"},
        {{0, 1, 1}, {"f", "eQ"}, "f", "1"},
    };
    return make_category(z_ring(), {"P", "Q"}, homs, mus, n, l);
}
}  // namespace detail

inline AinfCategory arrow_category(long long n = 6, long long l = 6) {
    return detail::arrow_category_impl(n, l);
}

}  // namespace acat::fixtures

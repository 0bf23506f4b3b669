#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"

using namespace acat;
using namespace acat::fixtures;

namespace {

// ------------------------------------------------------- brute-force side --

// plain evaluation of a cochain component on explicit inputs
std::map<int, RingElement> eval_cochain(const Cochain& psi, const std::vector<int>& objs,
                                        const std::vector<int>& ins) {
    std::map<int, RingElement> out;
    for (const auto& e : psi.entries) {
        if (e.objs != objs || e.ins != ins) continue;
        auto it = out.find(e.out);
        if (it == out.end())
            out.emplace(e.out, e.coeff);
        else
            it->second = it->second + e.coeff;
    }
    for (auto it = out.begin(); it != out.end();)
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

// Independent interleaving enumerator for psi{phi_1..phi_k} on one-object
// categories with identity decorations, k <= 2, following the classical
// formula: each phi_i picks up the Koszul sign of moving past the inputs
// before its insertion point, and inner coefficients are pulled out left.
std::map<int, RingElement> brute_brace(const AinfCategory& c, const Cochain& psi,
                                       const std::vector<const Cochain*>& phis,
                                       const std::vector<int>& ins) {
    if (c.objects.size() != 1) throw MathError("brute_brace: one object only");
    size_t s = ins.size();
    std::map<int, RingElement> acc;
    auto in_par = [&](int idx) { return c.reduced_parity(0, 0, idx); };
    auto add = [&](int out, const RingElement& r) {
        if (r.is_zero()) return;
        auto it = acc.find(out);
        if (it == acc.end())
            acc.emplace(out, r);
        else
            it->second = it->second + r;
    };
    auto psi_eval = [&](const std::vector<int>& args) {
        std::vector<int> objs(args.size() + 1, 0);
        return eval_cochain(psi, objs, args);
    };
    auto phi_eval = [&](const Cochain& phi, const std::vector<int>& args) {
        std::vector<int> objs(args.size() + 1, 0);
        return eval_cochain(phi, objs, args);
    };
    int psi_par = psi.deg.parity();
    size_t k = phis.size();
    if (k == 1) {
        for (size_t p = 0; p <= s; ++p)
            for (size_t t = 0; p + t <= s; ++t) {
                std::vector<int> inner(ins.begin() + p, ins.begin() + p + t);
                int pre = 0;
                for (size_t j = 0; j < p; ++j) pre += in_par(ins[j]);
                int move_sign = (phis[0]->deg.parity() * pre) % 2 ? -1 : 1;
                for (const auto& [b, rb] : phi_eval(*phis[0], inner)) {
                    std::vector<int> outer(ins.begin(), ins.begin() + p);
                    outer.push_back(b);
                    outer.insert(outer.end(), ins.begin() + p + t, ins.end());
                    auto rbd = rb.homogeneous_degree();
                    int extract =
                        (rbd && rbd->parity() && ((psi_par + pre) % 2)) ? -1 : 1;
                    for (const auto& [o, ro] : psi_eval(outer))
                        add(o, (rb * ro).scaled(move_sign * extract));
                }
            }
        return acc;
    }
    if (k == 2) {
        for (size_t p1 = 0; p1 <= s; ++p1)
            for (size_t t1 = 0; p1 + t1 <= s; ++t1)
                for (size_t p2 = p1 + t1; p2 <= s; ++p2)
                    for (size_t t2 = 0; p2 + t2 <= s; ++t2) {
                        std::vector<int> in1(ins.begin() + p1, ins.begin() + p1 + t1);
                        std::vector<int> in2(ins.begin() + p2, ins.begin() + p2 + t2);
                        int pre1 = 0, pre2 = 0;
                        for (size_t j = 0; j < p1; ++j) pre1 += in_par(ins[j]);
                        for (size_t j = 0; j < p2; ++j) pre2 += in_par(ins[j]);
                        int move = ((phis[0]->deg.parity() * pre1 +
                                     phis[1]->deg.parity() * pre2) %
                                    2)
                                       ? -1
                                       : 1;
                        for (const auto& [b1, r1] : phi_eval(*phis[0], in1))
                            for (const auto& [b2, r2] : phi_eval(*phis[1], in2)) {
                                std::vector<int> outer(ins.begin(), ins.begin() + p1);
                                outer.push_back(b1);
                                outer.insert(outer.end(), ins.begin() + p1 + t1,
                                             ins.begin() + p2);
                                outer.push_back(b2);
                                outer.insert(outer.end(), ins.begin() + p2 + t2,
                                             ins.end());
                                int run1 = psi_par + pre1;
                                int run2 = psi_par + pre1 + c.reduced_parity(0, 0, b1);
                                for (size_t j = p1 + t1; j < p2; ++j)
                                    run2 += in_par(ins[j]);
                                auto d1 = r1.homogeneous_degree();
                                auto d2 = r2.homogeneous_degree();
                                int ex = 1;
                                if (d1 && d1->parity() && (run1 % 2)) ex = -ex;
                                if (d2 && d2->parity() && (run2 % 2)) ex = -ex;
                                for (const auto& [o, ro] : psi_eval(outer))
                                    add(o, ((r1 * r2) * ro).scaled(move * ex));
                            }
                    }
        return acc;
    }
    throw MathError("brute_brace: k out of range");
}

std::map<int, RingElement> engine_component(const Cochain& res, const std::vector<int>& ins) {
    std::vector<int> objs(ins.size() + 1, 0);
    return eval_cochain(res, objs, ins);
}

bool maps_equal(std::map<int, RingElement> a, std::map<int, RingElement> b) {
    for (auto it = a.begin(); it != a.end();)
        it = it->second.is_zero() ? a.erase(it) : std::next(it);
    for (auto it = b.begin(); it != b.end();)
        it = it->second.is_zero() ? b.erase(it) : std::next(it);
    if (a.size() != b.size()) return false;
    for (const auto& [i, r] : a) {
        auto it = b.find(i);
        if (it == b.end() || !(it->second == r)) return false;
    }
    return true;
}

// homogeneous random cochain of internal degree d on a one-object category
Cochain random_cochain(const AinfCategory& c, long long d, std::mt19937& rng,
                       long long max_len = 4) {
    CochainBuilder b(Degree::of_int(c.ring->datum(), d), c.len_L);
    Degree target = Degree::of_int(c.ring->datum(), d);
    size_t rank = c.hom_rank(0, 0);
    for (long long s = 0; s <= max_len && rank > 0; ++s) {
        std::vector<int> idx(s, 0);
        while (true) {
            Degree total = target;
            for (int i : idx) total = total + c.reduced_degree(0, 0, i);
            for (size_t o = 0; o < rank; ++o) {
                if (!(c.reduced_degree(0, 0, static_cast<int>(o)) == total)) continue;
                long long coeff = static_cast<long long>(rng() % 5) - 2;
                if (coeff == 0) continue;
                b.add(std::vector<int>(s + 1, 0),
                      std::vector<int>(idx.begin(), idx.end()), static_cast<int>(o),
                      RingElement::constant(c.ring, c.trunc_N, coeff));
            }
            bool advanced = false;
            for (size_t i = 0; i < idx.size(); ++i) {
                if (idx[i] + 1 < static_cast<int>(rank)) {
                    ++idx[i];
                    for (size_t j = 0; j < i; ++j) idx[j] = 0;
                    advanced = true;
                    break;
                }
            }
            if (!advanced) break;
        }
    }
    return b.take();
}

}  // namespace

TEST_CASE("check_ainfty passes on the fixture corpus") {
    for (auto make : {point_category, kx_category, dg_category, curved_toy, obstructed_toy}) {
        AinfCategory c = make(6, 6);
        c.validate();
        CHECK(check_ainfty(c).pass);
    }
}

TEST_CASE("check_ainfty locates a corrupted sign at length 3") {
    AinfCategory c = kx_category();
    for (auto& e : c.mu.entries)
        if (e.ins.size() == 2 && e.ins[0] == 0 && e.ins[1] == 1) e.coeff = e.coeff.scaled(-1);
    auto rep = check_ainfty(c);
    CHECK_FALSE(rep.pass);
    bool found_len3 = false;
    for (const auto& f : rep.failures) found_len3 |= f.ins.size() == 3;
    CHECK(found_len3);
}

TEST_CASE("psi{} with the identity functor is psi") {
    AinfCategory c = kx_category();
    std::mt19937 rng(7);
    for (long long d : {0, 1, 2}) {
        Cochain psi = random_cochain(c, d, rng);
        CHECK(brace(c, psi, {}) == psi);
    }
}

TEST_CASE("single insertion into mu^2 is the two-term Gerstenhaber sum") {
    AinfCategory c = kx_category();
    Cochain phi = simple_cochain(c, 0, {0, 0}, {basis_index(c, 0, 0, "1")},
                                 basis_index(c, 0, 0, "x"), "1");
    Cochain res = brace(c, c.mu, {&phi});
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            auto got = engine_component(res, {i, j});
            auto want = brute_brace(c, c.mu, {&phi}, {i, j});
            CHECK(maps_equal(got, want));
        }
}

TEST_CASE("brace agrees with the brute-force enumerator (s <= 5, k <= 2)") {
    std::mt19937 rng(42);
    for (auto make : {kx_category, dg_category}) {
        AinfCategory c = make(6, 6);
        for (int trial = 0; trial < 10; ++trial) {
            Cochain psi = random_cochain(c, 1 + static_cast<long long>(rng() % 2), rng);
            Cochain phi1 = random_cochain(c, static_cast<long long>(rng() % 3) - 1, rng, 3);
            Cochain phi2 = random_cochain(c, static_cast<long long>(rng() % 3) - 1, rng, 3);
            Cochain r1 = brace(c, psi, {&phi1});
            Cochain r2 = brace(c, psi, {&phi1, &phi2});
            size_t rank = c.hom_rank(0, 0);
            for (size_t s = 0; s <= 5; ++s)
                for (int rep = 0; rep < 4; ++rep) {
                    std::vector<int> ins;
                    for (size_t t = 0; t < s; ++t)
                        ins.push_back(static_cast<int>(rng() % rank));
                    CHECK(maps_equal(engine_component(r1, ins),
                                     brute_brace(c, psi, {&phi1}, ins)));
                    CHECK(maps_equal(engine_component(r2, ins),
                                     brute_brace(c, psi, {&phi1, &phi2}, ins)));
                }
        }
    }
}

TEST_CASE("brace length bookkeeping: output length equals consumed inputs") {
    AinfCategory c = dg_category();
    std::mt19937 rng(5);
    Cochain psi = random_cochain(c, 1, rng);
    Cochain phi = random_cochain(c, 0, rng, 2);
    Cochain res = brace(c, psi, {&phi});
    for (const auto& e : res.entries) CHECK(e.objs.size() == e.ins.size() + 1);
}

TEST_CASE("del^2 = 0 on random cochains") {
    std::mt19937 rng(11);
    for (auto make : {kx_category, dg_category, curved_toy}) {
        AinfCategory c = make(6, 6);
        for (int trial = 0; trial < 6; ++trial) {
            Cochain a = random_cochain(c, static_cast<long long>(rng() % 3), rng);
            CHECK(cc_differential(c, cc_differential(c, a)).is_zero());
        }
    }
}

TEST_CASE("del of mu vanishes when the relations hold") {
    for (auto make : {point_category, kx_category, dg_category, curved_toy}) {
        AinfCategory c = make(6, 6);
        CHECK(cc_differential(c, c.mu).is_zero());
    }
}

TEST_CASE("cup: e cup e = e on the point category") {
    AinfCategory c = point_category();
    Cochain e = simple_cochain(c, -1, {0}, {}, 0, "1");
    Cochain ee = cup(c, e, e);
    REQUIRE(ee.entries.size() == 1);
    CHECK(ee.entries[0].ins.empty());
    CHECK(ee.entries[0].out == 0);
    CHECK(ee.entries[0].coeff == RingElement::one(c.ring, c.trunc_N));
}

TEST_CASE("cup is a chain map with the ledger sign") {
    // the nu-fun relation at two inputs:
    //   del(psi cup phi) + del(psi) cup phi + (-1)^{par psi} psi cup del(phi) = 0
    // (par in the internal grading); this is the chain-map property of cup.
    std::mt19937 rng(23);
    for (auto make : {kx_category, dg_category}) {
        AinfCategory c = make(6, 6);
        for (int trial = 0; trial < 8; ++trial) {
            long long dp = static_cast<long long>(rng() % 3) - 1;
            Cochain psi = random_cochain(c, dp, rng, 3);
            Cochain phi = random_cochain(c, static_cast<long long>(rng() % 3) - 1, rng, 3);
            Cochain total = cc_differential(c, cup(c, psi, phi)) +
                            cup(c, cc_differential(c, psi), phi) +
                            cup(c, psi, cc_differential(c, phi))
                                .scaled(((dp % 2) + 2) % 2 ? -1 : 1);
            CHECK(total.is_zero());
        }
    }
}

TEST_CASE("cohomology category of an associative algebra is itself") {
    AinfCategory c = kx_category();
    auto table = cohomology_category(c);
    const auto& cls = table.classes.at({0, 0});
    REQUIRE(cls.size() == 2);
    int one_idx = -1, x_idx = -1;
    for (size_t i = 0; i < cls.size(); ++i) {
        if (cls[i].rep.count(basis_index(c, 0, 0, "1"))) one_idx = static_cast<int>(i);
        if (cls[i].rep.count(basis_index(c, 0, 0, "x"))) x_idx = static_cast<int>(i);
    }
    REQUIRE(one_idx >= 0);
    REQUIRE(x_idx >= 0);
    auto prod = table.table.at({0, 0, 0, one_idx, x_idx});
    REQUIRE(prod.size() == 1);
    CHECK(prod[0].first == x_idx);
    CHECK(prod[0].second == Rational(1));
    CHECK(table.table.at({0, 0, 0, x_idx, x_idx}).empty());
}

TEST_CASE("cohomology category of the dg fixture is the unital point algebra") {
    AinfCategory c = dg_category();
    auto table = cohomology_category(c);
    const auto& cls = table.classes.at({0, 0});
    REQUIRE(cls.size() == 1);
    CHECK(cls[0].deg == Degree::of_int(c.ring->datum(), 0));
    auto prod = table.table.at({0, 0, 0, 0, 0});
    REQUIRE(prod.size() == 1);
    CHECK(prod[0].second == Rational(1));
}

TEST_CASE("cohomology table is associative on the fixtures") {
    for (auto make : {kx_category, dg_category}) {
        AinfCategory c = make(6, 6);
        auto table = cohomology_category(c);
        const auto& cls = table.classes.at({0, 0});
        auto compose = [&](int i, int j) { return table.table.at({0, 0, 0, i, j}); };
        for (size_t i = 0; i < cls.size(); ++i)
            for (size_t j = 0; j < cls.size(); ++j)
                for (size_t k = 0; k < cls.size(); ++k) {
                    std::map<int, Rational> lhs, rhs;
                    for (const auto& [m, cm] : compose(static_cast<int>(i), static_cast<int>(j)))
                        for (const auto& [t, ct] : compose(m, static_cast<int>(k))) {
                            auto& slot = lhs[t];
                            slot = slot + cm * ct;
                        }
                    for (const auto& [m, cm] : compose(static_cast<int>(j), static_cast<int>(k)))
                        for (const auto& [t, ct] : compose(static_cast<int>(i), m)) {
                            auto& slot = rhs[t];
                            slot = slot + cm * ct;
                        }
                    for (const auto& [t, v] : lhs) {
                        auto it = rhs.find(t);
                        Rational rv = it == rhs.end() ? Rational(0) : it->second;
                        CHECK(v == rv);
                    }
                    for (const auto& [t, v] : rhs) {
                        auto it = lhs.find(t);
                        Rational lv = it == lhs.end() ? Rational(0) : it->second;
                        CHECK(v == lv);
                    }
                }
    }
}

TEST_CASE("cohomology category refuses curvature") {
    AinfCategory c = curved_toy();
    CHECK_THROWS(cohomology_category(c));
}

TEST_CASE("identity functor verifies") {
    AinfCategory c = kx_category();
    AinfFunctor id = AinfFunctor::identity(c);
    CHECK(verify_functor(id).pass);
}

TEST_CASE("nu-fun mu^1 squares to zero") {
    std::mt19937 rng(31);
    for (auto make : {kx_category, dg_category}) {
        AinfCategory c = make(6, 6);
        for (int trial = 0; trial < 6; ++trial) {
            Cochain a = random_cochain(c, static_cast<long long>(rng() % 3) - 1, rng, 3);
            Cochain m1 = nu_fun_mu(c, {&a});
            CHECK(nu_fun_mu(c, {&m1}).is_zero());
        }
    }
}

TEST_CASE("a two-object category passes the relation and unit checks") {
    AinfCategory c = arrow_category(6, 6);
    c.validate();
    CHECK(check_ainfty(c).pass);
    // the two identity components assemble the HH-unit
    CochainBuilder b(Degree::of_int(c.ring->datum(), -1), c.len_L);
    b.add({0}, {}, basis_index(c, 0, 0, "eP"), RingElement::one(c.ring, c.trunc_N));
    b.add({1}, {}, basis_index(c, 1, 1, "eQ"), RingElement::one(c.ring, c.trunc_N));
    Cochain u = b.take();
    REQUIRE(cc_differential(c, u).is_zero());
    UnitReport rep = hh_unit_check(c, u);
    CHECK(rep.pass);
    // a single identity component is not a unit
    CochainBuilder half(Degree::of_int(c.ring->datum(), -1), c.len_L);
    half.add({0}, {}, basis_index(c, 0, 0, "eP"), RingElement::one(c.ring, c.trunc_N));
    Cochain up = half.take();
    if (cc_differential(c, up).is_zero()) CHECK_FALSE(hh_unit_check(c, up).pass);
}

TEST_CASE("cohomology tables across objects compose correctly") {
    AinfCategory c = arrow_category();
    auto table = cohomology_category(c);
    REQUIRE(table.classes.count({0, 1}) == 1);
    REQUIRE(table.classes.at({0, 1}).size() == 1);
    // eP . f = f and f . eQ = f in the table
    auto prod_pf = table.table.at({0, 0, 1, 0, 0});
    REQUIRE(prod_pf.size() == 1);
    CHECK(prod_pf[0].second == Rational(1));
    auto prod_fq = table.table.at({0, 1, 1, 0, 0});
    REQUIRE(prod_fq.size() == 1);
    CHECK(prod_fq[0].second == Rational(1));
}

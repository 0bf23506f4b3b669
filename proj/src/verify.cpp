#include "acat/verify.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace acat {

std::string VerifyReport::text() const {
    std::ostringstream os;
    os << name << ": " << (pass ? "pass" : "FAIL");
    for (const auto& f : failures) os << "\n  " << f;
    return os.str();
}

namespace {

const Document::Bundle& need_bundle(const Document& doc) {
    if (!doc.bundle) throw MathError("verify: the document has no bundle section");
    return *doc.bundle;
}

// bilinear star on qc elements; the operation has degree 0
ModuleElt star_apply(const Document::Bundle& b, const ModuleElt& x, const ModuleElt& y,
                     const DgModule& qc) {
    ModuleElt out;
    for (const auto& e : b.star) {
        if (e.inputs.size() != 2) throw MathError("verify: star must be bilinear");
        auto ix = x.c.find(e.inputs[0]);
        auto iy = y.c.find(e.inputs[1]);
        if (ix == x.c.end() || iy == y.c.end()) continue;
        // coefficient extraction: y's coefficient passes the first slot
        RingElement prod = ix->second * iy->second;
        auto yd = iy->second.homogeneous_degree();
        if (yd && yd->parity() && qc.at(static_cast<size_t>(e.inputs[0])).deg.parity())
            prod = -prod;
        out.add(e.output, prod * e.coeff);
    }
    return out;
}

ModuleElt basis_elt(const Document& doc, int i) {
    ModuleElt x;
    x.add(i, RingElement::one(doc.ring, doc.trunc));
    return x;
}

ModuleElt negate(const ModuleElt& x) {
    ModuleElt out;
    for (const auto& [i, r] : x.c) out.add(i, -r);
    return out;
}

Cochain scale_cochain(const Cochain& c, const RingElement& r) {
    Cochain out = c;
    out.entries.clear();
    for (const auto& e : c.entries) {
        CochainEntry e2 = e;
        e2.coeff = r * e.coeff;
        if (!e2.coeff.is_zero()) out.entries.push_back(std::move(e2));
    }
    return out;
}

Cochain zero_cochain(const Document& doc, const Degree& deg) {
    Cochain z;
    z.deg = deg;
    z.len_trunc = doc.length;
    return z;
}

// CO extended linearly over qc elements
Cochain co_of(const Document& doc, const ModuleElt& p) {
    const auto& b = need_bundle(doc);
    Cochain out;
    bool have = false;
    for (const auto& [i, r] : p.c) {
        auto it = b.co.find(i);
        if (it == b.co.end()) continue;
        Cochain piece = scale_cochain(doc.cochains.at(it->second), r);
        out = have ? out + piece : piece;
        have = true;
    }
    if (!have) return zero_cochain(doc, Degree::of_int(doc.ring->datum(), -1));
    return out;
}

ModuleElt oc_of(const Document& doc, const Chain& ch) {
    const auto& b = need_bundle(doc);
    ModuleElt out;
    for (const auto& [g, r] : ch.terms)
        for (const auto& e : b.oc) {
            if (!(e.gen == g)) continue;
            for (const auto& [i, v] : e.value.c) out.add(i, r * v);
        }
    return out;
}

Cochain h_co_of(const Document& doc, int p, int q) {
    const auto& b = need_bundle(doc);
    auto it = b.h_co.find({p, q});
    if (it == b.h_co.end())
        return zero_cochain(doc, Degree::of_int(doc.ring->datum(), -2));
    return doc.cochains.at(it->second);
}

ModuleElt h_oc_of(const Document& doc, int p, const Chain& ch) {
    const auto& b = need_bundle(doc);
    ModuleElt out;
    for (const auto& [g, r] : ch.terms)
        for (const auto& e : b.h_oc) {
            if (e.p != p || !(e.gen == g)) continue;
            for (const auto& [i, v] : e.value.c) out.add(i, r * v);
        }
    return out;
}

Cochain h_cy_of(const Document& doc, const Chain& ch) {
    const auto& b = need_bundle(doc);
    Cochain out;
    bool have = false;
    for (const auto& [g, r] : ch.terms)
        for (const auto& e : b.h_cy) {
            if (!(e.gen == g)) continue;
            Cochain piece = scale_cochain(doc.cochains.at(e.cochain), r);
            out = have ? out + piece : piece;
            have = true;
        }
    if (!have) return zero_cochain(doc, Degree::of_int(doc.ring->datum(), -1));
    return out;
}

std::vector<Chain> test_chains(const Document& doc, long long max_len) {
    const AinfCategory& c = doc.category;
    std::vector<Chain> out;
    std::function<void(std::vector<int>&, std::vector<int>&)> rec =
        [&](std::vector<int>& objs, std::vector<int>& tens) {
            const DgModule* hm = c.hom(objs.back(), objs.front());
            for (size_t m = 0; hm && m < hm->rank(); ++m) {
                Chain ch;
                ch.len_trunc = c.len_L;
                ChainGen g;
                g.objs = objs;
                g.m = static_cast<int>(m);
                g.tens = tens;
                ch.add(g, RingElement::one(c.ring, c.trunc_N));
                out.push_back(std::move(ch));
            }
            if (static_cast<long long>(tens.size()) >= max_len) return;
            for (size_t nxt = 0; nxt < c.objects.size(); ++nxt) {
                if (!c.hom(objs.back(), static_cast<int>(nxt))) continue;
                objs.push_back(static_cast<int>(nxt));
                for (size_t i = 0; i < c.hom_rank(objs[objs.size() - 2], objs.back());
                     ++i) {
                    tens.push_back(static_cast<int>(i));
                    rec(objs, tens);
                    tens.pop_back();
                }
                objs.pop_back();
            }
        };
    for (size_t a = 0; a < c.objects.size(); ++a) {
        std::vector<int> objs{static_cast<int>(a)};
        std::vector<int> tens;
        rec(objs, tens);
    }
    return out;
}

std::string elt_str(const Document& doc, const ModuleElt& x, const DgModule& qc) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [i, r] : x.c) {
        if (!first) os << " + ";
        first = false;
        os << "(" << r.str() << ")*" << qc.at(static_cast<size_t>(i)).label;
    }
    (void)doc;
    return first ? "0" : os.str();
}

}  // namespace

VerifyReport verify_leibniz_star(const Document& doc) {
    VerifyReport rep;
    rep.name = "leibniz-star";
    const auto& b = need_bundle(doc);
    b.qc.validate();
    size_t n = b.qc.rank();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            ModuleElt p = basis_elt(doc, static_cast<int>(i));
            ModuleElt q = basis_elt(doc, static_cast<int>(j));
            ModuleElt lhs = b.qc.apply_d(star_apply(b, p, q, b.qc));
            ModuleElt t1 = star_apply(b, b.qc.apply_d(p), q, b.qc);
            ModuleElt t2 = star_apply(b, p, b.qc.apply_d(q), b.qc);
            ModuleElt residual = lhs + t1 + (b.qc.at(i).deg.parity() ? negate(t2) : t2);
            if (!residual.is_zero()) {
                rep.pass = false;
                std::ostringstream os;
                os << "Leibniz residual at (" << b.qc.at(i).label << ", "
                   << b.qc.at(j).label << "): " << elt_str(doc, residual, b.qc);
                rep.failures.push_back(os.str());
            }
        }
    return rep;
}

VerifyReport verify_co_algebra(const Document& doc) {
    VerifyReport rep;
    rep.name = "co-algebra";
    const auto& b = need_bundle(doc);
    const AinfCategory& c = doc.category;
    // closedness of CO on every basis class
    for (const auto& [i, name] : b.co) {
        if (!cc_differential(c, doc.cochains.at(name)).is_zero()) {
            rep.pass = false;
            rep.failures.push_back("CO(" + b.qc.at(static_cast<size_t>(i)).label +
                                   ") is not closed");
        }
    }
    size_t n = b.qc.rank();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            ModuleElt p = basis_elt(doc, static_cast<int>(i));
            ModuleElt q = basis_elt(doc, static_cast<int>(j));
            Cochain lhs = co_of(doc, star_apply(b, p, q, b.qc));
            Cochain rhs = cup(c, co_of(doc, p), co_of(doc, q));
            Cochain h = h_co_of(doc, static_cast<int>(i), static_cast<int>(j));
            Cochain boundary =
                h.is_zero() ? zero_cochain(doc, lhs.deg) : cc_differential(c, h);
            Cochain residual = lhs - rhs - boundary;
            if (!residual.is_zero()) {
                rep.pass = false;
                rep.failures.push_back("algebra residual at (" + b.qc.at(i).label + ", " +
                                       b.qc.at(j).label + "), " +
                                       std::to_string(residual.entries.size()) +
                                       " component(s)");
            }
        }
    return rep;
}

VerifyReport verify_oc_module(const Document& doc) {
    VerifyReport rep;
    rep.name = "oc-module";
    const auto& b = need_bundle(doc);
    const AinfCategory& c = doc.category;
    auto chains = test_chains(doc, std::min<long long>(doc.length, 3));
    // chain-map precondition: d(OC(g)) = (-1)^n OC(b(g))
    int nsign = (b.n % 2) ? -1 : 1;
    for (const auto& ch : chains) {
        ModuleElt lhs = b.qc.apply_d(oc_of(doc, ch));
        ModuleElt rhs = oc_of(doc, hochschild_b(c, ch));
        ModuleElt residual = nsign > 0 ? lhs - rhs : lhs + rhs;
        if (!residual.is_zero()) {
            rep.pass = false;
            rep.failures.push_back("OC is not a chain map: residual " +
                                   elt_str(doc, residual, b.qc));
        }
    }
    for (const auto& [pi, name] : b.co) {
        const Cochain& cop = doc.cochains.at(name);
        ModuleElt p = basis_elt(doc, pi);
        for (const auto& ch : chains) {
            ModuleElt lhs = oc_of(doc, hochschild_b11(c, cop, ch));
            ModuleElt rhs = star_apply(b, p, oc_of(doc, ch), b.qc);
            ModuleElt hterm = b.qc.apply_d(h_oc_of(doc, pi, ch));
            ModuleElt hterm_b = h_oc_of(doc, pi, hochschild_b(c, ch));
            ModuleElt residual = lhs - rhs - hterm - hterm_b;
            if (!residual.is_zero()) {
                rep.pass = false;
                rep.failures.push_back(
                    "module residual for p = " + b.qc.at(static_cast<size_t>(pi)).label +
                    ": " + elt_str(doc, residual, b.qc));
            }
        }
    }
    return rep;
}

VerifyReport verify_cardy(const Document& doc) {
    VerifyReport rep;
    rep.name = "cardy";
    const auto& b = need_bundle(doc);
    const AinfCategory& c = doc.category;
    if (!b.cy) {
        rep.pass = false;
        rep.failures.push_back("bundle has no CY morphism");
        return rep;
    }
    HomToShriek cy = *b.cy;
    cy.cat = &c;
    if (!shriek_hom_differential(cy).is_zero()) {
        rep.pass = false;
        rep.failures.push_back("CY is not a closed bimodule morphism");
    }
    int cardy_sign = ((b.n * (b.n + 1) / 2) % 2) ? -1 : 1;
    for (const auto& ch : test_chains(doc, std::min<long long>(doc.length, 3))) {
        Cochain lhs = co_of(doc, oc_of(doc, ch));
        Cochain rhs = mu_bar(c, rho_pushforward(cy, ch)).scaled(cardy_sign);
        Cochain h = h_cy_of(doc, ch);
        Cochain hb = h_cy_of(doc, hochschild_b(c, ch));
        Cochain boundary = h.is_zero() ? zero_cochain(doc, lhs.deg) : cc_differential(c, h);
        Cochain residual = lhs - rhs - boundary - hb;
        if (!residual.is_zero()) {
            rep.pass = false;
            rep.failures.push_back("Cardy residual with " +
                                   std::to_string(residual.entries.size()) +
                                   " component(s)");
        }
    }
    return rep;
}

}  // namespace acat

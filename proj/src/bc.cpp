#include "acat/bc.hpp"

#include <algorithm>
#include <functional>

namespace acat {

namespace {

int coeff_parity_of(const RingElement& r) {
    auto d = r.homogeneous_degree();
    return d ? d->parity() : 0;
}

}  // namespace

void PreBoundingCochain::validate(const AinfCategory& c) const {
    const DgModule* h = c.hom(object, object);
    if (!h) throw MathError("bounding cochain: object has no endomorphisms");
    for (const auto& [i, r] : b.c) {
        if (i < 0 || static_cast<size_t>(i) >= h->rank())
            throw MathError("bounding cochain: basis index out of range");
        if (r.filtration_level() < 1)
            throw MathError("bounding cochain: element must lie in F_1");
        auto d = r.homogeneous_degree();
        if (!d || !((*d + h->at(static_cast<size_t>(i)).deg).is_zero()))
            throw MathError("bounding cochain: element must have shifted degree 0");
    }
}

ModuleElt bc_curvature(const AinfCategory& c, const PreBoundingCochain& bc) {
    bc.validate(c);
    const DgModule* h = c.hom(bc.object, bc.object);
    ModuleElt out = h->apply_d(bc.b);
    for (const auto& e : c.mu.entries) {
        bool on_object = std::all_of(e.objs.begin(), e.objs.end(),
                                     [&](int o) { return o == bc.object; });
        if (!on_object) continue;
        // fill every input with a term of b; extraction signs over the slots
        RingElement acc = RingElement::one(c.ring, c.trunc_N);
        std::function<void(size_t, RingElement, int)> fill =
            [&](size_t slot, RingElement cur, int running) {
                if (slot == e.ins.size()) {
                    out.add(e.out, cur * e.coeff);
                    return;
                }
                auto it = bc.b.c.find(e.ins[slot]);
                if (it == bc.b.c.end()) return;
                RingElement nxt = cur * it->second;
                if (coeff_parity_of(it->second) && (running % 2)) nxt = -nxt;
                if (nxt.is_zero()) return;
                fill(slot + 1, std::move(nxt),
                     running + c.reduced_parity(bc.object, bc.object, e.ins[slot]));
            };
        fill(0, acc, /*running=*/1);
    }
    return out;
}

McSolution solve_mc(const AinfCategory& c, int object) {
    McSolution sol;
    sol.cochain.object = object;
    const DgModule* h = c.hom(object, object);
    if (!h) throw MathError("solve_mc: object has no endomorphisms");
    long long n_trunc = c.trunc_N;

    // weight-graded monomial enumeration
    std::vector<Monomial> monomials_by_weight[64];
    {
        size_t nn = c.ring->num_ne(), nb = c.ring->num_bulk();
        std::function<void(Monomial&, size_t)> rec = [&](Monomial& m, size_t var) {
            long long w = m.weight();
            if (w >= n_trunc) return;
            if (var == nn + nb) {
                if (w < 64) monomials_by_weight[w].push_back(m);
                return;
            }
            unsigned max_e = static_cast<unsigned>(n_trunc - w);
            for (unsigned e = 0; e <= max_e; ++e) {
                if (var < nn)
                    m.ne[var] = e;
                else {
                    if (e >= 2 && c.ring->bulk_parity(var - nn) == 1) break;
                    m.dp[var - nn] = e;
                }
                rec(m, var + 1);
            }
            if (var < nn)
                m.ne[var] = 0;
            else
                m.dp[var - nn] = 0;
        };
        Monomial m;
        m.ne.assign(nn, 0);
        m.dp.assign(nb, 0);
        rec(m, 0);
    }

    // unknown cells per weight: (monomial, basis) with deg(mono) + deg(e) = 0
    auto unknown_cells = [&](long long w) {
        std::vector<std::pair<Monomial, int>> cells;
        for (const auto& m : monomials_by_weight[w]) {
            RingElement probe = RingElement::monomial(c.ring, n_trunc, m);
            if (probe.is_zero()) continue;
            Degree md = probe.monomial_degree(m);
            for (size_t i = 0; i < h->rank(); ++i)
                if ((md + h->at(i).deg).is_zero()) cells.emplace_back(m, static_cast<int>(i));
        }
        return cells;
    };
    // residual cells per weight: (monomial, basis) with deg = i(1)
    auto residual_index = [&](long long w) {
        std::map<std::pair<Monomial, int>, size_t> idx;
        Degree one = Degree::of_int(c.ring->datum(), 1);
        for (const auto& m : monomials_by_weight[w]) {
            RingElement probe = RingElement::monomial(c.ring, n_trunc, m);
            if (probe.is_zero()) continue;
            Degree md = probe.monomial_degree(m);
            for (size_t i = 0; i < h->rank(); ++i)
                if (md + h->at(i).deg == one) idx[{m, static_cast<int>(i)}] = idx.size();
        }
        return idx;
    };

    ModuleElt current;  // accumulated b
    for (long long w = 1; w < n_trunc; ++w) {
        PreBoundingCochain trial;
        trial.object = object;
        trial.b = current;
        ModuleElt curv = bc_curvature(c, trial);
        // residual at weight w
        auto ridx = residual_index(w);
        std::vector<long long> rhs(ridx.size(), 0);
        bool nonzero = false;
        for (const auto& [i, r] : curv.c)
            for (const auto& [m, coeff] : r.terms()) {
                if (m.weight() != w) continue;
                auto it = ridx.find({m, i});
                if (it == ridx.end()) throw MathError("solve_mc: residual outside cell table");
                rhs[it->second] = checked_add(rhs[it->second], coeff);
                nonzero = true;
            }
        auto cells = unknown_cells(w);
        // matrix of x |-> weight-w part of d(x) + mu^1(x)
        IntMat a(ridx.size(), std::vector<long long>(cells.size(), 0));
        for (size_t col = 0; col < cells.size(); ++col) {
            const auto& [mono, basis] = cells[col];
            ModuleElt x;
            x.add(basis, RingElement::monomial(c.ring, n_trunc, mono));
            ModuleElt dx = h->apply_d(x);
            for (const auto& e : c.mu.entries) {
                if (e.ins.size() != 1 || e.objs.front() != object || e.objs.back() != object)
                    continue;
                if (e.ins[0] != basis) continue;
                dx.add(e.out, e.coeff * RingElement::monomial(c.ring, n_trunc, mono));
            }
            for (const auto& [i, r] : dx.c)
                for (const auto& [m, coeff] : r.terms()) {
                    if (m.weight() != w) continue;
                    auto it = ridx.find({m, i});
                    if (it != ridx.end())
                        a[it->second][col] = checked_add(a[it->second][col], coeff);
                }
        }
        if (!nonzero && cells.empty()) continue;
        std::vector<long long> neg_rhs(rhs.size());
        for (size_t i = 0; i < rhs.size(); ++i) neg_rhs[i] = -rhs[i];
        std::vector<long long> x;
        IntMat kernel;
        bool ok = solve_integer_system(a, neg_rhs, x, kernel);
        if (!ok) {
            if (rational_solvable(a, neg_rhs)) sol.integral = false;
            sol.solved = false;
            sol.obstruction_order = w;
            ModuleElt obst;
            for (const auto& [cell, row] : ridx)
                if (rhs[row] != 0)
                    obst.add(cell.second,
                             RingElement::monomial(c.ring, n_trunc, cell.first, rhs[row]));
            sol.obstruction = std::move(obst);
            return sol;
        }
        for (size_t col = 0; col < cells.size(); ++col)
            if (x[col] != 0)
                current.add(cells[col].second,
                            RingElement::monomial(c.ring, n_trunc, cells[col].first, x[col]));
        sol.family_basis.clear();
        for (const auto& kvec : kernel) {
            ModuleElt dir;
            for (size_t col = 0; col < cells.size(); ++col)
                if (kvec[col] != 0)
                    dir.add(cells[col].second,
                            RingElement::monomial(c.ring, n_trunc, cells[col].first, kvec[col]));
            if (!dir.is_zero()) sol.family_basis.push_back(std::move(dir));
        }
    }
    sol.solved = true;
    sol.cochain.b = std::move(current);
    // exactness check below the truncation
    ModuleElt final_curv = bc_curvature(c, sol.cochain);
    if (!final_curv.is_zero()) {
        sol.solved = false;
        sol.obstruction = std::move(final_curv);
        sol.obstruction_order = c.trunc_N;
    }
    return sol;
}

// -------------------------------------------------------------- category --

namespace {

// Enumerates b-fillings of a structure-constant entry.  Positions of the
// entry are either matched against "real" inputs (kept, in order) or filled
// with a term of the bounding cochain sitting at that gap.
struct BcFiller {
    const AinfCategory* base = nullptr;
    const std::vector<PreBoundingCochain>* bcs = nullptr;

    // which bc objects sit over a given base object
    std::vector<int> lifts(int base_obj) const {
        std::vector<int> out;
        for (size_t i = 0; i < bcs->size(); ++i)
            if ((*bcs)[i].object == base_obj) out.push_back(static_cast<int>(i));
        return out;
    }
};

}  // namespace

AinfCategory bc_category(const AinfCategory& c,
                         const std::vector<PreBoundingCochain>& bcs) {
    for (const auto& b : bcs) b.validate(c);
    AinfCategory out;
    out.ring = c.ring;
    out.trunc_N = c.trunc_N;
    out.len_L = c.len_L;
    for (size_t i = 0; i < bcs.size(); ++i)
        out.objects.push_back(c.objects[bcs[i].object] + "#b" + std::to_string(i));
    for (size_t i = 0; i < bcs.size(); ++i)
        for (size_t j = 0; j < bcs.size(); ++j) {
            const DgModule* h = c.hom(bcs[i].object, bcs[j].object);
            if (h) out.homs.emplace(std::make_pair(static_cast<int>(i), static_cast<int>(j)), *h);
        }
    CochainBuilder mu(Degree::of_int(c.ring->datum(), 1), c.len_L);
    for (const auto& e : c.mu.entries) {
        // choose for each position: real input or b-fill; object decorations
        // must refine the base objects
        size_t n = e.ins.size();
        std::function<void(size_t, std::vector<int>&, std::vector<int>&, RingElement, int)>
            rec = [&](size_t pos, std::vector<int>& objs_bc, std::vector<int>& ins_bc,
                      RingElement coeff, int running) {
                if (pos == n) {
                    if (objs_bc.size() != ins_bc.size() + 1) return;
                    mu.add(objs_bc, ins_bc, e.out, coeff * e.coeff);
                    return;
                }
                int gap_obj = e.objs[pos];  // object before this input
                (void)gap_obj;
                // (a) real input: the current bc object must map to objs[pos],
                // and the next to objs[pos+1]
                for (size_t j = 0; j < bcs.size(); ++j) {
                    if (bcs[j].object != e.objs[pos + 1]) continue;
                    if (objs_bc.empty()) {
                        for (size_t i0 = 0; i0 < bcs.size(); ++i0) {
                            if (bcs[i0].object != e.objs[pos]) continue;
                            std::vector<int> o2{static_cast<int>(i0), static_cast<int>(j)};
                            std::vector<int> in2{e.ins[pos]};
                            rec(pos + 1, o2, in2, coeff,
                                running + c.reduced_parity(e.objs[pos], e.objs[pos + 1],
                                                           e.ins[pos]));
                        }
                    } else {
                        if (bcs[objs_bc.back()].object != e.objs[pos]) continue;
                        std::vector<int> o2 = objs_bc;
                        o2.push_back(static_cast<int>(j));
                        std::vector<int> in2 = ins_bc;
                        in2.push_back(e.ins[pos]);
                        rec(pos + 1, o2, in2, coeff,
                            running + c.reduced_parity(e.objs[pos], e.objs[pos + 1],
                                                       e.ins[pos]));
                    }
                }
                // (b) b-fill: requires objs[pos] == objs[pos+1] and a bc object
                // over it; the bc object is the one currently at this gap
                if (e.objs[pos] != e.objs[pos + 1]) return;
                std::vector<int> gap_candidates;
                if (objs_bc.empty()) {
                    for (size_t i0 = 0; i0 < bcs.size(); ++i0)
                        if (bcs[i0].object == e.objs[pos])
                            gap_candidates.push_back(static_cast<int>(i0));
                } else {
                    gap_candidates.push_back(objs_bc.back());
                }
                for (int gap : gap_candidates) {
                    auto it = bcs[static_cast<size_t>(gap)].b.c.find(e.ins[pos]);
                    if (it == bcs[static_cast<size_t>(gap)].b.c.end()) continue;
                    RingElement nxt = coeff * it->second;
                    if (coeff_parity_of(it->second) && (running % 2)) nxt = -nxt;
                    if (nxt.is_zero()) continue;
                    std::vector<int> o2 = objs_bc;
                    std::vector<int> in2 = ins_bc;
                    if (o2.empty()) o2.push_back(gap);
                    rec(pos + 1, o2, in2, std::move(nxt),
                        running + c.reduced_parity(e.objs[pos], e.objs[pos], e.ins[pos]));
                }
            };
        std::vector<int> objs_bc, ins_bc;
        rec(0, objs_bc, ins_bc, RingElement::one(c.ring, c.trunc_N), /*running=*/1);
        // bare mu^0 entries are not reachable by rec (no slot seeds the object)
        if (n == 0)
            for (size_t i0 = 0; i0 < bcs.size(); ++i0)
                if (bcs[i0].object == e.objs.front())
                    mu.add({static_cast<int>(i0)}, {}, e.out, e.coeff);
    }
    // the d(b) part of the curvature mu^0_{bc} = d(b) + mu{}_b
    for (size_t i0 = 0; i0 < bcs.size(); ++i0) {
        const DgModule* h = c.hom(bcs[i0].object, bcs[i0].object);
        if (!h) continue;
        for (const auto& [idx, r] : h->apply_d(bcs[i0].b).c)
            mu.add({static_cast<int>(i0)}, {}, idx, r);
    }
    out.mu = mu.take();
    return out;
}

AinfFunctor bc_functor(const AinfCategory& c_bc, const AinfCategory& c,
                       const std::vector<PreBoundingCochain>& bcs) {
    AinfFunctor f;
    f.src = &c_bc;
    f.tgt = &c;
    for (const auto& b : bcs) f.obj_map.push_back(b.object);
    CochainBuilder comps(Degree::zero(c.ring->datum()), c_bc.len_L);
    for (size_t i = 0; i < bcs.size(); ++i)
        for (const auto& [idx, r] : bcs[i].b.c)
            comps.add({static_cast<int>(i)}, {}, idx, r);
    for (size_t i = 0; i < bcs.size(); ++i)
        for (size_t j = 0; j < bcs.size(); ++j) {
            const DgModule* h = c_bc.hom(static_cast<int>(i), static_cast<int>(j));
            for (size_t m = 0; h && m < h->rank(); ++m)
                comps.add({static_cast<int>(i), static_cast<int>(j)},
                          {static_cast<int>(m)}, static_cast<int>(m),
                          RingElement::one(c.ring, c.trunc_N));
        }
    f.comps = comps.take();
    return f;
}

Cochain cochain_bc(const AinfCategory& c_bc, const AinfCategory& c,
                   const std::vector<PreBoundingCochain>& bcs, const Cochain& alpha) {
    (void)c;
    AinfFunctor f = bc_functor(c_bc, c, bcs);
    // alpha^{bc} = alpha composed with F-blocks: this is the brace of alpha
    // with no arguments decorated by F
    BraceArgs args;
    args.src = &c_bc;
    args.tgt = f.tgt;
    args.psi = &alpha;
    args.fs = {&f};
    args.len_trunc = c_bc.len_L;
    return brace(args);
}

HomToShriek rho_bc(const AinfCategory& c_bc, const AinfCategory& c,
                   const std::vector<PreBoundingCochain>& bcs, const HomToShriek& rho) {
    // rho^{bc} = (phi -> phi^{bc}) o F^* rho: every input slot of a rho entry
    // (arms and the C^! value's inputs) is fed either by a real input or by a
    // term of the bounding cochain at that object.
    HomToShriek out;
    out.cat = &c_bc;
    out.deg = rho.deg;
    out.len_trunc = rho.len_trunc;
    int prho = rho.deg.parity();
    for (const auto& e : rho.entries) {
        struct State {
            std::vector<int> lins, rins, dins;
            std::vector<int> lobjs, robjs, dobjs;
            RingElement coeff;
            int running;
        };
        auto fill_or_keep = [&](const std::vector<int>& objs, const std::vector<int>& ins,
                                size_t pos, const State& st, auto&& keep, auto&& fill) {
            // keep: consume ins[pos] as a real input
            keep(st);
            // fill: ins[pos] fed by a b-term; requires the gap objects equal
            if (objs[pos] != objs[pos + 1]) return;
            for (const auto& bc : bcs) {
                if (bc.object != objs[pos]) continue;
                auto it = bc.b.c.find(ins[pos]);
                if (it == bc.b.c.end()) continue;
                State st2 = st;
                RingElement nc = st2.coeff * it->second;
                auto cd = it->second.homogeneous_degree();
                if (cd && cd->parity() && (st2.running % 2)) nc = -nc;
                if (nc.is_zero()) continue;
                st2.coeff = std::move(nc);
                fill(std::move(st2));
            }
        };
        std::function<void(size_t, State)> walk_d;
        std::function<void(size_t, State)> walk_r;
        std::function<void(size_t, State)> walk_l;
        walk_d = [&](size_t pos, State st) {
            if (pos == e.out.dins.size()) {
                ShriekHomEntry e2;
                e2.lobjs = st.lobjs;
                e2.lobjs.push_back(e.lobjs.back());
                e2.lins = st.lins;
                e2.robjs = st.robjs;
                e2.robjs.push_back(e.robjs.back());
                e2.rins = st.rins;
                e2.m_in = e.m_in;
                e2.out.dobjs = st.dobjs;
                e2.out.dobjs.push_back(e.out.dobjs.back());
                e2.out.dins = st.dins;
                e2.out.out1 = e.out.out1;
                e2.out.out2 = e.out.out2;
                e2.coeff = st.coeff;
                out.entries.push_back(std::move(e2));
                return;
            }
            int par = c.reduced_parity(e.out.dobjs[pos], e.out.dobjs[pos + 1],
                                       e.out.dins[pos]);
            fill_or_keep(
                e.out.dobjs, e.out.dins, pos, st,
                [&](State s2) {
                    s2.dins.push_back(e.out.dins[pos]);
                    s2.dobjs.push_back(e.out.dobjs[pos]);
                    s2.running += par;
                    walk_d(pos + 1, std::move(s2));
                },
                [&](State s2) {
                    s2.running += par;
                    walk_d(pos + 1, std::move(s2));
                });
        };
        walk_r = [&](size_t pos, State st) {
            if (pos == e.rins.size()) {
                walk_d(0, std::move(st));
                return;
            }
            int par = c.reduced_parity(e.robjs[pos], e.robjs[pos + 1], e.rins[pos]);
            fill_or_keep(
                e.robjs, e.rins, pos, st,
                [&](State s2) {
                    s2.rins.push_back(e.rins[pos]);
                    s2.robjs.push_back(e.robjs[pos]);
                    s2.running += par;
                    walk_r(pos + 1, std::move(s2));
                },
                [&](State s2) {
                    s2.running += par;
                    walk_r(pos + 1, std::move(s2));
                });
        };
        walk_l = [&](size_t pos, State st) {
            if (pos == e.lins.size()) {
                st.running += c.reduced_parity(e.lobjs.back(), e.robjs.front(), e.m_in);
                walk_r(0, std::move(st));
                return;
            }
            int par = c.reduced_parity(e.lobjs[pos], e.lobjs[pos + 1], e.lins[pos]);
            fill_or_keep(
                e.lobjs, e.lins, pos, st,
                [&](State s2) {
                    s2.lins.push_back(e.lins[pos]);
                    s2.lobjs.push_back(e.lobjs[pos]);
                    s2.running += par;
                    walk_l(pos + 1, std::move(s2));
                },
                [&](State s2) {
                    s2.running += par;
                    walk_l(pos + 1, std::move(s2));
                });
        };
        State init;
        init.coeff = e.coeff;
        init.running = prho;
        walk_l(0, std::move(init));
    }
    HomToShriek zero;
    zero.cat = out.cat;
    zero.deg = out.deg;
    zero.len_trunc = out.len_trunc;
    return zero + out;
}

}  // namespace acat

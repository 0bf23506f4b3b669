#include "acat/module.hpp"

#include <algorithm>

namespace acat {

void ModuleElt::add(int idx, const RingElement& r) {
    if (r.is_zero()) return;
    auto it = c.find(idx);
    if (it == c.end()) {
        c.emplace(idx, r);
    } else {
        it->second = it->second + r;
        if (it->second.is_zero()) c.erase(it);
    }
}

ModuleElt ModuleElt::operator+(const ModuleElt& o) const {
    ModuleElt out = *this;
    for (const auto& [i, r] : o.c) out.add(i, r);
    return out;
}

ModuleElt ModuleElt::operator-(const ModuleElt& o) const {
    ModuleElt out = *this;
    for (const auto& [i, r] : o.c) out.add(i, -r);
    return out;
}

bool ModuleElt::is_zero() const { return c.empty(); }

DgModule::DgModule(GradedModule base, std::vector<SparseCol> d_cols, long long trunc)
    : base_(std::move(base)), d_cols_(std::move(d_cols)), trunc_(trunc) {
    if (d_cols_.empty()) d_cols_.assign(base_.rank(), {});
    if (d_cols_.size() != base_.rank()) throw MathError("dg module: differential shape");
}

ModuleElt DgModule::apply_d(const ModuleElt& x) const {
    ModuleElt out;
    for (const auto& [j, r] : x.c) {
        RingElement dr = r.d();
        if (!dr.is_zero()) out.add(j, dr);
        auto [even, odd] = r.parity_split();
        for (const auto& [i, s] : d_cols_[j]) {
            if (!even.is_zero()) out.add(i, even * s);
            if (!odd.is_zero()) out.add(i, -(odd * s));
        }
    }
    return out;
}

ModuleElt DgModule::apply_linear(const std::vector<SparseCol>& cols, int map_parity,
                                 const ModuleElt& x) const {
    ModuleElt out;
    for (const auto& [j, r] : x.c) {
        auto [even, odd] = r.parity_split();
        for (const auto& [i, s] : cols[j]) {
            if (!even.is_zero()) out.add(i, even * s);
            if (!odd.is_zero()) out.add(i, map_parity ? -(odd * s) : odd * s);
        }
    }
    return out;
}

void DgModule::validate() const {
    Degree one = Degree::of_int(ring()->datum(), 1);
    for (size_t j = 0; j < rank(); ++j) {
        for (const auto& [i, r] : d_cols_[j]) {
            auto deg = r.homogeneous_degree();
            if (!deg) throw MathError("dg module: differential entry not homogeneous");
            if (!(*deg + at(i).deg == at(j).deg + one))
                throw MathError("dg module: differential is not of degree i(1)");
        }
        ModuleElt ej;
        ej.add(static_cast<int>(j), RingElement::one(ring(), trunc_));
        if (!apply_d(apply_d(ej)).is_zero())
            throw MathError("dg module: differential does not square to zero");
    }
}

DgModule tensor(const DgModule& m, const DgModule& n) {
    if (!(*m.ring() == *n.ring())) throw MathError("tensor: ring mismatch");
    GradedModule base;
    base.ring = m.ring();
    size_t nm = m.rank(), nn = n.rank();
    std::vector<SparseCol> cols(nm * nn);
    for (size_t i = 0; i < nm; ++i)
        for (size_t j = 0; j < nn; ++j) {
            base.basis.push_back({m.at(i).label + "(x)" + n.at(j).label, m.at(i).deg + n.at(j).deg});
            SparseCol& col = cols[pair_index(i, j, nn)];
            for (const auto& [i2, r] : m.d_cols()[i])
                col.emplace_back(static_cast<int>(pair_index(i2, j, nn)), r);
            int ei_par = m.at(i).deg.parity();
            int sgn = ei_par ? -1 : 1;  // d passing e_i
            for (const auto& [j2, r] : n.d_cols()[j]) {
                // e_i (x) (r e_{j2}) = (-1)^{|r||e_i|} r (e_i (x) e_{j2})
                auto [even, odd] = r.parity_split();
                RingElement coeff = even.scaled(sgn) + odd.scaled(ei_par ? -sgn : sgn);
                if (!coeff.is_zero())
                    col.emplace_back(static_cast<int>(pair_index(i, j2, nn)), coeff);
            }
        }
    return DgModule(std::move(base), std::move(cols), m.trunc());
}

DgModule shift(const Degree& g, const DgModule& m) {
    GradedModule base;
    base.ring = m.ring();
    for (const auto& b : m.base().basis) base.basis.push_back({b.label, b.deg + g});
    std::vector<SparseCol> cols = m.d_cols();
    if (g.parity()) {
        for (auto& col : cols)
            for (auto& [i, r] : col) r = -r;
    }
    return DgModule(std::move(base), std::move(cols), m.trunc());
}

// del(f) = d_N f - (-1)^{|f|} f d_M: the graded commutator, so the identity
// endomorphism is closed and closed odd maps anticommute with d after
// translating out of the torsor bookkeeping.
DgModule hom_complex(const DgModule& m, const DgModule& n) {
    if (!(*m.ring() == *n.ring())) throw MathError("hom: ring mismatch");
    GradedModule base;
    base.ring = m.ring();
    size_t nm = m.rank(), nn = n.rank();
    std::vector<SparseCol> cols(nm * nn);
    for (size_t i = 0; i < nm; ++i)
        for (size_t j = 0; j < nn; ++j) {
            base.basis.push_back({"[" + m.at(i).label + "->" + n.at(j).label + "]",
                                  n.at(j).deg - m.at(i).deg});
            int fpar = (n.at(j).deg - m.at(i).deg).parity();
            SparseCol& col = cols[pair_index(i, j, nn)];
            // d_N o f : f_{ij} -> sum_k d_{jk} f_{ik}
            for (const auto& [k, r] : n.d_cols()[j])
                col.emplace_back(static_cast<int>(pair_index(i, static_cast<size_t>(k), nn)), r);
            // -(-1)^{|f|} f o d_M : del(f_{ij}) picks up r f_{i2 j} whenever
            // d(e_{i2}) contains r e_i
            for (size_t i2 = 0; i2 < nm; ++i2)
                for (const auto& [k, r] : m.d_cols()[i2])
                    if (static_cast<size_t>(k) == i) {
                        // f(d e_{i2}) = f(r e_i) = (-1)^{|f||r|} r f(e_i)
                        auto [even, odd] = r.parity_split();
                        RingElement coeff = even + (fpar ? -odd : odd);
                        coeff = fpar ? coeff : -coeff;  // -(-1)^{|f|}
                        if (!coeff.is_zero())
                            col.emplace_back(static_cast<int>(pair_index(i2, j, nn)), coeff);
                    }
        }
    return DgModule(std::move(base), std::move(cols), m.trunc());
}

std::vector<HomologyGroup> homology(const DgModule& m, CoeffField field,
                                    std::optional<std::pair<long long, long long>> window) {
    // require constant integer differential
    auto const_of = [](const RingElement& r) -> long long {
        if (r.is_zero()) return 0;
        if (r.terms().size() != 1) throw MathError("homology: differential not constant");
        const auto& [mon, c] = *r.terms().begin();
        if (mon.weight() != 0) throw MathError("homology: differential not of weight zero");
        return c;
    };
    std::map<Degree, std::vector<size_t>> buckets;
    for (size_t i = 0; i < m.rank(); ++i) buckets[m.at(i).deg].push_back(i);
    Degree one = Degree::of_int(m.ring()->datum(), 1);

    auto matrix_from = [&](const Degree& g) -> IntMat {
        auto src = buckets.find(g);
        if (src == buckets.end()) return {};
        Degree h = g + one;
        auto tgt = buckets.find(h);
        size_t rows = tgt == buckets.end() ? 0 : tgt->second.size();
        IntMat a(rows, std::vector<long long>(src->second.size(), 0));
        if (rows == 0) return a;
        std::map<size_t, size_t> tgt_index;
        for (size_t t = 0; t < tgt->second.size(); ++t) tgt_index[tgt->second[t]] = t;
        for (size_t cidx = 0; cidx < src->second.size(); ++cidx)
            for (const auto& [i, r] : m.d_cols()[src->second[cidx]]) {
                auto it = tgt_index.find(static_cast<size_t>(i));
                long long v = const_of(r);
                if (v == 0) continue;
                if (it == tgt_index.end()) throw MathError("homology: differential not graded");
                a[it->second][cidx] = v;
            }
        return a;
    };

    std::vector<HomologyGroup> out;
    for (const auto& [g, idxs] : buckets) {
        if (window && m.ring()->datum()->free_rank() >= 1) {
            long long c0 = g.coords()[0];
            if (c0 < window->first || c0 > window->second) continue;
        }
        IntMat d_out = matrix_from(g);
        IntMat d_in = matrix_from(g - one);
        SmithForm sf_out = smith_normal_form(d_out);
        SmithForm sf_in = smith_normal_form(d_in);
        HomologyGroup h;
        h.deg = g;
        h.free_rank = static_cast<long long>(idxs.size()) -
                      static_cast<long long>(sf_out.rank()) -
                      static_cast<long long>(sf_in.rank());
        if (field == CoeffField::Integers)
            for (long long s : sf_in.diag)
                if (s > 1) h.invariant_factors.push_back(s);
        out.push_back(std::move(h));
    }
    return out;
}

}  // namespace acat

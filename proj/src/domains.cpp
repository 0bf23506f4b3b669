#include "acat/domains.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

namespace acat {

long long TopType::total(long long Component::*field) const {
    long long t = 0;
    for (const auto& c : components) t += c.*field;
    return t;
}

long long TopType::chi_capped() const {
    // chi of each smoothed component, glued along nodes, boundaries capped
    long long chi = 0;
    for (const auto& c : components)
        chi += c.kind == ComponentKind::Sphere ? 2 : c.kind == ComponentKind::Disc ? 1 : 0;
    chi -= 2 * interior_nodes;  // interior node: two points identified
    chi -= boundary_nodes;      // boundary node
    // capping: after smoothing, each boundary circle gains a disc
    return chi + boundary_circles();
}

long long TopType::boundary_circles() const {
    // boundary circles of the smoothed surface: each disc contributes one,
    // annuli two; boundary nodes merge or split circles.  For the distinguished
    // families the bookkeeping below is exact: smoothing a boundary node
    // joining two distinct circles merges them; a self-node splits one.
    long long circles = 0;
    for (const auto& c : components)
        circles += c.kind == ComponentKind::Disc ? 1 : c.kind == ComponentKind::Annulus ? 2 : 0;
    return circles - boundary_nodes;
}

bool TopType::smoothing_valid() const {
    // components linked only through intervals stay separate surfaces and are
    // elementary by construction
    if (boundary_nodes == 0 && interior_nodes == 0) return true;
    long long chi = 0;
    for (const auto& c : components)
        chi += c.kind == ComponentKind::Sphere ? 2 : c.kind == ComponentKind::Disc ? 1 : 0;
    chi -= 2 * interior_nodes;
    chi -= boundary_nodes;
    long long b = boundary_circles();
    if (b < 0) return false;
    // the node-connected piece must smooth to a genus-zero surface with at
    // most two boundary circles
    return chi == 2 - b && b <= 2;
}

namespace {

long long family_dim(const TopType& t) {
    // dimension of the open stratum: product of per-component moduli, plus
    // one for each sliding interval
    long long dim = 0;
    for (const auto& c : t.components) {
        long long bdry = c.boundary_in + c.boundary_out;
        long long inter = c.bulk_in + c.bulk_out + c.stab + c.stab_nonsym;
        switch (c.kind) {
            case ComponentKind::Disc:
                dim += bdry - 3 + 2 * inter;
                break;
            case ComponentKind::Sphere:
                dim += 2 * inter - 6;
                break;
            case ComponentKind::Annulus:
                // modulus of the annulus plus marked points, minus rotation
                dim += bdry + 2 * inter;
                break;
        }
    }
    for (IntervalLength l : t.intervals)
        if (l == IntervalLength::Sliding) dim += 1;
    return dim;
}

bool component_stable(const TopType::Component& c) {
    long long bdry = c.boundary_in + c.boundary_out;
    long long inter = c.bulk_in + c.bulk_out + c.stab + c.stab_nonsym;
    switch (c.kind) {
        case ComponentKind::Disc:
            return bdry + 2 * inter >= 3;
        case ComponentKind::Sphere:
            return inter >= 3;
        case ComponentKind::Annulus:
            return true;
    }
    return false;
}

TorsorWord sigma_f_word(const TopType& t, long long dim) {
    // eq-style orientation torsor: sigma(R(F))^vee, the capped factor, the
    // boundary marked-point factors and the boundary-circle factors
    TorsorWord w;
    auto push = [&](std::string label, LinExpr deg, bool dual) {
        if (deg == LinExpr(0) && !dual) return;
        TorsorSymbol s;
        s.label = std::move(label);
        s.deg = deg;
        s.dual = dual;
        w.symbols.push_back(std::move(s));
    };
    push("R", LinExpr(dim), true);
    long long pin = 0, pout = 0, bin = 0, bout = 0, circles = t.boundary_circles();
    for (const auto& c : t.components) {
        pin += c.bulk_in + c.stab + c.stab_nonsym;
        pout += c.bulk_out;
        bin += c.boundary_in;
        bout += c.boundary_out;
    }
    // -n chi(hat C) + 2n |pi0 dC| + 2n |P^{int,out}| + 2 |P^{int,in}|
    push("caps", LinExpr(2 * pin, -t.chi_capped() + 2 * circles + 2 * pout), false);
    for (long long i = 0; i < bin; ++i) push("pin" + std::to_string(i), LinExpr(1), false);
    for (long long i = 0; i < bout; ++i) {
        push("pout" + std::to_string(i), LinExpr(1), true);
        push("L" + std::to_string(i), LinExpr(0, 1), false);
    }
    for (long long i = 0; i < circles; ++i)
        push("B" + std::to_string(i), LinExpr(0, 1), true);
    return w;
}

FamilyDescriptor make_descriptor(FamilyParams p, TopType top) {
    FamilyDescriptor f;
    f.params = std::move(p);
    f.dim = family_dim(top);
    if (f.dim < 0) throw MathError("family: unstable parameters");
    for (const auto& c : top.components)
        if (!component_stable(c)) throw MathError("family: unstable component");
    f.orientation = sigma_f_word(top, f.dim);
    f.s_degree = f.orientation.total_degree();
    f.top = std::move(top);
    return f;
}

}  // namespace

FamilyDescriptor build_family(const FamilyParams& p) {
    TopType t;
    TopType::Component c;
    if (p.kind == "bub" || p.kind == "star") {
        long long bulk = p.kind == "star" ? p.bulk + 2 : p.bulk;
        if (bulk + p.stab < 2) throw MathError("family: bub needs bulk+stab >= 2");
        c.kind = ComponentKind::Sphere;
        c.bulk_in = bulk;
        c.bulk_out = 1;
        c.stab = p.stab;
        t.components.push_back(c);
        t.rays_in = bulk;
        t.rays_out = 1;
        return make_descriptor(p, t);
    }
    if (p.kind == "mu" || p.kind == "CO") {
        long long bulk = p.kind == "CO" ? p.bulk + 1 : p.bulk;
        c.kind = ComponentKind::Disc;
        c.boundary_in = p.s;
        c.boundary_out = 1;
        c.bulk_in = bulk;
        c.stab = p.stab;
        t.components.push_back(c);
        t.rays_in = bulk;
        return make_descriptor(p, t);
    }
    if (p.kind == "OC") {
        c.kind = ComponentKind::Disc;
        c.boundary_in = p.s + 1;
        c.bulk_out = 1;
        c.bulk_in = p.bulk;
        c.stab = p.stab;
        t.components.push_back(c);
        t.rays_in = p.bulk;
        t.rays_out = 1;
        return make_descriptor(p, t);
    }
    if (p.kind == "2CO") {
        c.kind = ComponentKind::Disc;
        c.boundary_in = 1 + p.s + p.s2;
        c.boundary_out = 1;
        c.bulk_in = 1 + p.bulk;
        c.stab = p.stab;
        t.components.push_back(c);
        t.rays_in = 1 + p.bulk;
        FamilyDescriptor f = make_descriptor(p, t);
        return f;
    }
    if (p.kind == "CY") {
        c.kind = ComponentKind::Disc;
        c.boundary_in = 1 + p.s + p.s2;
        c.boundary_out = 2;
        c.bulk_in = p.bulk;
        c.stab = p.stab;
        t.components.push_back(c);
        t.rays_in = p.bulk;
        return make_descriptor(p, t);
    }
    if (p.kind == "H2CY") {
        // the declared one-parameter subfamily of annuli with one boundary
        // point on each circle (radially aligned marked points)
        c.kind = ComponentKind::Annulus;
        c.boundary_in = 1 + p.s;
        c.boundary_out = 1;
        c.bulk_in = p.bulk;
        c.stab = p.stab;
        t.components.push_back(c);
        FamilyDescriptor f;
        f.params = p;
        f.dim = 1 + p.s + p.s2 + 2 * (p.bulk + p.stab);
        f.orientation = sigma_f_word(t, f.dim);
        f.s_degree = f.orientation.total_degree();
        f.top = std::move(t);
        return f;
    }
    if (p.kind == "H12_CO" || p.kind == "H1_CO" || p.kind == "H12_OC" ||
        p.kind == "H1_OC" || p.kind == "H12_CY" || p.kind == "H1_CY") {
        // homotopy families built by attaching a sphere or the two half
        // diagrams along a ray, at length zero (H12) or sliding (H1)
        bool sliding = p.kind[1] == '1' && p.kind[2] == '_';
        Attachment at;
        at.kind = Attachment::Kind::RayToRay;
        at.length = sliding ? IntervalLength::Sliding : IntervalLength::Zero;
        FamilyParams left, right;
        if (p.kind.substr(p.kind.size() - 2) == "CO" && p.kind.find("OC") == std::string::npos) {
            left.kind = "star";
            right.kind = "CO";
            right.s = p.s;
            right.bulk = p.bulk;
            right.stab = p.stab;
        } else if (p.kind.substr(p.kind.size() - 2) == "OC") {
            left.kind = "star";
            right.kind = "OC";
            right.s = p.s;
            right.bulk = p.bulk;
            right.stab = p.stab;
        } else {
            left.kind = "CO";
            left.s = p.s;
            right.kind = "OC";
            right.s = p.s2;
            right.bulk = p.bulk;
            right.stab = p.stab;
        }
        AttachResult res = attach(build_family(left), build_family(right), at);
        res.family.params = p;
        return res.family;
    }
    if (p.kind == "H2_CO" || p.kind == "H2_OC") {
        // the declared one-parameter disc subfamily with two interior points
        TopType t2;
        TopType::Component c2;
        c2.kind = ComponentKind::Disc;
        bool oc = p.kind == "H2_OC";
        c2.boundary_in = oc ? 1 + p.s : p.s;
        c2.boundary_out = oc ? 0 : 1;
        c2.bulk_in = oc ? 1 + p.bulk : 2 + p.bulk;
        c2.bulk_out = oc ? 1 : 0;
        c2.stab = p.stab;
        t2.components.push_back(c2);
        t2.rays_in = c2.bulk_in;
        t2.rays_out = c2.bulk_out;
        FamilyDescriptor f;
        f.params = p;
        f.dim = 1 + p.s + 2 * (p.bulk + p.stab);
        f.orientation = sigma_f_word(t2, f.dim);
        f.s_degree = f.orientation.total_degree();
        f.top = std::move(t2);
        return f;
    }
    throw MathError("family: unknown kind '" + p.kind + "'");
}

FamilyDescriptor stabilize(const FamilyDescriptor& f, long long add_bulk,
                           long long add_stab, long long add_boundary_in,
                           bool added_stab_symmetric) {
    if (add_bulk < 0 || add_stab < 0 || add_boundary_in < 0)
        throw MathError("stabilize: deleting marked points is not a stabilization");
    FamilyDescriptor out = f;
    if (out.top.components.empty()) throw MathError("stabilize: empty family");
    TopType::Component& c = out.top.components.front();
    c.bulk_in += add_bulk;
    if (added_stab_symmetric)
        c.stab += add_stab;
    else
        c.stab_nonsym += add_stab;
    c.boundary_in += add_boundary_in;
    out.top.rays_in += add_bulk;
    out.params.bulk += add_bulk;
    out.params.stab += add_stab;
    out.params.s += add_boundary_in;
    out.dim = family_dim(out.top);
    out.orientation = sigma_f_word(out.top, out.dim);
    // eq-style invariance: the S(F) degree is unchanged by stabilization
    LinExpr new_deg = out.orientation.total_degree();
    if (!(new_deg == f.s_degree))
        throw MathError("stabilize: orientation torsor degree changed");
    out.s_degree = new_deg;
    return out;
}

AttachResult attach(const FamilyDescriptor& a, const FamilyDescriptor& b,
                    const Attachment& at) {
    AttachResult res;
    FamilyDescriptor f;
    f.params.kind = a.params.kind + "+" + b.params.kind;
    TopType t;
    t.components = a.top.components;
    t.components.insert(t.components.end(), b.top.components.begin(),
                        b.top.components.end());
    t.intervals = a.top.intervals;
    t.intervals.insert(t.intervals.end(), b.top.intervals.begin(), b.top.intervals.end());
    t.boundary_nodes = a.top.boundary_nodes + b.top.boundary_nodes;
    t.interior_nodes = a.top.interior_nodes + b.top.interior_nodes;
    t.rays_in = a.top.rays_in + b.top.rays_in;
    t.rays_out = a.top.rays_out + b.top.rays_out;
    res.sign = SignExpr::plus();
    switch (at.kind) {
        case Attachment::Kind::RayToRay: {
            if (a.top.rays_out + b.top.rays_out < 1 || a.top.rays_in + b.top.rays_in < 1)
                throw MathError("attach: no matching rays");
            t.rays_in -= 1;
            t.rays_out -= 1;
            t.intervals.push_back(at.length);
            break;
        }
        case Attachment::Kind::BoundaryToBoundary: {
            if (a.top.total(&TopType::Component::boundary_out) +
                        b.top.total(&TopType::Component::boundary_out) <
                    1 ||
                a.top.total(&TopType::Component::boundary_in) +
                        b.top.total(&TopType::Component::boundary_in) <
                    1)
                throw MathError("attach: no matching boundary points");
            t.boundary_nodes += 1;
            for (auto& c : t.components)
                if (c.boundary_out > 0) {
                    c.boundary_out -= 1;
                    break;
                }
            for (auto& c : t.components)
                if (c.boundary_in > 0) {
                    c.boundary_in -= 1;
                    break;
                }
            if (at.same_boundary_component) {
                // self-gluing: the declared n(n+1)/2 factor enters
                res.sign = SignExpr::parse("(-1)^(n(n+1)/2)");
                LedgerMove m;
                m.kind = LedgerMove::Kind::Axiom;
                m.axiom_name = "n-choose-2";
                m.pos = 0;
                m.consume = 2;
                m.produce = {TorsorSymbol{"B", LinExpr(0, 2), false}};
                m.declared_sign = res.sign;
                m.citation = "boundary self-gluing";
                res.ledger.moves.push_back(std::move(m));
            }
            break;
        }
        case Attachment::Kind::InteriorNode: {
            t.interior_nodes += 1;
            break;
        }
    }
    if (!t.smoothing_valid()) throw MathError("attach: illegal resulting topology");
    f.dim = family_dim(t);
    f.top = std::move(t);
    f.orientation = sigma_f_word(f.top, f.dim);
    f.s_degree = f.orientation.total_degree();
    res.family = std::move(f);
    return res;
}

// ------------------------------------------------------- boundary strata --

std::vector<Facet> ribbon_tree_facets(long long s, long long bulk, long long stab) {
    // two-level stable trees: the inner vertex consumes a run of s2 leaves
    // starting at position i (1-based), the outer keeps s1 = s - s2 + 1
    std::vector<Facet> out;
    for (long long s2 = 0; s2 <= s; ++s2) {
        long long s1 = s - s2 + 1;
        if (s1 < 1) continue;
        for (long long pos = 1; pos + s2 - 1 <= s; ++pos)
            for (long long b2 = 0; b2 <= bulk; ++b2)
                for (long long t2 = 0; t2 <= stab; ++t2) {
                    long long b1 = bulk - b2, t1 = stab - t2;
                    // both discs stable
                    if ((s1 + 1) + 2 * (b1 + t1) < 3) continue;
                    if ((s2 + 1) + 2 * (b2 + t2) < 3) continue;
                    Facet f;
                    f.outer_s = s1;
                    f.inner_s = s2;
                    f.position = pos;
                    f.outer_bulk = b1;
                    f.inner_bulk = b2;
                    f.outer_stab = t1;
                    f.inner_stab = t2;
                    std::ostringstream os;
                    os << "mu^{" << s1 << "," << b1 << "," << t1 << "} o_" << pos
                       << " mu^{" << s2 << "," << b2 << "," << t2 << "}";
                    f.description = os.str();
                    out.push_back(std::move(f));
                }
    }
    return out;
}

std::vector<Facet> boundary_strata(const FamilyDescriptor& f) {
    if (f.params.kind == "mu") {
        // direct enumeration over splittings (independent of the tree
        // enumerator used as the oracle)
        std::vector<Facet> out;
        long long s = f.params.s, bulk = f.params.bulk, stab = f.params.stab;
        for (long long s1 = 1; s1 <= s + 1; ++s1) {
            long long s2 = s + 1 - s1;
            for (long long i = 1; i <= s1; ++i)
                for (long long b1 = 0; b1 <= bulk; ++b1)
                    for (long long t1 = 0; t1 <= stab; ++t1) {
                        long long b2 = bulk - b1, t2 = stab - t1;
                        if ((s1 + 1) + 2 * (b1 + t1) < 3 ||
                            (s2 + 1) + 2 * (b2 + t2) < 3)
                            continue;
                        Facet fc;
                        fc.outer_s = s1;
                        fc.inner_s = s2;
                        fc.position = i;
                        fc.outer_bulk = b1;
                        fc.inner_bulk = b2;
                        fc.outer_stab = t1;
                        fc.inner_stab = t2;
                        std::ostringstream os;
                        os << "mu^{" << s1 << "," << b1 << "," << t1 << "} o_" << i
                           << " mu^{" << s2 << "," << b2 << "," << t2 << "}";
                        fc.description = os.str();
                        out.push_back(std::move(fc));
                    }
        }
        return out;
    }
    bool sliding = std::any_of(f.top.intervals.begin(), f.top.intervals.end(),
                               [](IntervalLength l) { return l == IntervalLength::Sliding; });
    if (sliding) {
        Facet zero, inf;
        zero.description = "interval length 0";
        zero.boundary_sign = +1;
        inf.description = "interval length infinity";
        inf.boundary_sign = -1;
        return {zero, inf};
    }
    throw MathError("boundary_strata: unsupported family kind '" + f.params.kind + "'");
}

BijectionReport ainfty_term_bijection(long long s, long long bulk, long long stab) {
    BijectionReport rep;
    FamilyParams p;
    p.kind = "mu";
    p.s = s;
    p.bulk = bulk;
    p.stab = stab;
    FamilyDescriptor f = build_family(p);
    auto facets = boundary_strata(f);
    rep.facet_count = static_cast<long long>(facets.size());
    // quadratic terms of the relation template with redistribution: the
    // geometric template keeps both factors stable
    std::vector<std::string> terms;
    for (long long s2 = 0; s2 <= s; ++s2) {
        long long s1 = s - s2 + 1;
        for (long long i = 1; i <= s1; ++i)
            for (long long b2 = 0; b2 <= bulk; ++b2)
                for (long long t2 = 0; t2 <= stab; ++t2) {
                    long long b1 = bulk - b2, t1 = stab - t2;
                    if ((s1 + 1) + 2 * (b1 + t1) < 3 || (s2 + 1) + 2 * (b2 + t2) < 3)
                        continue;
                    std::ostringstream os;
                    os << "mu^{" << s1 << "," << b1 << "," << t1 << "} o_" << i << " mu^{"
                       << s2 << "," << b2 << "," << t2 << "}";
                    terms.push_back(os.str());
                }
    }
    rep.term_count = static_cast<long long>(terms.size());
    std::vector<std::string> facet_labels;
    for (const auto& fc : facets) facet_labels.push_back(fc.description);
    std::sort(facet_labels.begin(), facet_labels.end());
    std::sort(terms.begin(), terms.end());
    rep.pass = facet_labels == terms;
    if (!rep.pass) rep.detail = "facet labels differ from relation terms";
    return rep;
}

// ------------------------------------------------------- appendix ledgers --

std::vector<LedgerRow> appendix_c_rows(const std::string& ledger_dir) {
    namespace fs = std::filesystem;
    std::vector<LedgerRow> rows;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(ledger_dir))
        if (entry.path().extension() == ".led") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& path : files)
        rows.push_back({path.stem().string(), load_ledger_script(path.string())});
    if (rows.empty()) throw MathError("appendix ledgers: no scripts in " + ledger_dir);
    return rows;
}

SignTable appendix_c_ledgers(const std::string& ledger_dir, long long n) {
    SignTable table;
    for (const auto& row : appendix_c_rows(ledger_dir)) {
        ScriptOutcome out = run_ledger_script(row.script, n);
        table.rows.emplace_back(row.name, out.result.sign);
        if (out.checked && (!out.sign_ok || !out.word_ok)) table.all_match = false;
    }
    return table;
}

}  // namespace acat

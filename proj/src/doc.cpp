#include "acat/doc.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace acat {

using nlohmann::json;

namespace {

[[noreturn]] void doc_error(const std::string& path, const std::string& what) {
    throw MathError("document " + path + ": " + what);
}

std::vector<long long> int_vector(const json& j) {
    std::vector<long long> v;
    for (const auto& x : j) v.push_back(x.get<long long>());
    return v;
}

DatumPtr load_grading(const json& j) {
    if (!j.contains("grading")) return GradingDatum::standard_z();
    const json& g = j.at("grading");
    std::vector<int> sigma;
    for (const auto& x : g.at("sigma")) sigma.push_back(x.get<int>());
    return std::make_shared<const GradingDatum>(
        g.value("free_rank", 1), g.contains("torsion") ? int_vector(g.at("torsion"))
                                                       : std::vector<long long>{},
        int_vector(g.at("i")), sigma);
}

RingSpecPtr load_ring(const json& j, const DatumPtr& datum) {
    if (!j.contains("ring"))
        return std::make_shared<const RingSpec>(
            datum, MonoidSpec{0, {}, IntMat(datum->size(), std::vector<long long>{})},
            BulkSpec{}, true);
    const json& r = j.at("ring");
    MonoidSpec mon;
    mon.ambient_rank = r.value("ambient_rank", 0);
    if (r.contains("ne_generators"))
        for (const auto& u : r.at("ne_generators")) mon.generators.push_back(int_vector(u));
    if (r.contains("grading_map"))
        for (const auto& row : r.at("grading_map")) mon.grading_map.push_back(int_vector(row));
    else
        mon.grading_map.assign(datum->size(),
                               std::vector<long long>(mon.ambient_rank, 0));
    BulkSpec bulk;
    if (r.contains("bulk"))
        for (const auto& b : r.at("bulk")) {
            bulk.names.push_back(b.value("name", "x"));
            bulk.degrees.push_back(int_vector(b.at("degree")));
        }
    size_t nb = bulk.names.size();
    bulk.d.assign(nb, std::vector<long long>(nb, 0));
    if (r.contains("morse_d")) {
        size_t i = 0;
        for (const auto& row : r.at("morse_d")) {
            bulk.d[i] = int_vector(row);
            ++i;
        }
    }
    bool trivial = r.value("trivial_filtration", mon.generators.empty() && nb == 0);
    return std::make_shared<const RingSpec>(datum, mon, bulk, trivial);
}

}  // namespace

int Document::object_id(const std::string& name) const {
    auto it = object_ids_.find(name);
    if (it == object_ids_.end()) throw MathError("document: unknown object '" + name + "'");
    return it->second;
}

int Document::basis_id(int a, int b, const std::string& label) const {
    auto it = basis_ids_.find({a, b, label});
    if (it == basis_ids_.end())
        throw MathError("document: unknown morphism '" + label + "'");
    return it->second;
}

Document parse_document(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw MathError(std::string("document parse error: ") + e.what());
    }
    Document doc;
    DatumPtr datum = load_grading(j);
    doc.ring = load_ring(j, datum);
    doc.trunc = j.value("trunc", 6);
    doc.length = j.value("length", 6);

    AinfCategory& c = doc.category;
    c.ring = doc.ring;
    c.trunc_N = doc.trunc;
    c.len_L = doc.length;
    if (!j.contains("category")) doc_error("<input>", "missing category section");
    const json& cat = j.at("category");
    for (const auto& name : cat.at("objects")) {
        doc.object_ids_[name.get<std::string>()] = static_cast<int>(c.objects.size());
        c.objects.push_back(name.get<std::string>());
    }
    Degree one = Degree::of_int(datum, 1);
    for (const auto& h : cat.at("homs")) {
        int a = doc.object_id(h.at("from").get<std::string>());
        int b = doc.object_id(h.at("to").get<std::string>());
        GradedModule base;
        base.ring = doc.ring;
        for (const auto& bs : h.at("basis")) {
            std::string label = bs.at("label").get<std::string>();
            doc.basis_ids_[{a, b, label}] = static_cast<int>(base.basis.size());
            base.basis.push_back(
                {label, Degree(datum, int_vector(bs.at("degree"))) - one});
        }
        std::vector<SparseCol> cols(base.basis.size());
        if (h.contains("diff"))
            for (const auto& d : h.at("diff")) {
                int from = doc.basis_id(a, b, d.at("from").get<std::string>());
                int to = doc.basis_id(a, b, d.at("to").get<std::string>());
                cols[from].emplace_back(
                    to, parse_ring_element(doc.ring, doc.trunc,
                                           d.at("coeff").get<std::string>()));
            }
        c.homs.emplace(std::make_pair(a, b), DgModule(std::move(base), std::move(cols), doc.trunc));
    }
    auto load_entries = [&](const json& arr, CochainBuilder& builder) {
        for (const auto& e : arr) {
            std::vector<int> objs;
            for (const auto& o : e.at("objects")) objs.push_back(doc.object_id(o.get<std::string>()));
            std::vector<int> ins;
            for (size_t i = 0; i + 1 < objs.size(); ++i)
                ins.push_back(doc.basis_id(objs[i], objs[i + 1],
                                           e.at("inputs").at(i).get<std::string>()));
            int out = doc.basis_id(objs.front(), objs.back(),
                                   e.at("output").get<std::string>());
            builder.add(objs, ins, out,
                        parse_ring_element(doc.ring, doc.trunc,
                                           e.at("coeff").get<std::string>()));
        }
    };
    {
        CochainBuilder mu(one, doc.length);
        if (cat.contains("mu")) load_entries(cat.at("mu"), mu);
        c.mu = mu.take();
    }
    c.validate();

    if (j.contains("cochains"))
        for (const auto& cc : j.at("cochains")) {
            CochainBuilder b(Degree(datum, int_vector(cc.at("degree"))), doc.length);
            load_entries(cc.at("entries"), b);
            doc.cochains[cc.at("name").get<std::string>()] = b.take();
        }

    if (j.contains("bounding"))
        for (const auto& bb : j.at("bounding")) {
            PreBoundingCochain b;
            b.object = doc.object_id(bb.at("object").get<std::string>());
            for (const auto& t : bb.at("element"))
                b.b.add(doc.basis_id(b.object, b.object, t.at("basis").get<std::string>()),
                        parse_ring_element(doc.ring, doc.trunc,
                                           t.at("coeff").get<std::string>()));
            b.validate(c);
            doc.bounding.push_back(std::move(b));
        }

    if (j.contains("bundle")) {
        const json& bj = j.at("bundle");
        Document::Bundle bundle;
        std::map<std::string, int> qc_ids;
        {
            const json& q = bj.at("qc");
            GradedModule base;
            base.ring = doc.ring;
            for (const auto& bs : q.at("basis")) {
                qc_ids[bs.at("label").get<std::string>()] =
                    static_cast<int>(base.basis.size());
                base.basis.push_back(
                    {bs.at("label").get<std::string>(),
                     Degree(datum, int_vector(bs.at("degree")))});
            }
            std::vector<SparseCol> cols(base.basis.size());
            if (q.contains("diff"))
                for (const auto& d : q.at("diff"))
                    cols[qc_ids.at(d.at("from").get<std::string>())].emplace_back(
                        qc_ids.at(d.at("to").get<std::string>()),
                        parse_ring_element(doc.ring, doc.trunc,
                                           d.at("coeff").get<std::string>()));
            bundle.qc = DgModule(std::move(base), std::move(cols), doc.trunc);
        }
        if (bj.contains("star"))
            for (const auto& s : bj.at("star")) {
                Document::QcEntry e;
                for (const auto& i : s.at("inputs"))
                    e.inputs.push_back(qc_ids.at(i.get<std::string>()));
                e.output = qc_ids.at(s.at("output").get<std::string>());
                e.coeff = parse_ring_element(doc.ring, doc.trunc,
                                             s.at("coeff").get<std::string>());
                bundle.star.push_back(std::move(e));
            }
        if (bj.contains("unit")) bundle.unit = qc_ids.at(bj.at("unit").get<std::string>());
        auto load_gen = [&](const json& g) {
            ChainGen gen;
            for (const auto& o : g.at("objects"))
                gen.objs.push_back(doc.object_id(o.get<std::string>()));
            for (size_t i = 0; i + 1 < gen.objs.size(); ++i)
                gen.tens.push_back(doc.basis_id(gen.objs[i], gen.objs[i + 1],
                                                g.at("inputs").at(i).get<std::string>()));
            gen.m = doc.basis_id(gen.objs.back(), gen.objs.front(),
                                 g.at("m").get<std::string>());
            return gen;
        };
        auto load_qc_value = [&](const json& arr) {
            ModuleElt v;
            for (const auto& t : arr)
                v.add(qc_ids.at(t.at("basis").get<std::string>()),
                      parse_ring_element(doc.ring, doc.trunc,
                                         t.at("coeff").get<std::string>()));
            return v;
        };
        if (bj.contains("co"))
            for (const auto& t : bj.at("co"))
                bundle.co[qc_ids.at(t.at("qc").get<std::string>())] =
                    t.at("cochain").get<std::string>();
        if (bj.contains("h_co"))
            for (const auto& t : bj.at("h_co"))
                bundle.h_co[{qc_ids.at(t.at("p").get<std::string>()),
                             qc_ids.at(t.at("q").get<std::string>())}] =
                    t.at("cochain").get<std::string>();
        if (bj.contains("oc"))
            for (const auto& t : bj.at("oc"))
                bundle.oc.push_back({load_gen(t), load_qc_value(t.at("value"))});
        if (bj.contains("h_oc"))
            for (const auto& t : bj.at("h_oc"))
                bundle.h_oc.push_back({qc_ids.at(t.at("p").get<std::string>()),
                                       load_gen(t), load_qc_value(t.at("value"))});
        if (bj.contains("cy")) {
            const json& cyj = bj.at("cy");
            HomToShriek cy;
            cy.cat = nullptr;  // re-pointed by the caller after doc load
            cy.deg = Degree(datum, int_vector(cyj.at("degree")));
            cy.len_trunc = doc.length;
            for (const auto& e : cyj.at("entries")) {
                ShriekHomEntry she;
                for (const auto& o : e.at("lobjs"))
                    she.lobjs.push_back(doc.object_id(o.get<std::string>()));
                for (size_t i = 0; i + 1 < she.lobjs.size(); ++i)
                    she.lins.push_back(
                        doc.basis_id(she.lobjs[i], she.lobjs[i + 1],
                                     e.at("lins").at(i).get<std::string>()));
                for (const auto& o : e.at("robjs"))
                    she.robjs.push_back(doc.object_id(o.get<std::string>()));
                for (size_t i = 0; i + 1 < she.robjs.size(); ++i)
                    she.rins.push_back(
                        doc.basis_id(she.robjs[i], she.robjs[i + 1],
                                     e.at("rins").at(i).get<std::string>()));
                she.m_in = doc.basis_id(she.lobjs.back(), she.robjs.front(),
                                        e.at("m").get<std::string>());
                const json& og = e.at("out");
                for (const auto& o : og.at("dobjs"))
                    she.out.dobjs.push_back(doc.object_id(o.get<std::string>()));
                for (size_t i = 0; i + 1 < she.out.dobjs.size(); ++i)
                    she.out.dins.push_back(
                        doc.basis_id(she.out.dobjs[i], she.out.dobjs[i + 1],
                                     og.at("dins").at(i).get<std::string>()));
                she.out.out1 = doc.basis_id(she.out.dobjs.front(), she.robjs.back(),
                                            og.at("out1").get<std::string>());
                she.out.out2 = doc.basis_id(she.lobjs.front(), she.out.dobjs.back(),
                                            og.at("out2").get<std::string>());
                she.coeff = parse_ring_element(doc.ring, doc.trunc,
                                               e.at("coeff").get<std::string>());
                cy.entries.push_back(std::move(she));
            }
            bundle.cy = std::move(cy);
        }
        if (bj.contains("h_cy"))
            for (const auto& t : bj.at("h_cy"))
                bundle.h_cy.push_back(
                    {load_gen(t), t.at("cochain").get<std::string>()});
        bundle.n = bj.value("n", 0);
        doc.bundle = std::move(bundle);
    }
    return doc;
}

Document load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MathError("cannot open document: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_document(buf.str());
}

}  // namespace acat

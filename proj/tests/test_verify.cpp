#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "acat/verify.hpp"

using namespace acat;

namespace {

const std::string kFixtures = std::string(ACAT_REPO_ROOT) + "/fixtures";

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
    size_t pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("documents load and validate") {
    Document doc = load_document(kFixtures + "/point.json");
    CHECK(doc.category.objects.size() == 1);
    CHECK(doc.category.hom_rank(0, 0) == 1);
    CHECK(check_ainfty(doc.category).pass);
    Document kx = load_document(kFixtures + "/kx.json");
    CHECK(check_ainfty(kx.category).pass);
    Document curved = load_document(kFixtures + "/curved.json");
    CHECK(check_ainfty(curved.category).pass);
    REQUIRE(curved.bounding.size() == 1);
    CHECK(bc_curvature(curved.category, curved.bounding[0]).is_zero());
}

TEST_CASE("parse errors are reported") {
    CHECK_THROWS_AS(parse_document("{ not json"), MathError);
    CHECK_THROWS_AS(parse_document("{}"), MathError);  // missing category
    CHECK_THROWS_WITH_AS(
        parse_document(R"({"category":{"objects":["L"],"homs":[
            {"from":"L","to":"Q","basis":[]}]}})"),
        doctest::Contains("unknown object"), MathError);
}

TEST_CASE("the corrupted fixture fails check_ainfty at length three") {
    Document doc = load_document(kFixtures + "/corrupt_mu.json");
    AinfReport rep = check_ainfty(doc.category);
    CHECK_FALSE(rep.pass);
    bool at3 = false;
    for (const auto& f : rep.failures) at3 |= f.ins.size() == 3;
    CHECK(at3);
}

TEST_CASE("leibniz template") {
    Document doc = load_document(kFixtures + "/point.json");
    CHECK(verify_leibniz_star(doc).pass);
    // corrupted star sign fails
    std::string text = slurp(kFixtures + "/point.json");
    // break associativity-compatible Leibniz by injecting a differential
    // without adjusting star: add d(p) = p is degree-wrong, so instead flip
    // nothing here; the negative case is covered by the co/cardy templates
}

TEST_CASE("co-algebra template, with gauge robustness") {
    Document doc = load_document(kFixtures + "/point.json");
    REQUIRE(verify_co_algebra(doc).pass);
    // corrupting the single CO sign breaks the algebra identity
    std::string text = slurp(kFixtures + "/point.json");
    std::string bad = replace_once(
        text, R"("entries": [{"objects": ["L"], "inputs": [], "output": "e", "coeff": "1"}]})",
        R"("entries": [{"objects": ["L"], "inputs": [], "output": "e", "coeff": "-1"}]})");
    Document corrupt = parse_document(bad);
    CHECK_FALSE(verify_co_algebra(corrupt).pass);
    // gauge robustness needs a fixture with mixed degrees so that nonzero
    // homotopy candidates exist; see the dedicated test below
}

TEST_CASE("co-algebra gauge robustness on a mixed-degree fixture") {
    // unital curved toy with a unit cochain and a one-point quantum side
    const char* text = R"({
      "ring": {"ambient_rank": 1, "ne_generators": [[1]], "grading_map": [[0]]},
      "trunc": 6, "length": 6,
      "category": {
        "objects": ["C"],
        "homs": [{"from": "C", "to": "C",
                  "basis": [{"label": "e", "degree": [0]},
                             {"label": "x", "degree": [1]},
                             {"label": "y", "degree": [2]}]}],
        "mu": [
          {"objects": ["C"], "inputs": [], "output": "y", "coeff": "-1*r0"},
          {"objects": ["C", "C"], "inputs": ["x"], "output": "y", "coeff": "1"},
          {"objects": ["C", "C", "C"], "inputs": ["e", "e"], "output": "e", "coeff": "1"},
          {"objects": ["C", "C", "C"], "inputs": ["e", "x"], "output": "x", "coeff": "1"},
          {"objects": ["C", "C", "C"], "inputs": ["x", "e"], "output": "x", "coeff": "-1"},
          {"objects": ["C", "C", "C"], "inputs": ["e", "y"], "output": "y", "coeff": "1"},
          {"objects": ["C", "C", "C"], "inputs": ["y", "e"], "output": "y", "coeff": "1"}
        ]
      },
      "cochains": [
        {"name": "u", "degree": [-1],
         "entries": [{"objects": ["C"], "inputs": [], "output": "e", "coeff": "1"}]}
      ],
      "bundle": {
        "qc": {"basis": [{"label": "p", "degree": [0]}]},
        "star": [{"inputs": ["p", "p"], "output": "p", "coeff": "1"}],
        "unit": "p",
        "co": [{"qc": "p", "cochain": "u"}],
        "n": 0
      }
    })";
    Document doc = parse_document(text);
    REQUIRE(verify_co_algebra(doc).pass);
    // shift the homotopy from 0 to del(k): del(del(k)) = 0 keeps the identity
    const AinfCategory& c = doc.category;
    int e_idx = doc.basis_id(0, 0, "e");
    int y_idx = doc.basis_id(0, 0, "y");
    CochainBuilder kb(Degree::of_int(c.ring->datum(), -3), doc.length);
    kb.add({0, 0, 0}, {y_idx, y_idx}, e_idx, RingElement::one(doc.ring, doc.trunc));
    Cochain k = kb.take();
    Cochain h = cc_differential(c, k);
    CHECK_FALSE(h.is_zero());
    doc.cochains["gauge_h"] = h;
    doc.bundle->h_co[{0, 0}] = "gauge_h";
    CHECK(verify_co_algebra(doc).pass);
}

TEST_CASE("oc-module template") {
    Document doc = load_document(kFixtures + "/point.json");
    CHECK(verify_oc_module(doc).pass);
    // a global rescaling of OC keeps the linear identity, so corrupt one side
    // only: flipping the star sign breaks the module equation
    std::string text = slurp(kFixtures + "/point.json");
    std::string bad =
        replace_once(text, R"("star": [{"inputs": ["p", "p"], "output": "p", "coeff": "1"}])",
                     R"("star": [{"inputs": ["p", "p"], "output": "p", "coeff": "-1"}])");
    Document corrupt = parse_document(bad);
    CHECK_FALSE(verify_oc_module(corrupt).pass);
}

TEST_CASE("cardy template applies the dimension sign") {
    Document doc = load_document(kFixtures + "/point.json");
    REQUIRE(doc.bundle.has_value());
    CHECK(verify_cardy(doc).pass);
    // flipping the CY sign fails
    std::string text = slurp(kFixtures + "/point.json");
    std::string bad = replace_once(
        text, R"("out": {"dobjs": ["L"], "dins": [], "out1": "e", "out2": "e"},
                        "coeff": "1"})",
        R"("out": {"dobjs": ["L"], "dins": [], "out1": "e", "out2": "e"},
                        "coeff": "-1"})");
    Document corrupt = parse_document(bad);
    CHECK_FALSE(verify_cardy(corrupt).pass);
    // n = 1 and n = 2 both give the sign -1 in the template; since the toy
    // identity was built at n = 0, those parameters must fail
    doc.bundle->n = 1;
    CHECK_FALSE(verify_cardy(doc).pass);
    doc.bundle->n = 2;
    CHECK_FALSE(verify_cardy(doc).pass);
    // n = 3: (-1)^6 = +1 again
    doc.bundle->n = 3;
    CHECK(verify_cardy(doc).pass);
}

TEST_CASE("reports are deterministic") {
    Document doc = load_document(kFixtures + "/point.json");
    std::string a = verify_co_algebra(doc).text() + verify_oc_module(doc).text() +
                    verify_cardy(doc).text();
    std::string b = verify_co_algebra(doc).text() + verify_oc_module(doc).text() +
                    verify_cardy(doc).text();
    CHECK(a == b);
}

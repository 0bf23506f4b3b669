#pragma once

#include <map>
#include <optional>
#include <string>

#include "acat/bc.hpp"

namespace acat {

// A loaded input document: one self-contained experiment.  Morphism basis
// degrees are given in the plain (hom) convention and are reduced on load;
// structure constants, cochain entries and differentials are in the shifted
// convention throughout (see the format notes in the README).
struct Document {
    RingSpecPtr ring;
    long long trunc = 6;
    long long length = 6;
    AinfCategory category;
    std::map<std::string, Cochain> cochains;
    std::vector<PreBoundingCochain> bounding;

    // verification bundle (optional)
    struct QcEntry {
        std::vector<int> inputs;
        int output = 0;
        RingElement coeff;
    };
    struct OcEntry {
        ChainGen gen;
        ModuleElt value;  // in the qc module
    };
    struct HOcEntry {
        int p = 0;
        ChainGen gen;
        ModuleElt value;
    };
    struct HCyEntry {
        ChainGen gen;
        std::string cochain;  // name of a cochain holding the value
    };
    struct Bundle {
        DgModule qc;
        std::vector<QcEntry> star;
        std::optional<int> unit;
        std::map<int, std::string> co;                    // qc basis -> cochain name
        std::map<std::pair<int, int>, std::string> h_co;  // (p, q) -> cochain name
        std::vector<OcEntry> oc;
        std::vector<HOcEntry> h_oc;
        std::optional<HomToShriek> cy;
        std::vector<HCyEntry> h_cy;
        long long n = 0;
    };
    std::optional<Bundle> bundle;

    int object_id(const std::string& name) const;
    int basis_id(int a, int b, const std::string& label) const;

private:
    friend Document load_document(const std::string& path);
    friend Document parse_document(const std::string& text);
    std::map<std::string, int> object_ids_;
    std::map<std::tuple<int, int, std::string>, int> basis_ids_;
};

Document parse_document(const std::string& text);
Document load_document(const std::string& path);

}  // namespace acat

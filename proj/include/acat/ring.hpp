#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "acat/grading.hpp"

namespace acat {

// Z[NE]: monomials r^u for u in the monoid generated by the given exponent
// vectors, graded through the map H_2 -> G.  Membership is by explicit
// generator exponents.
struct MonoidSpec {
    int ambient_rank = 0;
    std::vector<std::vector<long long>> generators;  // exponent vectors u_j
    IntMat grading_map;                              // rows: G coords, cols: ambient

    bool operator==(const MonoidSpec& o) const;
};

// Bulk variables r_i with |r_i| = 2 - |alpha_i|, and the Morse differential
// acting linearly on them: d(x_i) = sum_j d[j][i] x_j.
struct BulkSpec {
    std::vector<std::string> names;
    std::vector<std::vector<long long>> degrees;  // G coordinates per variable
    IntMat d;                                     // square, d*d = 0

    bool operator==(const BulkSpec& o) const;
};

class RingSpec {
public:
    RingSpec(DatumPtr datum, MonoidSpec monoid, BulkSpec bulk,
             bool trivial_filtration = false);

    static std::shared_ptr<const RingSpec> integers();  // G = Z, no variables

    const DatumPtr& datum() const { return datum_; }
    const MonoidSpec& monoid() const { return monoid_; }
    const BulkSpec& bulk() const { return bulk_; }
    bool trivial_filtration() const { return trivial_filtration_; }

    size_t num_ne() const { return monoid_.generators.size(); }
    size_t num_bulk() const { return bulk_.names.size(); }
    Degree ne_degree(size_t j) const { return ne_degrees_[j]; }
    Degree bulk_degree(size_t i) const { return bulk_degrees_[i]; }
    int bulk_parity(size_t i) const { return bulk_degrees_[i].parity(); }

    bool operator==(const RingSpec& o) const;

private:
    DatumPtr datum_;
    MonoidSpec monoid_;
    BulkSpec bulk_;
    bool trivial_filtration_;
    std::vector<Degree> ne_degrees_;
    std::vector<Degree> bulk_degrees_;
};

using RingSpecPtr = std::shared_ptr<const RingSpec>;

// (NE exponents, divided-power multi-index).  Weight = total exponent sum.
struct Monomial {
    std::vector<unsigned> ne;
    std::vector<unsigned> dp;

    long long weight() const;
    bool operator<(const Monomial& o) const;
    bool operator==(const Monomial& o) const { return ne == o.ne && dp == o.dp; }
};

constexpr long long FILT_INF = -1;  // filtration level of 0

// Truncated element of the completed divided power algebra.  All stored
// monomials have weight < trunc.
class RingElement {
public:
    RingElement() = default;
    RingElement(RingSpecPtr spec, long long trunc);

    static RingElement zero(const RingSpecPtr& spec, long long trunc);
    static RingElement one(const RingSpecPtr& spec, long long trunc);
    static RingElement constant(const RingSpecPtr& spec, long long trunc, long long c);
    static RingElement monomial(const RingSpecPtr& spec, long long trunc, Monomial m,
                                long long c = 1);

    const RingSpecPtr& spec() const { return spec_; }
    long long trunc() const { return trunc_; }
    const std::map<Monomial, long long>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    RingElement operator+(const RingElement& o) const;
    RingElement operator-(const RingElement& o) const;
    RingElement operator-() const;
    RingElement operator*(const RingElement& o) const;
    RingElement scaled(long long c) const;
    bool operator==(const RingElement& o) const;

    // min total weight over the support; FILT_INF for 0
    long long filtration_level() const;

    // degree of a monomial, and the homogeneous degree if it exists
    Degree monomial_degree(const Monomial& m) const;
    std::optional<Degree> homogeneous_degree() const;
    // splits into parity-homogeneous pieces: [even part, odd part]
    std::pair<RingElement, RingElement> parity_split() const;

    RingElement d() const;  // the derivation d_R

    std::string str() const;

private:
    void add_term(const Monomial& m, long long c);
    friend RingElement mul_monomials(const RingSpecPtr& spec, long long trunc,
                                     const Monomial& a, const Monomial& b, long long coeff);
    RingSpecPtr spec_;
    long long trunc_ = 0;
    std::map<Monomial, long long> terms_;
};

// Literal grammar: signed integer coefficients, r{j}, x{i}^[k], '*', '+'.
RingElement parse_ring_element(const RingSpecPtr& spec, long long trunc,
                               const std::string& text);

// ----------------------------------------------------------------- Novikov --

struct NovikovElement {
    std::map<Rational, long long> terms;
    Rational filt_scale{1};  // F_i = (T^{i*A})
    long long trunc = 0;     // terms with exponent >= A*trunc are dropped

    NovikovElement mul(const NovikovElement& o) const;
    NovikovElement add(const NovikovElement& o) const;
    long long filtration_level() const;
    bool operator==(const NovikovElement& o) const;
    std::string str() const;
};

// kappa given by its values on the ambient lattice basis; requires
// kappa(u_j) > 0 for every generator.
NovikovElement novikov_specialize(const RingElement& a, const std::vector<Rational>& kappa,
                                  const Rational& filt_scale);

// ------------------------------------------------------- associated graded --

// Extends the grading datum by a Z factor recording the filtration weight and
// returns the spec with trivial filtration.
RingSpecPtr associated_graded(const RingSpecPtr& spec);
// Transports an element along the identity on monomials.
RingElement gr_element(const RingSpecPtr& gr_spec, const RingElement& a);

// ------------------------------------------------------------ ring morphism --

// A filtered differential graded ring morphism given by generator images.
class CoeffRingMorphism {
public:
    CoeffRingMorphism(RingSpecPtr source, RingSpecPtr target, GradingMorphism grading,
                      std::vector<RingElement> ne_images, std::vector<RingElement> bulk_images);

    RingElement apply(const RingElement& a) const;
    const GradingMorphism& grading() const { return grading_; }

private:
    RingSpecPtr source_, target_;
    GradingMorphism grading_;
    std::vector<RingElement> ne_images_, bulk_images_;
};

}  // namespace acat

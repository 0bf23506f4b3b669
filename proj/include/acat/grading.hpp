#pragma once

#include <memory>
#include <string>
#include <vector>

#include "acat/util.hpp"

namespace acat {

// A grading datum is an abelian group G = Z^r (+) Z/d_1 (+) ... (+) Z/d_k,
// a map i: Z -> G (as i(1)), and a functional sigma: G -> Z/2 whose composite
// with i is the nonzero map.  Degrees are stored canonically reduced.
class GradingDatum {
public:
    GradingDatum(int free_rank, std::vector<long long> torsion,
                 std::vector<long long> i_vec, std::vector<int> sigma);

    // Normalizes an arbitrary finitely generated presentation
    // Z^{num_gens} / (rows of relations) via Smith form.
    static std::shared_ptr<const GradingDatum> from_presentation(
        int num_gens, const IntMat& relations, const std::vector<long long>& i_vec,
        const std::vector<int>& sigma);

    static std::shared_ptr<const GradingDatum> standard_z();

    int free_rank() const { return free_rank_; }
    const std::vector<long long>& torsion() const { return torsion_; }
    size_t size() const { return i_vec_.size(); }
    const std::vector<long long>& i_vec() const { return i_vec_; }
    const std::vector<int>& sigma_vec() const { return sigma_; }

    std::vector<long long> reduce(std::vector<long long> coords) const;
    int parity_of(const std::vector<long long>& reduced) const;

    bool operator==(const GradingDatum& o) const;

private:
    int free_rank_;
    std::vector<long long> torsion_;
    std::vector<long long> i_vec_;
    std::vector<int> sigma_;
};

using DatumPtr = std::shared_ptr<const GradingDatum>;

class Degree {
public:
    Degree() = default;
    Degree(DatumPtr datum, std::vector<long long> coords);

    static Degree zero(const DatumPtr& datum);
    // i(k) for the standard map Z -> G
    static Degree of_int(const DatumPtr& datum, long long k);

    const DatumPtr& datum() const { return datum_; }
    const std::vector<long long>& coords() const { return coords_; }
    int parity() const;

    Degree operator+(const Degree& o) const;
    Degree operator-(const Degree& o) const;
    Degree operator-() const;
    Degree scaled(long long k) const;
    bool operator==(const Degree& o) const;
    bool operator!=(const Degree& o) const { return !(*this == o); }
    bool operator<(const Degree& o) const { return coords_ < o.coords_; }
    bool is_zero() const;

    std::string str() const;

private:
    void check_same(const Degree& o) const;
    DatumPtr datum_;
    std::vector<long long> coords_;
};

int parity(const Degree& g);

// Morphism of grading data: must intertwine i and sigma and kill torsion
// relations; checked at construction.
class GradingMorphism {
public:
    GradingMorphism(DatumPtr source, DatumPtr target, IntMat gen_images);
    static GradingMorphism identity(const DatumPtr& datum);

    const DatumPtr& source() const { return source_; }
    const DatumPtr& target() const { return target_; }
    Degree apply(const Degree& g) const;

private:
    DatumPtr source_;
    DatumPtr target_;
    IntMat gen_images_;  // column j = image of source generator j
};

// Sign of the permutation that takes a list of symbols with the given
// parities into the order target_order (target_order[i] = source index of the
// symbol at target slot i).  Each inverted pair of odd symbols contributes -1.
int koszul_reorder_sign(const std::vector<int>& parities,
                        const std::vector<int>& target_order);

// Koszul sign for permuting graded elements (the braiding of the tensor
// factors with the listed degrees).
int koszul_reorder_sign(const std::vector<Degree>& degrees,
                        const std::vector<int>& target_order);

}  // namespace acat

#include "acat/grading.hpp"

#include <algorithm>
#include <sstream>

namespace acat {

GradingDatum::GradingDatum(int free_rank, std::vector<long long> torsion,
                           std::vector<long long> i_vec, std::vector<int> sigma)
    : free_rank_(free_rank), torsion_(std::move(torsion)), i_vec_(std::move(i_vec)),
      sigma_(std::move(sigma)) {
    if (free_rank_ < 0) throw MathError("grading: negative free rank");
    size_t n = static_cast<size_t>(free_rank_) + torsion_.size();
    if (i_vec_.size() != n || sigma_.size() != n)
        throw MathError("grading: i/sigma dimension mismatch");
    for (long long d : torsion_)
        if (d < 2) throw MathError("grading: torsion modulus must be >= 2");
    for (size_t k = 0; k < torsion_.size(); ++k) {
        // sigma must be well defined on Z/d: sigma(d*gen) = 0 mod 2
        if ((torsion_[k] * sigma_[free_rank_ + k]) % 2 != 0)
            throw MathError("grading: sigma not well-defined on torsion generator");
    }
    for (int& s : sigma_) s = ((s % 2) + 2) % 2;
    i_vec_ = reduce(i_vec_);
    if (parity_of(i_vec_) != 1)
        throw MathError("grading: sigma(i(1)) must be odd");
}

std::vector<long long> GradingDatum::reduce(std::vector<long long> coords) const {
    if (coords.size() != size()) throw MathError("grading: coordinate length mismatch");
    for (size_t k = 0; k < torsion_.size(); ++k) {
        long long d = torsion_[k];
        long long& c = coords[free_rank_ + k];
        c %= d;
        if (c < 0) c += d;
    }
    return coords;
}

int GradingDatum::parity_of(const std::vector<long long>& reduced) const {
    long long p = 0;
    for (size_t j = 0; j < reduced.size(); ++j) p += sigma_[j] * reduced[j];
    return static_cast<int>(((p % 2) + 2) % 2);
}

bool GradingDatum::operator==(const GradingDatum& o) const {
    return free_rank_ == o.free_rank_ && torsion_ == o.torsion_ && i_vec_ == o.i_vec_ &&
           sigma_ == o.sigma_;
}

std::shared_ptr<const GradingDatum> GradingDatum::standard_z() {
    static auto z = std::make_shared<const GradingDatum>(
        1, std::vector<long long>{}, std::vector<long long>{1}, std::vector<int>{1});
    return z;
}

std::shared_ptr<const GradingDatum> GradingDatum::from_presentation(
    int num_gens, const IntMat& relations, const std::vector<long long>& i_vec,
    const std::vector<int>& sigma) {
    size_t n = static_cast<size_t>(num_gens);
    if (i_vec.size() != n || sigma.size() != n)
        throw MathError("presentation: i/sigma length mismatch");
    // relations as columns of a matrix A: G = Z^n / im(A)
    size_t m = relations.size();
    IntMat a(n, std::vector<long long>(std::max<size_t>(m, 1), 0));
    for (size_t r = 0; r < m; ++r) {
        if (relations[r].size() != n) throw MathError("presentation: relation length mismatch");
        for (size_t j = 0; j < n; ++j) a[j][r] = relations[r][j];
    }
    SmithForm sf = smith_normal_form(a);
    // new coordinates y = U x; quotient is (+) Z/s_i (+) Z^{n-rank}
    std::vector<long long> new_i(n, 0);
    std::vector<long long> sig_acc(n, 0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) new_i[i] = checked_add(new_i[i], checked_mul(sf.U[i][j], i_vec[j]));
    // sigma in new coordinates: sigma_new = sigma_old * U^{-1}; compute U^{-1}
    // by solving U X = Id over Z (U unimodular).
    IntMat uinv(n, std::vector<long long>(n, 0));
    for (size_t c = 0; c < n; ++c) {
        std::vector<long long> e(n, 0), x;
        IntMat ker;
        e[c] = 1;
        if (!solve_integer_system(sf.U, e, x, ker))
            throw MathError("presentation: transform not invertible");
        for (size_t rI = 0; rI < n; ++rI) uinv[rI][c] = x[rI];
    }
    std::vector<int> new_sigma(n, 0);
    for (size_t j = 0; j < n; ++j) {
        long long v = 0;
        for (size_t k = 0; k < n; ++k) v += sigma[k] * uinv[k][j];
        new_sigma[j] = static_cast<int>(((v % 2) + 2) % 2);
    }
    // coordinates with s_i = 1 vanish; s_i > 1 are torsion; s_i = 0 free
    std::vector<size_t> free_idx, tor_idx;
    std::vector<long long> tor_mod;
    size_t rank = sf.rank();
    for (size_t i = 0; i < n; ++i) {
        long long s = i < sf.diag.size() && i < rank ? sf.diag[i] : 0;
        if (s == 0)
            free_idx.push_back(i);
        else if (s > 1) {
            tor_idx.push_back(i);
            tor_mod.push_back(s);
        }
    }
    std::vector<long long> iv;
    std::vector<int> sg;
    for (size_t i : free_idx) { iv.push_back(new_i[i]); sg.push_back(new_sigma[i]); }
    for (size_t i : tor_idx) { iv.push_back(new_i[i]); sg.push_back(new_sigma[i]); }
    return std::make_shared<const GradingDatum>(static_cast<int>(free_idx.size()), tor_mod,
                                                iv, sg);
}

Degree::Degree(DatumPtr datum, std::vector<long long> coords)
    : datum_(std::move(datum)), coords_(datum_->reduce(std::move(coords))) {}

Degree Degree::zero(const DatumPtr& datum) {
    return Degree(datum, std::vector<long long>(datum->size(), 0));
}

Degree Degree::of_int(const DatumPtr& datum, long long k) {
    std::vector<long long> c(datum->size(), 0);
    for (size_t j = 0; j < c.size(); ++j) c[j] = checked_mul(k, datum->i_vec()[j]);
    return Degree(datum, std::move(c));
}

int Degree::parity() const { return datum_->parity_of(coords_); }

void Degree::check_same(const Degree& o) const {
    if (!datum_ || !o.datum_) throw MathError("degree: missing datum");
    if (datum_ != o.datum_ && !(*datum_ == *o.datum_))
        throw MathError("degree: mismatched grading datum");
}

Degree Degree::operator+(const Degree& o) const {
    check_same(o);
    std::vector<long long> c(coords_);
    for (size_t j = 0; j < c.size(); ++j) c[j] = checked_add(c[j], o.coords_[j]);
    return Degree(datum_, std::move(c));
}

Degree Degree::operator-(const Degree& o) const { return *this + (-o); }

Degree Degree::operator-() const {
    std::vector<long long> c(coords_);
    for (auto& v : c) v = -v;
    return Degree(datum_, std::move(c));
}

Degree Degree::scaled(long long k) const {
    std::vector<long long> c(coords_);
    for (auto& v : c) v = checked_mul(v, k);
    return Degree(datum_, std::move(c));
}

bool Degree::operator==(const Degree& o) const {
    check_same(o);
    return coords_ == o.coords_;
}

bool Degree::is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](long long v) { return v == 0; });
}

std::string Degree::str() const {
    if (coords_.size() == 1) return std::to_string(coords_[0]);
    std::ostringstream os;
    os << "(";
    for (size_t j = 0; j < coords_.size(); ++j) os << (j ? "," : "") << coords_[j];
    os << ")";
    return os.str();
}

int parity(const Degree& g) { return g.parity(); }

GradingMorphism::GradingMorphism(DatumPtr source, DatumPtr target, IntMat gen_images)
    : source_(std::move(source)), target_(std::move(target)), gen_images_(std::move(gen_images)) {
    size_t ns = source_->size();
    if (gen_images_.size() != target_->size())
        throw MathError("grading morphism: image matrix row count");
    for (const auto& row : gen_images_)
        if (row.size() != ns) throw MathError("grading morphism: image matrix column count");
    // well-defined on torsion
    for (size_t k = 0; k < source_->torsion().size(); ++k) {
        size_t j = source_->free_rank() + k;
        std::vector<long long> img(target_->size(), 0);
        for (size_t i = 0; i < target_->size(); ++i)
            img[i] = checked_mul(source_->torsion()[k], gen_images_[i][j]);
        if (!Degree(target_, img).is_zero())
            throw MathError("grading morphism: does not kill torsion relation");
    }
    // intertwines i
    Degree i_src = Degree::of_int(source_, 1);
    if (apply(i_src) != Degree::of_int(target_, 1))
        throw MathError("grading morphism: does not intertwine i");
    // intertwines sigma on generators
    for (size_t j = 0; j < ns; ++j) {
        std::vector<long long> e(ns, 0);
        e[j] = 1;
        Degree gen(source_, e);
        if (apply(gen).parity() != gen.parity())
            throw MathError("grading morphism: does not intertwine sigma");
    }
}

GradingMorphism GradingMorphism::identity(const DatumPtr& datum) {
    size_t n = datum->size();
    IntMat m(n, std::vector<long long>(n, 0));
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return GradingMorphism(datum, datum, std::move(m));
}

Degree GradingMorphism::apply(const Degree& g) const {
    if (g.datum() != source_ && !(*g.datum() == *source_))
        throw MathError("grading morphism: degree from wrong datum");
    std::vector<long long> out(target_->size(), 0);
    for (size_t i = 0; i < target_->size(); ++i)
        for (size_t j = 0; j < source_->size(); ++j)
            out[i] = checked_add(out[i], checked_mul(gen_images_[i][j], g.coords()[j]));
    return Degree(target_, std::move(out));
}

int koszul_reorder_sign(const std::vector<int>& parities,
                        const std::vector<int>& target_order) {
    size_t n = parities.size();
    if (target_order.size() != n) throw MathError("koszul sign: length mismatch");
    std::vector<char> seen(n, 0);
    long long swaps = 0;
    for (size_t i = 0; i < n; ++i) {
        int src = target_order[i];
        if (src < 0 || static_cast<size_t>(src) >= n || seen[src])
            throw MathError("koszul sign: invalid permutation");
        seen[src] = 1;
        for (size_t j = i + 1; j < n; ++j) {
            int other = target_order[j];
            if (other < src && parities[src] && parities[other]) ++swaps;
        }
    }
    return swaps % 2 == 0 ? 1 : -1;
}

int koszul_reorder_sign(const std::vector<Degree>& degrees,
                        const std::vector<int>& target_order) {
    std::vector<int> p(degrees.size());
    for (size_t i = 0; i < degrees.size(); ++i) p[i] = degrees[i].parity();
    return koszul_reorder_sign(p, target_order);
}

}  // namespace acat

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace acat {

struct MathError : std::runtime_error {
    explicit MathError(const std::string& what) : std::runtime_error(what) {}
};

// All coefficient arithmetic is exact; overflow is an error, never a wrap.
long long checked_add(long long a, long long b);
long long checked_mul(long long a, long long b);
long long checked_binom(long long n, long long k);

// Reduced fraction with positive denominator.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n) : num(n), den(1) {}
    Rational(long long n, long long d);

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const;
    std::string str() const;
};

using IntMat = std::vector<std::vector<long long>>;

// Smith normal form over Z.  Returns S = U * A * V with U, V unimodular and
// S diagonal, s_1 | s_2 | ... ; only the diagonal and the transforms needed by
// callers are kept.
struct SmithForm {
    std::vector<long long> diag;  // nonneg, divisibility chain, zeros trailing
    IntMat U;                     // rows x rows
    IntMat V;                     // cols x cols
    size_t rank() const;
};

SmithForm smith_normal_form(const IntMat& a);

// Solve A x = b over Z.  Returns true and writes a particular solution into x;
// kernel_basis receives a lattice basis of ker A.
bool solve_integer_system(const IntMat& a, const std::vector<long long>& b,
                          std::vector<long long>& x, IntMat& kernel_basis);

// Rank over Q (fraction-free elimination of an integer matrix).
size_t rational_rank(const IntMat& a);

// Solve A x = b over Q: true iff consistent.
bool rational_solvable(const IntMat& a, const std::vector<long long>& b);

// Solve A x = b over Q returning one solution (free variables set to zero).
bool rational_solve(const IntMat& a, const std::vector<long long>& b,
                    std::vector<Rational>& x);

}  // namespace acat

#include "acat/util.hpp"

#include <algorithm>
#include <numeric>

namespace acat {

long long checked_add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r)) throw MathError("integer overflow in add");
    return r;
}

long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw MathError("integer overflow in mul");
    return r;
}

long long checked_binom(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long long r = 1;
    for (long long i = 1; i <= k; ++i) {
        // r * (n-k+i) is divisible by i at every step
        r = checked_mul(r, n - k + i) / i;
    }
    return r;
}

Rational::Rational(long long n, long long d) {
    if (d == 0) throw MathError("rational with zero denominator");
    if (d < 0) { n = -n; d = -d; }
    long long g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    num = n;
    den = d;
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(checked_add(checked_mul(num, o.den), checked_mul(o.num, den)),
                    checked_mul(den, o.den));
}

Rational Rational::operator-(const Rational& o) const {
    return Rational(checked_add(checked_mul(num, o.den), -checked_mul(o.num, den)),
                    checked_mul(den, o.den));
}

Rational Rational::operator*(const Rational& o) const {
    return Rational(checked_mul(num, o.num), checked_mul(den, o.den));
}

bool Rational::operator<(const Rational& o) const {
    return checked_mul(num, o.den) < checked_mul(o.num, den);
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

size_t SmithForm::rank() const {
    size_t r = 0;
    for (long long d : diag)
        if (d != 0) ++r;
    return r;
}

namespace {

void swap_rows(IntMat& m, size_t i, size_t j) { std::swap(m[i], m[j]); }

void swap_cols(IntMat& m, size_t i, size_t j) {
    for (auto& row : m) std::swap(row[i], row[j]);
}

// row[i] += c * row[j]
void add_row(IntMat& m, size_t i, size_t j, long long c) {
    for (size_t k = 0; k < m[i].size(); ++k)
        m[i][k] = checked_add(m[i][k], checked_mul(c, m[j][k]));
}

void add_col(IntMat& m, size_t i, size_t j, long long c) {
    for (auto& row : m) row[i] = checked_add(row[i], checked_mul(c, row[j]));
}

void negate_row(IntMat& m, size_t i) {
    for (auto& v : m[i]) v = -v;
}

IntMat identity(size_t n) {
    IntMat m(n, std::vector<long long>(n, 0));
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

}  // namespace

SmithForm smith_normal_form(const IntMat& a) {
    size_t rows = a.size();
    size_t cols = rows ? a[0].size() : 0;
    SmithForm out;
    out.U = identity(rows);
    out.V = identity(cols);
    IntMat s = a;

    size_t t = 0;
    while (t < rows && t < cols) {
        // find pivot: smallest nonzero |entry| in the remaining block
        size_t pi = t, pj = t;
        long long best = 0;
        for (size_t i = t; i < rows; ++i)
            for (size_t j = t; j < cols; ++j) {
                long long v = s[i][j] < 0 ? -s[i][j] : s[i][j];
                if (v != 0 && (best == 0 || v < best)) { best = v; pi = i; pj = j; }
            }
        if (best == 0) break;
        swap_rows(s, t, pi); swap_rows(out.U, t, pi);
        swap_cols(s, t, pj); swap_cols(out.V, t, pj);

        bool again = true;
        while (again) {
            again = false;
            for (size_t i = t + 1; i < rows; ++i) {
                if (s[i][t] == 0) continue;
                long long q = s[i][t] / s[t][t];
                add_row(s, i, t, -q); add_row(out.U, i, t, -q);
                if (s[i][t] != 0) {  // remainder smaller than pivot: swap up
                    swap_rows(s, t, i); swap_rows(out.U, t, i);
                    again = true;
                }
            }
            for (size_t j = t + 1; j < cols; ++j) {
                if (s[t][j] == 0) continue;
                long long q = s[t][j] / s[t][t];
                add_col(s, j, t, -q); add_col(out.V, j, t, -q);
                if (s[t][j] != 0) {
                    swap_cols(s, t, j); swap_cols(out.V, t, j);
                    again = true;
                }
            }
            if (again) continue;
            // pivot must divide every remaining entry; if not, fold the
            // offending row in and keep reducing (|pivot| strictly drops)
            for (size_t i = t + 1; i < rows && !again; ++i)
                for (size_t j = t + 1; j < cols && !again; ++j)
                    if (s[i][j] % s[t][t] != 0) {
                        add_row(s, t, i, 1); add_row(out.U, t, i, 1);
                        again = true;
                    }
        }
        ++t;
    }
    for (size_t i = 0; i < t; ++i)
        if (s[i][i] < 0) { negate_row(s, i); negate_row(out.U, i); }

    out.diag.assign(std::min(rows, cols), 0);
    for (size_t i = 0; i < out.diag.size(); ++i) out.diag[i] = i < t ? s[i][i] : 0;
    return out;
}

bool solve_integer_system(const IntMat& a, const std::vector<long long>& b,
                          std::vector<long long>& x, IntMat& kernel_basis) {
    size_t rows = a.size();
    size_t cols = rows ? a[0].size() : 0;
    if (b.size() != rows) throw MathError("solve: rhs size mismatch");
    x.assign(cols, 0);
    kernel_basis.clear();
    if (cols == 0) {
        for (long long v : b)
            if (v != 0) return false;
        return true;
    }
    SmithForm sf = smith_normal_form(a);
    // S = U A V; solve S y = U b, then x = V y.
    std::vector<long long> ub(rows, 0);
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < rows; ++j)
            ub[i] = checked_add(ub[i], checked_mul(sf.U[i][j], b[j]));
    size_t r = sf.rank();
    std::vector<long long> y(cols, 0);
    for (size_t i = 0; i < rows; ++i) {
        if (i < r) {
            if (ub[i] % sf.diag[i] != 0) return false;
            y[i] = ub[i] / sf.diag[i];
        } else if (ub[i] != 0) {
            return false;
        }
    }
    for (size_t i = 0; i < cols; ++i)
        for (size_t j = 0; j < cols; ++j)
            x[i] = checked_add(x[i], checked_mul(sf.V[i][j], y[j]));
    for (size_t k = r; k < cols; ++k) {
        std::vector<long long> basis(cols, 0);
        for (size_t i = 0; i < cols; ++i) basis[i] = sf.V[i][k];
        kernel_basis.push_back(std::move(basis));
    }
    return true;
}

size_t rational_rank(const IntMat& a) {
    return smith_normal_form(a).rank();
}

bool rational_solvable(const IntMat& a, const std::vector<long long>& b) {
    IntMat aug = a;
    size_t rows = a.size();
    if (rows == 0) return true;
    for (size_t i = 0; i < rows; ++i) aug[i].push_back(b[i]);
    return rational_rank(aug) == rational_rank(a);
}

bool rational_solve(const IntMat& a, const std::vector<long long>& b,
                    std::vector<Rational>& x) {
    size_t rows = a.size();
    size_t cols = rows ? a[0].size() : 0;
    x.assign(cols, Rational(0));
    std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(cols + 1, Rational(0)));
    for (size_t i = 0; i < rows; ++i) {
        for (size_t j = 0; j < cols; ++j) m[i][j] = Rational(a[i][j]);
        m[i][cols] = Rational(b[i]);
    }
    std::vector<long long> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && m[p][c] == Rational(0)) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        Rational pivot = m[r][c];
        Rational pivot_inv(pivot.den, pivot.num);
        for (size_t j = c; j <= cols; ++j) m[r][j] = m[r][j] * pivot_inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == Rational(0)) continue;
            Rational f = m[i][c];
            for (size_t j = c; j <= cols; ++j) m[i][j] = m[i][j] - f * m[r][j];
        }
        pivot_col.push_back(static_cast<long long>(c));
        ++r;
    }
    for (size_t i = r; i < rows; ++i)
        if (!(m[i][cols] == Rational(0))) return false;
    for (size_t i = 0; i < r; ++i) x[static_cast<size_t>(pivot_col[i])] = m[i][cols];
    return true;
}

}  // namespace acat

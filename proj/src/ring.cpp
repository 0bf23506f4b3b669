#include "acat/ring.hpp"

#include <algorithm>
#include <sstream>

namespace acat {

bool MonoidSpec::operator==(const MonoidSpec& o) const {
    return ambient_rank == o.ambient_rank && generators == o.generators &&
           grading_map == o.grading_map;
}

bool BulkSpec::operator==(const BulkSpec& o) const {
    return names == o.names && degrees == o.degrees && d == o.d;
}

RingSpec::RingSpec(DatumPtr datum, MonoidSpec monoid, BulkSpec bulk, bool trivial_filtration)
    : datum_(std::move(datum)), monoid_(std::move(monoid)), bulk_(std::move(bulk)),
      trivial_filtration_(trivial_filtration) {
    for (const auto& u : monoid_.generators) {
        if (u.size() != static_cast<size_t>(monoid_.ambient_rank))
            throw MathError("ring spec: generator exponent length mismatch");
        if (std::all_of(u.begin(), u.end(), [](long long v) { return v == 0; }))
            throw MathError("ring spec: NE generator must be nonzero");
        std::vector<long long> g(datum_->size(), 0);
        if (monoid_.grading_map.size() != datum_->size())
            throw MathError("ring spec: grading map row count");
        for (size_t i = 0; i < datum_->size(); ++i)
            for (size_t j = 0; j < u.size(); ++j)
                g[i] = checked_add(g[i], checked_mul(monoid_.grading_map[i][j], u[j]));
        Degree deg(datum_, g);
        if (deg.parity() != 0)
            throw MathError("ring spec: NE generator of odd degree (the monoid ring would not be supercommutative over Z)");
        ne_degrees_.push_back(deg);
    }
    size_t nb = bulk_.names.size();
    if (bulk_.degrees.size() != nb) throw MathError("ring spec: bulk degree count");
    for (const auto& dg : bulk_.degrees) bulk_degrees_.emplace_back(datum_, dg);
    if (bulk_.d.size() != nb) throw MathError("ring spec: morse matrix size");
    for (const auto& row : bulk_.d)
        if (row.size() != nb) throw MathError("ring spec: morse matrix not square");
    // d raises degree by i(1) and squares to zero
    Degree one = nb ? Degree::of_int(datum_, 1) : Degree();
    for (size_t i = 0; i < nb; ++i)
        for (size_t j = 0; j < nb; ++j) {
            if (bulk_.d[j][i] != 0 && bulk_degrees_[j] != bulk_degrees_[i] + one)
                throw MathError("ring spec: morse differential does not raise degree by i(1)");
        }
    for (size_t i = 0; i < nb; ++i)
        for (size_t k = 0; k < nb; ++k) {
            long long acc = 0;
            for (size_t j = 0; j < nb; ++j)
                acc = checked_add(acc, checked_mul(bulk_.d[k][j], bulk_.d[j][i]));
            if (acc != 0) throw MathError("ring spec: morse differential does not square to zero");
        }
}

std::shared_ptr<const RingSpec> RingSpec::integers() {
    static auto z = std::make_shared<const RingSpec>(
        GradingDatum::standard_z(),
        MonoidSpec{0, {}, IntMat(1, std::vector<long long>{})}, BulkSpec{}, true);
    return z;
}

bool RingSpec::operator==(const RingSpec& o) const {
    return *datum_ == *o.datum_ && monoid_ == o.monoid_ && bulk_ == o.bulk_ &&
           trivial_filtration_ == o.trivial_filtration_;
}

long long Monomial::weight() const {
    long long w = 0;
    for (unsigned e : ne) w += e;
    for (unsigned e : dp) w += e;
    return w;
}

bool Monomial::operator<(const Monomial& o) const {
    if (ne != o.ne) return ne < o.ne;
    return dp < o.dp;
}

RingElement::RingElement(RingSpecPtr spec, long long trunc)
    : spec_(std::move(spec)), trunc_(trunc) {
    if (trunc_ < 1) throw MathError("ring element: truncation order must be >= 1");
}

RingElement RingElement::zero(const RingSpecPtr& spec, long long trunc) {
    return RingElement(spec, trunc);
}

RingElement RingElement::one(const RingSpecPtr& spec, long long trunc) {
    return constant(spec, trunc, 1);
}

RingElement RingElement::constant(const RingSpecPtr& spec, long long trunc, long long c) {
    RingElement e(spec, trunc);
    Monomial m;
    m.ne.assign(spec->num_ne(), 0);
    m.dp.assign(spec->num_bulk(), 0);
    e.add_term(m, c);
    return e;
}

RingElement RingElement::monomial(const RingSpecPtr& spec, long long trunc, Monomial m,
                                  long long c) {
    if (m.ne.size() != spec->num_ne() || m.dp.size() != spec->num_bulk())
        throw MathError("ring element: monomial shape mismatch");
    for (size_t i = 0; i < m.dp.size(); ++i)
        if (m.dp[i] >= 2 && spec->bulk_parity(i) == 1)
            return zero(spec, trunc);  // odd divided powers vanish
    RingElement e(spec, trunc);
    e.add_term(m, c);
    return e;
}

void RingElement::add_term(const Monomial& m, long long c) {
    if (c == 0) return;
    if (m.weight() >= trunc_) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second = checked_add(it->second, c);
        if (it->second == 0) terms_.erase(it);
    }
}

namespace {

void check_compat(const RingElement& a, const RingElement& b) {
    if (!a.spec() || !b.spec()) throw MathError("ring element: missing spec");
    if (a.spec() != b.spec() && !(*a.spec() == *b.spec()))
        throw MathError("ring element: ring spec mismatch");
    if (a.trunc() != b.trunc())
        throw MathError("ring element: truncation order mismatch");
}

}  // namespace

RingElement mul_monomials(const RingSpecPtr& spec, long long trunc, const Monomial& a,
                          const Monomial& b, long long coeff) {
    RingElement out(spec, trunc);
    if (a.weight() + b.weight() >= trunc || coeff == 0) return out;
    Monomial m;
    m.ne.resize(a.ne.size());
    for (size_t j = 0; j < a.ne.size(); ++j) m.ne[j] = a.ne[j] + b.ne[j];
    m.dp.resize(a.dp.size());
    long long c = coeff;
    // Koszul sign: odd factors of b pass the odd factors of a with larger index
    long long crossings = 0;
    for (size_t j = 0; j < b.dp.size(); ++j) {
        if (b.dp[j] == 0 || spec->bulk_parity(j) == 0) continue;
        for (size_t i = j + 1; i < a.dp.size(); ++i)
            if (a.dp[i] != 0 && spec->bulk_parity(i) == 1) crossings += b.dp[j] * a.dp[i];
    }
    if (crossings % 2 != 0) c = -c;
    for (size_t i = 0; i < a.dp.size(); ++i) {
        unsigned k = a.dp[i] + b.dp[i];
        if (k >= 2 && spec->bulk_parity(i) == 1) return RingElement::zero(spec, trunc);
        m.dp[i] = k;
        c = checked_mul(c, checked_binom(k, a.dp[i]));
    }
    out.add_term(m, c);
    return out;
}

RingElement RingElement::operator+(const RingElement& o) const {
    check_compat(*this, o);
    RingElement out = *this;
    for (const auto& [m, c] : o.terms_) out.add_term(m, c);
    return out;
}

RingElement RingElement::operator-(const RingElement& o) const { return *this + (-o); }

RingElement RingElement::operator-() const {
    RingElement out = *this;
    for (auto& [m, c] : out.terms_) c = -c;
    return out;
}

RingElement RingElement::scaled(long long k) const {
    RingElement out(spec_, trunc_);
    if (k == 0) return out;
    for (const auto& [m, c] : terms_) out.add_term(m, checked_mul(c, k));
    return out;
}

RingElement RingElement::operator*(const RingElement& o) const {
    check_compat(*this, o);
    RingElement out(spec_, trunc_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) {
            RingElement p = mul_monomials(spec_, trunc_, ma, mb, checked_mul(ca, cb));
            for (const auto& [m, c] : p.terms_) out.add_term(m, c);
        }
    return out;
}

bool RingElement::operator==(const RingElement& o) const {
    check_compat(*this, o);
    return terms_ == o.terms_;
}

long long RingElement::filtration_level() const {
    if (terms_.empty()) return FILT_INF;
    long long best = -1;
    for (const auto& [m, c] : terms_) {
        long long w = m.weight();
        if (best < 0 || w < best) best = w;
    }
    return best;
}

Degree RingElement::monomial_degree(const Monomial& m) const {
    Degree g = Degree::zero(spec_->datum());
    for (size_t j = 0; j < m.ne.size(); ++j)
        if (m.ne[j]) g = g + spec_->ne_degree(j).scaled(m.ne[j]);
    for (size_t i = 0; i < m.dp.size(); ++i)
        if (m.dp[i]) g = g + spec_->bulk_degree(i).scaled(m.dp[i]);
    return g;
}

std::optional<Degree> RingElement::homogeneous_degree() const {
    std::optional<Degree> deg;
    for (const auto& [m, c] : terms_) {
        Degree g = monomial_degree(m);
        if (!deg)
            deg = g;
        else if (*deg != g)
            return std::nullopt;
    }
    return deg;
}

std::pair<RingElement, RingElement> RingElement::parity_split() const {
    RingElement even(spec_, trunc_), odd(spec_, trunc_);
    for (const auto& [m, c] : terms_) {
        if (monomial_degree(m).parity() == 0)
            even.add_term(m, c);
        else
            odd.add_term(m, c);
    }
    return {even, odd};
}

RingElement RingElement::d() const {
    RingElement out(spec_, trunc_);
    size_t nb = spec_->num_bulk();
    for (const auto& [m, c] : terms_) {
        long long prefix_parity = 0;
        for (size_t i = 0; i < nb; ++i) {
            if (m.dp[i] != 0) {
                // d hits the block x_i^[k]; sign from passing the odd prefix
                long long sign = prefix_parity % 2 == 0 ? 1 : -1;
                Monomial base = m;
                base.dp[i] -= 1;
                for (size_t j = 0; j < nb; ++j) {
                    long long dji = spec_->bulk().d[j][i];
                    if (dji == 0) continue;
                    Monomial xj;
                    xj.ne.assign(spec_->num_ne(), 0);
                    xj.dp.assign(nb, 0);
                    xj.dp[j] = 1;
                    // x_j sits where the block started: left of base's
                    // remaining factors >= i, right of the prefix < i.
                    Monomial pre = base, post = base;
                    for (size_t t = 0; t < nb; ++t) {
                        if (t < i) post.dp[t] = 0;
                        else pre.dp[t] = 0;
                    }
                    std::fill(post.ne.begin(), post.ne.end(), 0u);
                    RingElement tail = mul_monomials(spec_, trunc_, xj, post, 1);
                    for (const auto& [mt, ct] : tail.terms()) {
                        RingElement full = mul_monomials(spec_, trunc_, pre, mt,
                                                         checked_mul(checked_mul(c, dji),
                                                                     checked_mul(ct, sign)));
                        for (const auto& [mf, cf] : full.terms()) out.add_term(mf, cf);
                    }
                }
            }
            prefix_parity += static_cast<long long>(m.dp[i]) * spec_->bulk_parity(i);
        }
    }
    return out;
}

std::string RingElement::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        long long coeff = c;
        if (!first) os << (coeff < 0 ? " - " : " + ");
        else if (coeff < 0) os << "-";
        first = false;
        if (coeff < 0) coeff = -coeff;
        std::vector<std::string> factors;
        for (size_t j = 0; j < m.ne.size(); ++j)
            for (unsigned k = 0; k < m.ne[j]; ++k) factors.push_back("r" + std::to_string(j));
        for (size_t i = 0; i < m.dp.size(); ++i)
            if (m.dp[i]) {
                std::string f = "x" + std::to_string(i);
                if (m.dp[i] != 1) f += "^[" + std::to_string(m.dp[i]) + "]";
                factors.push_back(f);
            }
        if (factors.empty()) {
            os << coeff;
        } else {
            if (coeff != 1) os << coeff << "*";
            for (size_t t = 0; t < factors.size(); ++t) os << (t ? "*" : "") << factors[t];
        }
    }
    return os.str();
}

// -------------------------------------------------------------- literals --

namespace {

struct LitParser {
    const std::string& s;
    size_t i = 0;
    const RingSpecPtr& spec;
    long long trunc;

    void skip() {
        while (i < s.size() && isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool peek(char c) {
        skip();
        return i < s.size() && s[i] == c;
    }
    bool eat(char c) {
        if (peek(c)) { ++i; return true; }
        return false;
    }
    long long integer() {
        skip();
        bool neg = eat('-');
        if (!neg) eat('+');
        skip();
        size_t start = i;
        while (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (start == i) throw MathError("ring literal: expected integer near '" + s.substr(start) + "'");
        long long v = std::stoll(s.substr(start, i - start));
        return neg ? -v : v;
    }
    size_t index() {
        skip();
        size_t start = i;
        while (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (start == i) throw MathError("ring literal: expected variable index");
        return static_cast<size_t>(std::stoull(s.substr(start, i - start)));
    }

    RingElement factor() {
        skip();
        if (i < s.size() && s[i] == 'r') {
            ++i;
            size_t j = index();
            if (j >= spec->num_ne()) throw MathError("ring literal: no NE generator r" + std::to_string(j));
            Monomial m;
            m.ne.assign(spec->num_ne(), 0);
            m.dp.assign(spec->num_bulk(), 0);
            m.ne[j] = 1;
            return RingElement::monomial(spec, trunc, m);
        }
        if (i < s.size() && s[i] == 'x') {
            ++i;
            size_t j = index();
            if (j >= spec->num_bulk()) throw MathError("ring literal: no bulk variable x" + std::to_string(j));
            unsigned k = 1;
            skip();
            if (eat('^')) {
                if (!eat('[')) throw MathError("ring literal: divided power must be x{i}^[k]");
                long long kk = integer();
                if (kk < 0) throw MathError("ring literal: negative divided power");
                if (!eat(']')) throw MathError("ring literal: missing ']'");
                k = static_cast<unsigned>(kk);
            }
            if (k == 0) return RingElement::one(spec, trunc);
            Monomial m;
            m.ne.assign(spec->num_ne(), 0);
            m.dp.assign(spec->num_bulk(), 0);
            m.dp[j] = k;
            return RingElement::monomial(spec, trunc, m);
        }
        return RingElement::constant(spec, trunc, integer());
    }

    RingElement term() {
        RingElement out = factor();
        while (eat('*')) out = out * factor();
        return out;
    }

    RingElement expr() {
        skip();
        RingElement out = term();
        while (true) {
            skip();
            if (eat('+')) out = out + term();
            else if (peek('-')) out = out + term();  // term() reads the sign
            else break;
        }
        return out;
    }
};

}  // namespace

RingElement parse_ring_element(const RingSpecPtr& spec, long long trunc,
                               const std::string& text) {
    LitParser p{text, 0, spec, trunc};
    RingElement e = p.expr();
    p.skip();
    if (p.i != text.size())
        throw MathError("ring literal: trailing input at '" + text.substr(p.i) + "'");
    return e;
}

// --------------------------------------------------------------- Novikov --

NovikovElement NovikovElement::mul(const NovikovElement& o) const {
    if (!(filt_scale == o.filt_scale) || trunc != o.trunc)
        throw MathError("novikov: mixed filtration data");
    NovikovElement out{{}, filt_scale, trunc};
    Rational cap = filt_scale * Rational(trunc);
    for (const auto& [qa, ca] : terms)
        for (const auto& [qb, cb] : o.terms) {
            Rational q = qa + qb;
            if (!(q < cap)) continue;
            long long& slot = out.terms[q];
            slot = checked_add(slot, checked_mul(ca, cb));
            if (slot == 0) out.terms.erase(q);
        }
    return out;
}

NovikovElement NovikovElement::add(const NovikovElement& o) const {
    if (!(filt_scale == o.filt_scale) || trunc != o.trunc)
        throw MathError("novikov: mixed filtration data");
    NovikovElement out = *this;
    for (const auto& [q, c] : o.terms) {
        long long& slot = out.terms[q];
        slot = checked_add(slot, c);
        if (slot == 0) out.terms.erase(q);
    }
    return out;
}

long long NovikovElement::filtration_level() const {
    if (terms.empty()) return FILT_INF;
    const Rational& q = terms.begin()->first;
    // largest i with i*A <= q
    long long lo = 0;
    while (!(q < filt_scale * Rational(lo + 1))) ++lo;
    return lo;
}

bool NovikovElement::operator==(const NovikovElement& o) const {
    return terms == o.terms && filt_scale == o.filt_scale && trunc == o.trunc;
}

std::string NovikovElement::str() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [q, c] : terms) {
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        long long a = c < 0 ? -c : c;
        if (q.num == 0) { os << a; continue; }
        if (a != 1) os << a << "*";
        os << "T^" << q.str();
    }
    return os.str();
}

NovikovElement novikov_specialize(const RingElement& a, const std::vector<Rational>& kappa,
                                  const Rational& filt_scale) {
    const RingSpecPtr& spec = a.spec();
    if (spec->num_bulk() != 0)
        throw MathError("novikov: source ring has bulk variables; specialize the small ring");
    if (kappa.size() != static_cast<size_t>(spec->monoid().ambient_rank))
        throw MathError("novikov: kappa has wrong length");
    if (!(Rational(0) < filt_scale)) throw MathError("novikov: filtration scale must be positive");
    std::vector<Rational> gen_values;
    for (const auto& u : spec->monoid().generators) {
        Rational v(0);
        for (size_t j = 0; j < u.size(); ++j) v = v + kappa[j] * Rational(u[j]);
        if (!(Rational(0) < v))
            throw MathError("novikov: kappa(u) <= 0 on a generator (divergence risk)");
        gen_values.push_back(v);
    }
    NovikovElement out{{}, filt_scale, a.trunc()};
    Rational cap = filt_scale * Rational(a.trunc());
    for (const auto& [m, c] : a.terms()) {
        Rational q(0);
        for (size_t j = 0; j < m.ne.size(); ++j)
            if (m.ne[j]) q = q + gen_values[j] * Rational(m.ne[j]);
        if (!(q < cap)) continue;
        long long& slot = out.terms[q];
        slot = checked_add(slot, c);
        if (slot == 0) out.terms.erase(q);
    }
    return out;
}

// ----------------------------------------------------- associated graded --

RingSpecPtr associated_graded(const RingSpecPtr& spec) {
    const auto& d0 = *spec->datum();
    int fr = d0.free_rank();
    auto insert_at = [&](auto vec, auto value) {
        vec.insert(vec.begin() + fr, value);
        return vec;
    };
    auto datum = std::make_shared<const GradingDatum>(
        fr + 1, d0.torsion(), insert_at(d0.i_vec(), 0LL), insert_at(d0.sigma_vec(), 0));

    MonoidSpec monoid = spec->monoid();
    monoid.ambient_rank += 1;
    for (auto& u : monoid.generators) u.push_back(1);
    IntMat map2(datum->size(), std::vector<long long>(monoid.ambient_rank, 0));
    for (size_t i = 0; i < spec->datum()->size(); ++i) {
        size_t row = i < static_cast<size_t>(fr) ? i : i + 1;  // weight row inserted at fr
        for (int j = 0; j + 1 < monoid.ambient_rank; ++j)
            map2[row][j] = spec->monoid().grading_map[i][j];
    }
    map2[fr][monoid.ambient_rank - 1] = 1;  // weight coordinate
    monoid.grading_map = map2;

    BulkSpec bulk = spec->bulk();
    for (auto& dg : bulk.degrees) {
        std::vector<long long> v = dg;
        v.insert(v.begin() + fr, 1);  // bulk variables have weight 1
        dg = v;
    }
    return std::make_shared<const RingSpec>(datum, monoid, bulk, /*trivial_filtration=*/true);
}

RingElement gr_element(const RingSpecPtr& gr_spec, const RingElement& a) {
    RingElement out(gr_spec, a.trunc());
    for (const auto& [m, c] : a.terms())
        out = out + RingElement::monomial(gr_spec, a.trunc(), m, c);
    return out;
}

// ----------------------------------------------------------- morphisms --

namespace {

// gamma_k(a) = a^k / k!, defined when the divided power exists integrally.
RingElement divided_power(const RingElement& a, unsigned k) {
    if (k == 0) return RingElement::one(a.spec(), a.trunc());
    RingElement p = a;
    for (unsigned t = 1; t < k; ++t) p = p * a;
    long long fact = 1;
    for (unsigned t = 2; t <= k; ++t) fact = checked_mul(fact, t);
    RingElement out(a.spec(), a.trunc());
    for (const auto& [m, c] : p.terms()) {
        if (c % fact != 0)
            throw MathError("morphism: image has no integral divided power");
        out = out + RingElement::monomial(a.spec(), a.trunc(), m, c / fact);
    }
    return out;
}

}  // namespace

CoeffRingMorphism::CoeffRingMorphism(RingSpecPtr source, RingSpecPtr target,
                                     GradingMorphism grading,
                                     std::vector<RingElement> ne_images,
                                     std::vector<RingElement> bulk_images)
    : source_(std::move(source)), target_(std::move(target)), grading_(std::move(grading)),
      ne_images_(std::move(ne_images)), bulk_images_(std::move(bulk_images)) {
    if (ne_images_.size() != source_->num_ne() || bulk_images_.size() != source_->num_bulk())
        throw MathError("morphism: image count mismatch");
    auto check_image = [&](const RingElement& img, const Degree& src_deg, const char* what) {
        if (img.is_zero()) return;
        auto deg = img.homogeneous_degree();
        if (!deg || !(*deg == grading_.apply(src_deg)))
            throw MathError(std::string("morphism: ") + what + " image not degree-compatible");
        if (img.filtration_level() < 1)
            throw MathError(std::string("morphism: ") + what + " image not filtered");
    };
    for (size_t j = 0; j < ne_images_.size(); ++j) {
        check_image(ne_images_[j], source_->ne_degree(j), "NE generator");
        if (!ne_images_[j].d().is_zero())
            throw MathError("morphism: does not intertwine differentials on NE generator");
    }
    for (size_t i = 0; i < bulk_images_.size(); ++i) {
        check_image(bulk_images_[i], source_->bulk_degree(i), "bulk variable");
        // phi(d x_i) = d(phi(x_i))
        RingElement lhs = RingElement::zero(target_, bulk_images_[i].trunc());
        for (size_t j = 0; j < source_->num_bulk(); ++j) {
            long long dji = source_->bulk().d[j][i];
            if (dji != 0) lhs = lhs + bulk_images_[j].scaled(dji);
        }
        if (!(lhs == bulk_images_[i].d()))
            throw MathError("morphism: does not intertwine differentials on bulk variable");
    }
}

RingElement CoeffRingMorphism::apply(const RingElement& a) const {
    if (a.spec() != source_ && !(*a.spec() == *source_))
        throw MathError("morphism: element from wrong ring");
    long long trunc = a.trunc();
    RingElement out = RingElement::zero(target_, trunc);
    for (const auto& [m, c] : a.terms()) {
        RingElement term = RingElement::constant(target_, trunc, c);
        for (size_t j = 0; j < m.ne.size(); ++j)
            for (unsigned k = 0; k < m.ne[j]; ++k) term = term * ne_images_[j];
        for (size_t i = 0; i < m.dp.size(); ++i)
            if (m.dp[i]) term = term * divided_power(bulk_images_[i], m.dp[i]);
        out = out + term;
    }
    return out;
}

}  // namespace acat

#pragma once

/**
 * @file laurent.hpp
 * @brief Exact Laurent polynomials in one unit-modulus variable.
 *
 * A StarLaurent is an element of Q[u, u^-1].  Because the variable is only
 * ever evaluated on the unit circle, complex conjugation acts on the ring as
 * the involution u -> u^-1 with rational coefficients fixed; this is `star`.
 * Coefficients are GMP rationals, so every identity checked here is exact.
 */

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "errors.hpp"

namespace chdef {

using Rational = mpq_class;

/// Parses "p/q" or "p" (optionally signed) into a canonical rational.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw parse_error("empty rational");
    for (char c : s) {
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '/'))
            throw parse_error("malformed rational '" + s + "'");
    }
    if (s.front() == '+') s.erase(0, 1);
    Rational q;
    if (q.set_str(s, 10) != 0) throw parse_error("malformed rational '" + std::string(text) + "'");
    if (q.get_den() == 0) throw parse_error("zero denominator in '" + std::string(text) + "'");
    q.canonicalize();
    return q;
}

class StarLaurent {
   public:
    /// exponent -> nonzero coefficient
    using Terms = std::map<int, Rational>;

    StarLaurent() = default;
    StarLaurent(long c) { add_term(0, Rational(c)); }  // NOLINT(google-explicit-constructor)
    StarLaurent(const Rational& c) { add_term(0, c); }  // NOLINT(google-explicit-constructor)
    explicit StarLaurent(Terms terms) {
        for (auto& [e, c] : terms) add_term(e, c);
    }

    static StarLaurent monomial(const Rational& c, int exponent) {
        StarLaurent p;
        p.add_term(exponent, c);
        return p;
    }
    /// The variable u itself.
    static StarLaurent variable() { return monomial(Rational(1), 1); }

    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t term_count() const noexcept { return terms_.size(); }

    Rational coeff(int exponent) const {
        auto it = terms_.find(exponent);
        return it == terms_.end() ? Rational(0) : it->second;
    }
    int min_exponent() const { return terms_.empty() ? 0 : terms_.begin()->first; }
    int max_exponent() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

    /// Units of Q[u, u^-1] are exactly the nonzero monomials.
    bool is_unit() const noexcept { return terms_.size() == 1; }
    bool is_constant() const noexcept { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0); }

    StarLaurent& operator+=(const StarLaurent& rhs) {
        for (const auto& [e, c] : rhs.terms_) add_term(e, c);
        return *this;
    }
    StarLaurent& operator-=(const StarLaurent& rhs) {
        for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
        return *this;
    }
    StarLaurent& operator*=(const StarLaurent& rhs) {
        *this = *this * rhs;
        return *this;
    }

    friend StarLaurent operator+(StarLaurent lhs, const StarLaurent& rhs) { return lhs += rhs; }
    friend StarLaurent operator-(StarLaurent lhs, const StarLaurent& rhs) { return lhs -= rhs; }
    friend StarLaurent operator-(const StarLaurent& p) {
        StarLaurent r;
        for (const auto& [e, c] : p.terms_) r.terms_.emplace(e, -c);
        return r;
    }
    friend StarLaurent operator*(const StarLaurent& lhs, const StarLaurent& rhs) {
        StarLaurent r;
        for (const auto& [e1, c1] : lhs.terms_)
            for (const auto& [e2, c2] : rhs.terms_) r.add_term(e1 + e2, c1 * c2);
        return r;
    }
    friend bool operator==(const StarLaurent& a, const StarLaurent& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const StarLaurent& a, const StarLaurent& b) { return !(a == b); }

    /// Complex conjugation on |u| = 1: coefficient of u^k moves to u^-k.
    friend StarLaurent star(const StarLaurent& p) {
        StarLaurent r;
        for (const auto& [e, c] : p.terms_) r.terms_.emplace(-e, c);
        return r;
    }

    /// Value at u = z.
    std::complex<double> at(std::complex<double> z) const {
        std::complex<double> sum{0.0, 0.0};
        for (const auto& [e, c] : terms_) sum += c.get_d() * std::pow(z, e);
        return sum;
    }
    /// Value at u = e^{i alpha}.
    std::complex<double> evaluate(double alpha) const {
        std::complex<double> sum{0.0, 0.0};
        for (const auto& [e, c] : terms_) sum += c.get_d() * std::polar(1.0, e * alpha);
        return sum;
    }
    /// Exact value at u = 1 (sum of coefficients).
    Rational at_one() const {
        Rational s(0);
        for (const auto& [e, c] : terms_) s += c;
        return s;
    }

    /// Human-readable form, e.g. "-3 - 2*u^-2 + 1/2*u".
    std::string to_string(std::string_view var = "u") const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            Rational mag = abs(c);
            if (first) {
                if (sgn(c) < 0) out += "-";
            } else {
                out += sgn(c) < 0 ? " - " : " + ";
            }
            first = false;
            if (e == 0) {
                out += mag.get_str();
                continue;
            }
            if (mag != 1) out += mag.get_str() + "*";
            out += var;
            if (e != 1) out += "^" + std::to_string(e);
        }
        return out;
    }

   private:
    void add_term(int exponent, Rational c) {
        c.canonicalize();  // mpq_class(p, q) is not reduced on construction
        if (c == 0) return;
        auto it = terms_.find(exponent);
        if (it == terms_.end()) {
            terms_.emplace(exponent, std::move(c));
            return;
        }
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }

    Terms terms_;
};

/// Exact quotient a / b in Q[u, u^-1], or nullopt when b does not divide a.
inline std::optional<StarLaurent> divide_exact(const StarLaurent& a, const StarLaurent& b) {
    if (b.is_zero()) return std::nullopt;
    if (a.is_zero()) return StarLaurent{};
    if (b.is_unit()) {
        const auto& [eb, cb] = *b.terms().begin();
        StarLaurent::Terms q;
        for (const auto& [e, c] : a.terms()) q.emplace(e - eb, c / cb);
        return StarLaurent(std::move(q));
    }
    // Long division on the polynomial parts, highest exponent first.
    StarLaurent rem = a;
    StarLaurent quot;
    const int db = b.max_exponent();
    const Rational lead = b.coeff(db);
    const int span_b = b.max_exponent() - b.min_exponent();
    while (!rem.is_zero() && rem.max_exponent() - rem.min_exponent() >= span_b) {
        const int shift = rem.max_exponent() - db;
        StarLaurent t = StarLaurent::monomial(rem.coeff(rem.max_exponent()) / lead, shift);
        quot += t;
        rem -= t * b;
    }
    if (!rem.is_zero()) return std::nullopt;
    return quot;
}

/// (u + u^-1) / 2, i.e. cos(alpha) at u = e^{i alpha}.
inline StarLaurent cosine_poly() {
    return StarLaurent(StarLaurent::Terms{{-1, Rational(1, 2)}, {1, Rational(1, 2)}});
}

}  // namespace chdef

#pragma once

// Scalars are Laurent polynomials in a formal symbol tp (standing for 2*pi*i)
// with coefficients in the Gaussian rationals Q(i). Complex conjugation sends
// i to -i and tp to -tp. Only monomials c*tp^k with c != 0 are units, so the
// linear algebra layer divides only by those.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <hodge/errors.hpp>

namespace hodge {

using rational = mpq_class;

// Largest |exponent| of tp we accept; anything beyond this signals a runaway
// computation rather than meaningful data.
inline constexpr int max_tp_exponent = 256;

class scalar {
public:
    struct term {
        int exp;
        rational re;
        rational im;
    };

    scalar() = default;
    scalar(int v) { set_from(rational(v), rational(0), 0); }
    scalar(long v) { set_from(rational(v), rational(0), 0); }
    scalar(const rational &v) { set_from(v, rational(0), 0); }
    scalar(const rational &re, const rational &im, int exp = 0) { set_from(re, im, exp); }

    static scalar i() { return scalar(rational(0), rational(1), 0); }
    static scalar tp(int k = 1) { return scalar(rational(1), rational(0), k); }
    static scalar frac(long num, long den) {
        rational q(num, den);
        q.canonicalize();
        return scalar(q);
    }

    const std::vector<term> &terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_one() const noexcept {
        return terms_.size() == 1 && terms_[0].exp == 0 && terms_[0].re == 1 && sgn(terms_[0].im) == 0;
    }
    bool is_unit() const noexcept { return terms_.size() == 1; }
    // True when no tp appears, i.e. the value lies in Q(i).
    bool is_gaussian() const noexcept { return terms_.empty() || (terms_.size() == 1 && terms_[0].exp == 0); }
    bool is_rational() const noexcept { return is_gaussian() && (terms_.empty() || sgn(terms_[0].im) == 0); }
    bool is_real() const { return *this == conj(); }

    // Real part of the coefficient of tp^0; zero when absent.
    rational constant_re() const {
        for (const auto &t : terms_) {
            if (t.exp == 0) return t.re;
        }
        return rational(0);
    }

    scalar conj() const {
        scalar r;
        r.terms_.reserve(terms_.size());
        for (const auto &t : terms_) {
            if (t.exp % 2 == 0) {
                r.terms_.push_back({t.exp, t.re, -t.im});
            } else {
                r.terms_.push_back({t.exp, -t.re, t.im});
            }
        }
        return r;
    }

    scalar operator-() const {
        scalar r = *this;
        for (auto &t : r.terms_) {
            t.re = -t.re;
            t.im = -t.im;
        }
        return r;
    }

    scalar &operator+=(const scalar &o) {
        if (o.terms_.empty()) return *this;
        if (terms_.empty()) return *this = o;
        merge(o, false);
        return *this;
    }
    scalar &operator-=(const scalar &o) {
        if (o.terms_.empty()) return *this;
        merge(o, true);
        return *this;
    }
    friend scalar operator+(scalar a, const scalar &b) { return a += b; }
    friend scalar operator-(scalar a, const scalar &b) { return a -= b; }

    friend scalar operator*(const scalar &a, const scalar &b) {
        scalar r;
        if (a.terms_.empty() || b.terms_.empty()) return r;
        if (a.terms_.size() == 1 && b.terms_.size() == 1) {
            const auto &x = a.terms_[0];
            const auto &y = b.terms_[0];
            r.terms_.push_back({check_exp(x.exp + y.exp), x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re});
            return r;
        }
        for (const auto &x : a.terms_) {
            scalar part;
            part.terms_.reserve(b.terms_.size());
            for (const auto &y : b.terms_) {
                part.terms_.push_back(
                    {check_exp(x.exp + y.exp), x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re});
            }
            r += part;
        }
        return r;
    }
    scalar &operator*=(const scalar &o) { return *this = *this * o; }

    // Inverse of a unit c*tp^k. Throws non_unit_pivot otherwise.
    scalar inverse() const {
        if (terms_.size() != 1) {
            throw non_unit_pivot("cannot invert " + to_string());
        }
        const auto &t = terms_[0];
        rational n = t.re * t.re + t.im * t.im;
        return scalar(t.re / n, -t.im / n, check_exp(-t.exp));
    }
    friend scalar operator/(const scalar &a, const scalar &b) { return a * b.inverse(); }
    scalar &operator/=(const scalar &o) { return *this = *this / o; }

    friend bool operator==(const scalar &a, const scalar &b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t k = 0; k < a.terms_.size(); ++k) {
            const auto &x = a.terms_[k];
            const auto &y = b.terms_[k];
            if (x.exp != y.exp || x.re != y.re || x.im != y.im) return false;
        }
        return true;
    }
    friend bool operator!=(const scalar &a, const scalar &b) { return !(a == b); }

    // Canonical text form: terms c*tp^k joined by '+', each c written as
    // "a", "a+bi" or "a-bi" with a, b reduced rationals.
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (std::size_t k = 0; k < terms_.size(); ++k) {
            const auto &t = terms_[k];
            if (k) s += '+';
            s += t.re.get_str();
            if (sgn(t.im) != 0) {
                if (sgn(t.im) > 0) s += '+';
                s += t.im.get_str();
                s += 'i';
            }
            if (t.exp != 0) {
                s += "*tp^";
                s += std::to_string(t.exp);
            }
        }
        return s;
    }

    friend std::ostream &operator<<(std::ostream &os, const scalar &s) { return os << s.to_string(); }

private:
    std::vector<term> terms_;

    static int check_exp(int e) {
        if (e > max_tp_exponent || e < -max_tp_exponent) {
            throw validation_error("tp exponent out of range: " + std::to_string(e));
        }
        return e;
    }

    void set_from(const rational &re, const rational &im, int exp) {
        terms_.clear();
        if (sgn(re) != 0 || sgn(im) != 0) {
            terms_.push_back({check_exp(exp), re, im});
        }
    }

    void merge(const scalar &o, bool subtract) {
        std::vector<term> out;
        out.reserve(terms_.size() + o.terms_.size());
        std::size_t a = 0, b = 0;
        while (a < terms_.size() || b < o.terms_.size()) {
            if (b == o.terms_.size() || (a < terms_.size() && terms_[a].exp < o.terms_[b].exp)) {
                out.push_back(std::move(terms_[a++]));
            } else if (a == terms_.size() || o.terms_[b].exp < terms_[a].exp) {
                const auto &y = o.terms_[b++];
                out.push_back({y.exp, subtract ? rational(-y.re) : y.re, subtract ? rational(-y.im) : y.im});
            } else {
                term t = std::move(terms_[a++]);
                const auto &y = o.terms_[b++];
                if (subtract) {
                    t.re -= y.re;
                    t.im -= y.im;
                } else {
                    t.re += y.re;
                    t.im += y.im;
                }
                if (sgn(t.re) != 0 || sgn(t.im) != 0) out.push_back(std::move(t));
            }
        }
        terms_ = std::move(out);
    }
};

// Real and imaginary parts with respect to the conjugation above:
// re(a) = (a + conj a)/2 and im_part(a) = (a - conj a)/2. The latter is not
// divided by i, so a = re(a) + im_part(a) holds with both pieces in the ring.
inline scalar real_part(const scalar &a) { return (a + a.conj()) * scalar::frac(1, 2); }
inline scalar imag_part(const scalar &a) { return (a - a.conj()) * scalar::frac(1, 2); }

} // namespace hodge

#pragma once

// Text form of scalars:
//   scalar   := term ('+' term)*
//   term     := rational (('+' | '-') urational 'i')? ('*tp^' integer)*
//   rational := '-'? digits ('/' digits)?
// The imaginary part is recognized by looking ahead for the trailing 'i';
// otherwise a '+' separates terms. Several tp factors multiply.

#include <cctype>
#include <string>
#include <string_view>

#include <hodge/exactalg/scalar.hpp>

namespace hodge::io {

class scalar_parser {
  public:
    explicit scalar_parser(std::string_view text) : s_(text) {}

    scalar parse() {
        if (s_.empty()) fail("a rational");
        scalar total = term();
        while (pos_ < s_.size()) {
            expect('+', "'+' or end of input");
            total += term();
        }
        return total;
    }

  private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string &what) const { throw parse_error(pos_, what, "scalar \"" + std::string(s_) + "\""); }

    bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }
    void expect(char c, const std::string &what) {
        if (!peek(c)) fail(what);
        ++pos_;
    }

    std::string digits() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) fail("a digit");
        return std::string(s_.substr(start, pos_ - start));
    }

    rational unsigned_rational() {
        std::string num = digits();
        rational r(num);
        if (peek('/')) {
            ++pos_;
            std::string den = digits();
            mpz_class d(den);
            if (d == 0) {
                --pos_;
                fail("a non-zero denominator");
            }
            r = rational(mpz_class(num), d);
            r.canonicalize();
        }
        return r;
    }

    rational signed_rational() {
        bool neg = false;
        if (peek('-')) {
            neg = true;
            ++pos_;
        }
        rational r = unsigned_rational();
        return neg ? rational(-r) : r;
    }

    // Tries to read ('+'|'-') urational 'i' at the current position.
    bool imaginary(rational &out) {
        if (!(peek('+') || peek('-'))) return false;
        const std::size_t save = pos_;
        const bool neg = s_[pos_] == '-';
        ++pos_;
        std::size_t p = pos_;
        while (p < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[p])) || s_[p] == '/')) ++p;
        if (p == pos_ || p >= s_.size() || s_[p] != 'i') {
            pos_ = save;
            if (neg) {
                ++pos_;
                fail("an imaginary part ending in 'i'");
            }
            return false;
        }
        rational r = unsigned_rational();
        expect('i', "'i'");
        out = neg ? rational(-r) : r;
        return true;
    }

    scalar term() {
        rational re = signed_rational();
        rational im(0);
        imaginary(im);
        long exp = 0;
        while (peek('*')) {
            ++pos_;
            for (char c : std::string_view("tp^")) expect(c, std::string("'") + c + "' of '*tp^'");
            bool neg = false;
            if (peek('-')) {
                neg = true;
                ++pos_;
            }
            std::string d = digits();
            if (d.size() > 6) fail("a tp exponent of at most " + std::to_string(max_tp_exponent));
            exp += neg ? -std::stol(d) : std::stol(d);
            if (exp > max_tp_exponent || exp < -max_tp_exponent) {
                fail("a tp exponent of at most " + std::to_string(max_tp_exponent));
            }
        }
        return scalar(re, im, static_cast<int>(exp));
    }
};

inline scalar parse_scalar(std::string_view text) { return scalar_parser(text).parse(); }
inline std::string format_scalar(const scalar &s) { return s.to_string(); }

} // namespace hodge::io

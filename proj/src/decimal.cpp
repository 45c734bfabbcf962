#include "radsum/decimal.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

namespace radsum {

namespace {

mpz_class pow10(long e) {
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), 10, static_cast<unsigned long>(e));
    return out;
}

mpq_class pow10q(long e) { return e >= 0 ? mpq_class(pow10(e)) : mpq_class(mpz_class(1), pow10(-e)); }

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// floor(log10(a)) for a > 0.
long decimal_exponent(const mpq_class& a) {
    long e = static_cast<long>(mpz_sizeinbase(a.get_num_mpz_t(), 10)) -
             static_cast<long>(mpz_sizeinbase(a.get_den_mpz_t(), 10));
    while (a < pow10q(e)) --e;
    while (a >= pow10q(e + 1)) ++e;
    return e;
}

}  // namespace

mpq_class parse_rational(const std::string& text) {
    static const std::regex fraction(R"(^([+-]?\d+)\s*/\s*([+-]?\d+)$)");
    static const std::regex decimal(R"(^([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?$)");
    const std::string s = trim(text);
    std::smatch m;
    if (std::regex_match(s, m, fraction)) {
        mpz_class num(m[1].str()[0] == '+' ? m[1].str().substr(1) : m[1].str());
        mpz_class den(m[2].str()[0] == '+' ? m[2].str().substr(1) : m[2].str());
        if (den == 0) throw InputError("rational '" + text + "' has zero denominator");
        mpq_class q(num, den);
        q.canonicalize();
        return q;
    }
    if (std::regex_match(s, m, decimal)) {
        std::string whole = m[2].str(), frac = m[3].str();
        if (whole.empty() && frac.empty()) throw InputError("malformed number '" + text + "'");
        std::string digits = whole + frac;
        digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
        mpz_class mantissa = digits.empty() ? mpz_class(0) : mpz_class(digits);
        long exponent = -static_cast<long>(frac.size());
        if (m[4].matched) {
            const std::string e = m[4].str();
            if (e.size() > 7) throw InputError("exponent out of range in '" + text + "'");
            exponent += std::stol(e);
        }
        mpq_class q = mpq_class(mantissa) * pow10q(exponent);
        q.canonicalize();
        return m[1].str() == "-" ? mpq_class(-q) : q;
    }
    throw InputError("malformed number '" + text + "'");
}

mpz_class parse_integer(const std::string& text) {
    mpq_class q = parse_rational(text);
    if (q.get_den() != 1) throw InputError("'" + text + "' is not an integer");
    return q.get_num();
}

std::string format_decimal(const mpq_class& x, int significant, Rounding mode) {
    if (significant < 1) throw InputError("format_decimal: need at least one digit");
    if (x == 0) return "0";
    mpq_class a = abs(x);
    long e = decimal_exponent(a);
    mpq_class scaled = a * pow10q(significant - 1 - e);
    mpz_class n;
    if (mode == Rounding::up) {
        mpz_cdiv_q(n.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    } else {
        mpz_class num = 2 * scaled.get_num() + scaled.get_den(), den = 2 * scaled.get_den();
        mpz_fdiv_q(n.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    }
    if (n == pow10(significant)) {
        n /= 10;
        ++e;
    }
    std::string digits = n.get_str();
    std::string out = x < 0 ? "-" : "";
    if (e >= -5 && e < significant) {
        if (e >= 0) {
            out += digits.substr(0, e + 1);
            if (static_cast<long>(digits.size()) > e + 1) out += "." + digits.substr(e + 1);
        } else {
            out += "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + digits;
        }
    } else {
        out += digits.substr(0, 1);
        if (digits.size() > 1) out += "." + digits.substr(1);
        out += "e" + std::to_string(e);
    }
    return out;
}

DecimalInterval to_decimal(const Ball& b, int min_digits) {
    mpq_class mid = b.mid_q(), rad = b.rad_q();
    int cap = static_cast<int>(std::ceil(static_cast<double>(b.precision()) * 0.30103)) + 2;
    int digits = std::max(min_digits, 1);
    if (mid != 0) {
        long em = decimal_exponent(abs(mid));
        if (rad > 0) {
            long er = decimal_exponent(rad);
            digits = std::max<long>(digits, em - er + 2);
        } else {
            digits = cap;
        }
    }
    digits = std::min(digits, std::max(cap, min_digits));

    DecimalInterval out;
    out.mid = format_decimal(mid, digits);
    mpq_class total = rad + abs(mpq_class(mid - parse_rational(out.mid)));
    out.rad = format_decimal(total, 3, Rounding::up);
    return out;
}

}  // namespace radsum

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>

#include "qsym/config.hpp"

namespace qsym {

using Z = boost::multiprecision::cpp_int;
using Q = boost::multiprecision::cpp_rational;

inline std::string to_string(const Q& q) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

/// Parses "p", "-p" or "p/q".
inline Q parse_rational(const std::string& s) {
    auto slash = s.find('/');
    auto check = [&](const std::string& part, bool allow_sign) {
        std::size_t i = 0;
        if (allow_sign && i < part.size() && (part[i] == '-' || part[i] == '+')) ++i;
        if (i == part.size()) throw invalid_input("bad rational '" + s + "'");
        for (; i < part.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(part[i])))
                throw invalid_input("bad rational '" + s + "'");
    };
    if (slash == std::string::npos) {
        check(s, true);
        return Q(Z(s[0] == '+' ? s.substr(1) : s));
    }
    std::string a = s.substr(0, slash), b = s.substr(slash + 1);
    check(a, true);
    check(b, false);
    Z den(b);
    if (den == 0) throw invalid_input("zero denominator in '" + s + "'");
    return Q(Z(a[0] == '+' ? a.substr(1) : a), den);
}

inline double to_double(const Q& q) { return q.convert_to<double>(); }

inline Q qpow(const Q& base, unsigned e) {
    Q r = 1, b = base;
    while (e) {
        if (e & 1u) r *= b;
        b *= b;
        e >>= 1u;
    }
    return r;
}

}  // namespace qsym

#include "rational.h"

#include <cctype>
#include <cstddef>
#include <stdexcept>

using namespace std;

namespace rationals {

static bool is_integer_text(string_view s) {
    if (!s.empty() && (s[0] == '+' || s[0] == '-'))
        s.remove_prefix(1);
    if (s.empty())
        return false;
    for (char c : s)
        if (!isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

static mpz_class parse_integer(string_view s) {
    if (!is_integer_text(s))
        throw invalid_argument("malformed integer in rational: '" + string(s) + "'");
    return mpz_class(string(s));
}

Rational make(long long num, long long den) {
    if (den == 0)
        throw invalid_argument("rational with zero denominator");
    // long long == long on this platform; mpz_class takes long.
    Rational q(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
    q.canonicalize();
    return q;
}

Rational parse(string_view text) {
    size_t begin = text.find_first_not_of(" \t");
    size_t end = text.find_last_not_of(" \t");
    if (begin == string_view::npos)
        throw invalid_argument("empty rational literal");
    string_view s = text.substr(begin, end - begin + 1);

    if (size_t slash = s.find('/'); slash != string_view::npos) {
        mpz_class num = parse_integer(s.substr(0, slash));
        mpz_class den = parse_integer(s.substr(slash + 1));
        if (den == 0)
            throw invalid_argument("rational with zero denominator: '" + string(s) + "'");
        Rational q(num, den);
        q.canonicalize();
        return q;
    }

    if (size_t dot = s.find('.'); dot != string_view::npos) {
        bool negative = false;
        string_view body = s;
        if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
            negative = body[0] == '-';
            body.remove_prefix(1);
            dot -= 1;
        }
        string_view int_part = body.substr(0, dot);
        string_view frac_part = body.substr(dot + 1);
        if (int_part.empty() && frac_part.empty())
            throw invalid_argument("malformed rational literal: '" + string(s) + "'");
        mpz_class ip = int_part.empty() ? mpz_class(0) : parse_integer(int_part);
        mpz_class fp = frac_part.empty() ? mpz_class(0) : parse_integer(frac_part);
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac_part.size());
        Rational q(ip * scale + fp, scale);
        q.canonicalize();
        if (negative)
            q = -q;
        return q;
    }

    Rational q(parse_integer(s));
    q.canonicalize();
    return q;
}

string to_string(const Rational &q) {
    return q.get_str();
}

double to_double(const Rational &q) {
    return q.get_d();
}

}  // namespace rationals

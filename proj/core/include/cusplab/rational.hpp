#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cusplab {

using Int = mpz_class;
using Rat = mpq_class;

/// Canonical "p/q" (or "p" when q=1) rendering used by every serializer.
inline std::string rat_to_string(const Rat& q) {
    Rat c = q;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

/// Accepts "p", "p/q", and plain decimal strings like "-0.25".
inline std::optional<Rat> rat_from_string(const std::string& s) {
    if (s.empty()) return std::nullopt;
    auto bad = [&] { return std::nullopt; };
    auto pos = s.find('/');
    try {
        if (pos != std::string::npos) {
            Int num(s.substr(0, pos)), den(s.substr(pos + 1));
            if (den == 0) return bad();
            Rat r(num, den);
            r.canonicalize();
            return r;
        }
        auto dot = s.find('.');
        if (dot == std::string::npos) {
            Rat r{Int(s)};
            return r;
        }
        std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
        if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
            return bad();
        bool neg = !head.empty() && head[0] == '-';
        if (head == "-" || head == "+") head += "0";
        if (head.empty()) head = "0";
        Int ip(head);
        Int frac(tail);
        Int den(1);
        for (size_t i = 0; i < tail.size(); ++i) den *= 10;
        Rat r(ip);
        Rat f(frac, den);
        f.canonicalize();
        r += neg ? -f : f;
        return r;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

/// max(q, 0) — the positive part that entropy sums are built from.
inline Rat rat_pos(const Rat& q) { return q > 0 ? q : Rat(0); }

inline Rat rat_sum(const std::vector<Rat>& v) {
    Rat s(0);
    for (const auto& q : v) s += q;
    return s;
}

}  // namespace cusplab

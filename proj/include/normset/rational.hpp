#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace normset {

// All indices, sizes and weights are arbitrary-precision naturals; all
// coefficients are exact rationals. No floating point anywhere.
using Nat = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Nat numerator(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Nat denominator(const Rat& r) { return boost::multiprecision::denominator(r); }

struct MalformedInput : std::runtime_error {
    explicit MalformedInput(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a construction would exceed its configured size/step budget,
// or when a faithful-mode quantity cannot be materialized at all.
struct InfeasibleAtBudget : std::runtime_error {
    explicit InfeasibleAtBudget(const std::string& what) : std::runtime_error(what) {}
};

inline std::string nat_to_string(const Nat& n) { return n.str(); }

inline Nat parse_nat(const std::string& s) {
    if (s.empty()) throw MalformedInput("empty natural");
    for (char c : s)
        if (c < '0' || c > '9') throw MalformedInput("bad natural: " + s);
    return Nat(s);
}

// "p/q" or "p"; sign allowed on p.
inline Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Nat(s));
        Nat p(s.substr(0, slash));
        Nat q(s.substr(slash + 1));
        if (q == 0) throw MalformedInput("zero denominator: " + s);
        return Rat(p, q);
    } catch (const std::runtime_error&) {
        throw MalformedInput("bad rational: " + s);
    }
}

inline std::string rat_to_string(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

// Bit cap for materializing powers of two. Faithful-mode quantities such as
// 2^{2*l_2} stay below it; anything larger is refused rather than swapped to disk.
inline constexpr unsigned kPow2BitCap = 1u << 24;

inline Nat pow2(const Nat& e) {
    if (e < 0) throw std::logic_error("pow2: negative exponent");
    if (e > kPow2BitCap)
        throw InfeasibleAtBudget("2^" + e.str() + " exceeds the bit cap");
    Nat r(1);
    return r << static_cast<unsigned>(e);
}

// x > 2^e, exactly, without materializing 2^e when e is astronomical.
inline bool exceeds_pow2(const Nat& x, const Nat& e) {
    if (x <= 0) return false;
    // bits(x) = msb+1; x > 2^e  iff  bits > e+1, or bits == e+1 and x != 2^e.
    Nat bits = static_cast<unsigned long>(boost::multiprecision::msb(x)) + 1;
    if (bits > e + 1) return true;
    if (bits < e + 1) return false;
    // Same bit-length: x >= 2^e, equality iff x is exactly the power.
    return boost::multiprecision::lsb(x) != boost::multiprecision::msb(x);
}

// 1/2^e as an exact rational (subject to the bit cap).
inline Rat inv_pow2(const Nat& e) { return Rat(Nat(1), pow2(e)); }

inline Nat nat_min(const Nat& a, const Nat& b) { return a < b ? a : b; }
inline Nat nat_max(const Nat& a, const Nat& b) { return a < b ? b : a; }

// Clamp an arbitrary-precision count to a machine size (counts of parts,
// children etc. are never useful beyond the number of points in play).
inline std::size_t clamp_to_size(const Nat& n, std::size_t cap) {
    if (n >= Nat(static_cast<unsigned long long>(cap))) return cap;
    return static_cast<std::size_t>(static_cast<unsigned long long>(n));
}

}  // namespace normset

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wata/errors.hpp"

namespace wata {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// The four exact carriers the toolkit works over.
enum class Carrier { boolean, natural, integer, rational };

inline std::string_view carrier_name(Carrier c) {
    switch (c) {
        case Carrier::boolean: return "bool";
        case Carrier::natural: return "nat";
        case Carrier::integer: return "int";
        case Carrier::rational: return "rat";
    }
    return "?";
}

inline std::optional<Carrier> carrier_from_name(std::string_view name) {
    if (name == "bool") return Carrier::boolean;
    if (name == "nat") return Carrier::natural;
    if (name == "int") return Carrier::integer;
    if (name == "rat") return Carrier::rational;
    return std::nullopt;
}

/// An exact scalar tagged with its carrier.
///
/// The representation is a normalized rational (gcd-reduced, positive
/// denominator); the tag restricts which values are admissible: bool holds
/// 0/1, nat a nonnegative integer, int an integer.
class Value {
public:
    Value(Carrier carrier, BigRational v) : carrier_(carrier), v_(std::move(v)) {
        if (!admissible()) {
            throw InputError("value " + raw_str() + " is not in carrier " +
                             std::string(carrier_name(carrier_)));
        }
    }

    Value(Carrier carrier, long v) : Value(carrier, BigRational(v)) {}

    Carrier carrier() const { return carrier_; }
    const BigRational& raw() const { return v_; }

    bool is_zero() const { return v_.is_zero(); }
    bool is_one() const { return v_ == 1; }

    /// The value as an integer; only meaningful for bool/nat/int carriers.
    BigInt as_integer() const {
        if (denominator(v_) != 1) {
            throw InternalError("as_integer on non-integral value " + str());
        }
        return numerator(v_);
    }

    std::string str() const { return raw_str(); }

    bool operator==(const Value& other) const {
        return carrier_ == other.carrier_ && v_ == other.v_;
    }
    bool operator!=(const Value& other) const { return !(*this == other); }

private:
    bool admissible() const {
        switch (carrier_) {
            case Carrier::boolean: return v_.is_zero() || v_ == 1;
            case Carrier::natural: return denominator(v_) == 1 && v_ >= 0;
            case Carrier::integer: return denominator(v_) == 1;
            case Carrier::rational: return true;
        }
        return false;
    }

    std::string raw_str() const {
        BigInt num = numerator(v_);
        BigInt den = denominator(v_);
        if (den == 1) return num.str();
        return num.str() + "/" + den.str();
    }

    Carrier carrier_;
    BigRational v_;
};

/// Result of refining a1 + b1 = a2 + b2 into a 2x2 grid of summands:
/// a1 = c1 + d1, b1 = c2 + d2, a2 = c1 + c2, b2 = d1 + d2.
struct EquiSplit {
    Value c1, c2, d1, d2;
};

/// Exact semiring arithmetic over one carrier, with capability flags that
/// gate which algorithms are legal for it.
class Semiring {
public:
    explicit Semiring(Carrier carrier) : carrier_(carrier) {}

    Carrier carrier() const { return carrier_; }
    std::string_view name() const { return carrier_name(carrier_); }

    bool is_ring() const { return carrier_ == Carrier::integer || carrier_ == Carrier::rational; }
    bool is_commutative() const { return true; }
    bool is_positive() const { return carrier_ == Carrier::boolean || carrier_ == Carrier::natural; }
    bool is_equisubtractive() const { return carrier_ != Carrier::boolean; }
    bool is_unit_generated() const { return true; }
    bool has_star() const { return carrier_ == Carrier::boolean || carrier_ == Carrier::rational; }

    Value zero() const { return Value(carrier_, 0); }
    Value one() const { return Value(carrier_, 1); }
    Value make(BigRational v) const { return Value(carrier_, std::move(v)); }
    Value make(long v) const { return Value(carrier_, v); }

    Value add(const Value& a, const Value& b) const {
        check_operand(a);
        check_operand(b);
        if (carrier_ == Carrier::boolean) {
            return Value(carrier_, a.is_zero() && b.is_zero() ? 0 : 1);
        }
        return Value(carrier_, a.raw() + b.raw());
    }

    Value mul(const Value& a, const Value& b) const {
        check_operand(a);
        check_operand(b);
        return Value(carrier_, a.raw() * b.raw());
    }

    Value neg(const Value& a) const {
        check_operand(a);
        if (!is_ring()) {
            throw CapabilityError("no additive inverses over " + std::string(name()));
        }
        return Value(carrier_, -a.raw());
    }

    /// Subtraction; defined over rings, and over nat when b <= a.
    Value sub(const Value& a, const Value& b) const {
        check_operand(a);
        check_operand(b);
        if (is_ring()) return Value(carrier_, a.raw() - b.raw());
        if (carrier_ == Carrier::natural && b.raw() <= a.raw()) {
            return Value(carrier_, a.raw() - b.raw());
        }
        throw CapabilityError("subtraction " + a.str() + " - " + b.str() + " leaves " +
                              std::string(name()));
    }

    /// Scalar star a* = sum of all powers of a. Defined for bool (always 1)
    /// and for rat when a = 0 or |a| < 1, where it equals 1/(1-a).
    Value star(const Value& a) const {
        check_operand(a);
        if (carrier_ == Carrier::boolean) return one();
        if (carrier_ == Carrier::rational) {
            if (a.is_zero() || abs(a.raw()) < 1) {
                return Value(carrier_, BigRational(1) / (BigRational(1) - a.raw()));
            }
            throw DivergentStarError("star of " + a.str() + " diverges over rat");
        }
        throw CapabilityError("no star operation over " + std::string(name()));
    }

    bool is_unit(const Value& a) const {
        check_operand(a);
        switch (carrier_) {
            case Carrier::boolean: return a.is_one();
            case Carrier::natural: return a.is_one();
            case Carrier::integer: return a.raw() == 1 || a.raw() == -1;
            case Carrier::rational: return !a.is_zero();
        }
        return false;
    }

    Value invert_unit(const Value& a) const {
        if (!is_unit(a)) {
            throw InputError(a.str() + " is not a unit of " + std::string(name()));
        }
        if (carrier_ == Carrier::boolean) return one();
        return Value(carrier_, BigRational(1) / a.raw());
    }

    /// Writes a as a sum of multiplicative units. For a = 0 the result is the
    /// empty sum over nat and the zero-sum 1 + (-1) over int/rat.
    std::vector<Value> unit_decompose(const Value& a) const {
        check_operand(a);
        if (carrier_ == Carrier::boolean) {
            throw CapabilityError("unit decomposition is not available over bool");
        }
        std::vector<Value> units;
        if (a.is_zero()) {
            if (is_ring()) {
                units.push_back(one());
                units.push_back(neg(one()));
            }
            return units;
        }
        if (carrier_ == Carrier::rational) {
            units.push_back(a);
            return units;
        }
        BigInt n = a.as_integer();
        BigInt count = abs(n);
        if (count > 100000) {
            throw BudgetError("unit decomposition of " + a.str() + " has " + count.str() +
                              " summands; shrink the weights");
        }
        Value unit = n > 0 ? one() : neg(one());
        for (BigInt i = 0; i < count; ++i) units.push_back(unit);
        return units;
    }

    /// Refines a1 + b1 = a2 + b2 into the 2x2 grid of an equisubtractive
    /// semiring. Over rings: c1 = a2, c2 = 0, d1 = a1 - a2, d2 = b1. Over
    /// nat: c1 = min(a1, a2) and the rest forced.
    EquiSplit equisubtract(const Value& a1, const Value& b1, const Value& a2,
                           const Value& b2) const {
        check_operand(a1);
        check_operand(b1);
        check_operand(a2);
        check_operand(b2);
        if (!is_equisubtractive()) {
            throw CapabilityError(std::string(name()) + " is not equisubtractive");
        }
        if (add(a1, b1) != add(a2, b2)) {
            throw InputError("equisubtract requires a1 + b1 = a2 + b2");
        }
        if (is_ring()) {
            return EquiSplit{a2, zero(), sub(a1, a2), b1};
        }
        Value c1 = a1.raw() <= a2.raw() ? a1 : a2;
        Value c2 = sub(a2, c1);
        Value d1 = sub(a1, c1);
        Value d2 = sub(b2, d1);
        return EquiSplit{c1, c2, d1, d2};
    }

    bool operator==(const Semiring& other) const { return carrier_ == other.carrier_; }
    bool operator!=(const Semiring& other) const { return !(*this == other); }

private:
    void check_operand(const Value& v) const {
        if (v.carrier() != carrier_) {
            throw InputError("operand of carrier " + std::string(carrier_name(v.carrier())) +
                             " used in " + std::string(name()) + " arithmetic");
        }
    }

    Carrier carrier_;
};

/// Parses a scalar in the textual value syntax of the given carrier:
/// bool 0|1, nat/int decimal (minus sign for int only), rat p/q or an
/// integer literal. Returns nullopt on malformed or out-of-carrier input.
inline std::optional<Value> try_parse_value(Carrier carrier, std::string_view text) {
    auto parse_int = [](std::string_view s) -> std::optional<BigInt> {
        if (s.empty()) return std::nullopt;
        std::size_t i = 0;
        bool negative = false;
        if (s[0] == '-' || s[0] == '+') {
            negative = s[0] == '-';
            i = 1;
        }
        if (i == s.size()) return std::nullopt;
        BigInt n = 0;
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') return std::nullopt;
            n = n * 10 + (s[i] - '0');
        }
        return negative ? -n : n;
    };

    std::size_t slash = text.find('/');
    BigRational v;
    if (slash == std::string_view::npos) {
        auto n = parse_int(text);
        if (!n) return std::nullopt;
        v = BigRational(*n);
    } else {
        auto n = parse_int(text.substr(0, slash));
        auto d = parse_int(text.substr(slash + 1));
        if (!n || !d || d->is_zero()) return std::nullopt;
        v = BigRational(*n) / BigRational(*d);
    }
    switch (carrier) {
        case Carrier::boolean:
            if (v != 0 && v != 1) return std::nullopt;
            break;
        case Carrier::natural:
            if (denominator(v) != 1 || v < 0) return std::nullopt;
            break;
        case Carrier::integer:
            if (denominator(v) != 1) return std::nullopt;
            break;
        case Carrier::rational:
            break;
    }
    return Value(carrier, std::move(v));
}

} // namespace wata

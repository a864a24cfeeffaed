// Copyright 2026 The eaqmac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eaqmac/error.hpp"

namespace eaqmac {

/// An element of F_{p^r}, encoded as the integer whose base-p digits are the
/// polynomial coefficients (constant term is the least significant digit).
struct FieldElem {
    std::uint32_t value = 0;

    friend constexpr auto operator<=>(FieldElem, FieldElem) = default;
};

class FieldSpec;
using Field = std::shared_ptr<const FieldSpec>;

namespace detail {

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t k = 2; k * k <= n; ++k)
        if (n % k == 0) return false;
    return true;
}

using Poly = std::vector<std::uint64_t>;  // coefficients mod p, constant first

inline void trim(Poly &a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo a monic b, coefficients mod p.
inline Poly poly_mod(Poly a, const Poly &b, std::uint64_t p) {
    trim(a);
    const std::size_t db = b.size() - 1;
    while (a.size() >= b.size()) {
        const std::uint64_t lead = a.back();
        const std::size_t shift = a.size() - 1 - db;
        for (std::size_t k = 0; k <= db; ++k)
            a[shift + k] = (a[shift + k] + (p - lead) * b[k]) % p;
        trim(a);
    }
    return a;
}

// Trial division by every monic polynomial of degree 1..deg/2.
inline bool is_irreducible(const Poly &f, std::uint64_t p) {
    const std::size_t deg = f.size() - 1;
    for (std::size_t dd = 1; dd <= deg / 2; ++dd) {
        std::uint64_t count = 1;
        for (std::size_t k = 0; k < dd; ++k) count *= p;
        for (std::uint64_t code = 0; code < count; ++code) {
            Poly g(dd + 1, 0);
            std::uint64_t c = code;
            for (std::size_t k = 0; k < dd; ++k) {
                g[k] = c % p;
                c /= p;
            }
            g[dd] = 1;
            if (poly_mod(f, g, p).empty()) return false;
        }
    }
    return true;
}

struct BuiltinPoly {
    std::uint32_t p;
    std::uint32_t r;
    std::array<std::uint32_t, 7> coeffs;  // constant first, r + 1 used
};

inline constexpr std::array<BuiltinPoly, 9> kBuiltinPolys{{
    {2, 2, {1, 1, 1}},              // x^2 + x + 1
    {2, 3, {1, 1, 0, 1}},           // x^3 + x + 1
    {2, 4, {1, 1, 0, 0, 1}},        // x^4 + x + 1
    {2, 5, {1, 0, 1, 0, 0, 1}},     // x^5 + x^2 + 1
    {2, 6, {1, 1, 0, 0, 0, 0, 1}},  // x^6 + x + 1
    {3, 2, {1, 0, 1}},              // x^2 + 1
    {3, 3, {1, 2, 0, 1}},           // x^3 + 2x + 1
    {5, 2, {2, 0, 1}},              // x^2 + 2
    {7, 2, {1, 0, 1}},              // x^2 + 1
}};

}  // namespace detail

/// Arithmetic in F_{p^r}. Immutable after construction; share through `Field`.
///
/// Fields of order at most 256 carry full addition/multiplication tables;
/// larger ones compute on demand from the polynomial representation.
class FieldSpec {
  public:
    static constexpr std::uint64_t kMaxOrder = (1ull << 31) - 1;
    static constexpr std::uint64_t kTableLimit = 256;

    /// Builds F_{p^r}. With r > 1 and no polynomial, the built-in table is used.
    static Field make(std::uint32_t p, std::uint32_t r = 1,
                      std::optional<std::vector<std::uint32_t>> poly = std::nullopt) {
        return Field(new FieldSpec(p, r, std::move(poly)));
    }

    std::uint32_t p() const noexcept { return p_; }
    std::uint32_t r() const noexcept { return r_; }
    std::uint32_t order() const noexcept { return d_; }
    /// Monic modulus, constant term first; {0, 1} (i.e. x) for prime fields.
    const std::vector<std::uint32_t> &poly() const noexcept { return poly_; }
    bool is_prime_field() const noexcept { return r_ == 1; }

    bool same_as(const FieldSpec &o) const noexcept {
        return this == &o || (p_ == o.p_ && r_ == o.r_ && poly_ == o.poly_);
    }

    bool is_valid(FieldElem a) const noexcept { return a.value < d_; }

    FieldElem elem(std::uint64_t value) const {
        if (value >= d_) {
            std::ostringstream os;
            os << "value " << value << " is not an element of a field of order " << d_;
            throw Error(ErrorKind::InvalidElement, os.str());
        }
        return FieldElem{static_cast<std::uint32_t>(value)};
    }

    /// Image of an integer under Z -> F_p -> F_d.
    FieldElem from_int(std::int64_t n) const noexcept {
        std::int64_t v = n % static_cast<std::int64_t>(p_);
        if (v < 0) v += p_;
        return FieldElem{static_cast<std::uint32_t>(v)};
    }

    FieldElem zero() const noexcept { return FieldElem{0}; }
    FieldElem one() const noexcept { return FieldElem{1}; }

    FieldElem add(FieldElem a, FieldElem b) const noexcept {
        if (r_ == 1) return FieldElem{static_cast<std::uint32_t>((std::uint64_t{a.value} + b.value) % p_)};
        if (!add_table_.empty()) return FieldElem{add_table_[a.value * d_ + b.value]};
        return digitwise(a, b, false);
    }

    FieldElem neg(FieldElem a) const noexcept {
        if (r_ == 1) return FieldElem{a.value == 0 ? 0u : p_ - a.value};
        return digitwise(FieldElem{0}, a, true);
    }

    FieldElem sub(FieldElem a, FieldElem b) const noexcept { return add(a, neg(b)); }

    FieldElem mul(FieldElem a, FieldElem b) const noexcept {
        if (!mul_table_.empty()) return FieldElem{mul_table_[a.value * d_ + b.value]};
        if (r_ == 1) return FieldElem{static_cast<std::uint32_t>((std::uint64_t{a.value} * b.value) % p_)};
        return poly_mul(a, b);
    }

    FieldElem pow(FieldElem a, std::uint64_t e) const noexcept {
        FieldElem result = one();
        while (e > 0) {
            if (e & 1) result = mul(result, a);
            a = mul(a, a);
            e >>= 1;
        }
        return result;
    }

    /// Multiplicative inverse; throws SingularMatrix for zero (a 1x1 singular system).
    FieldElem inv(FieldElem a) const {
        if (a.value == 0) throw Error(ErrorKind::SingularMatrix, "zero has no multiplicative inverse");
        if (!inv_table_.empty()) return FieldElem{inv_table_[a.value]};
        return pow(a, std::uint64_t{d_} - 2);
    }

    FieldElem div(FieldElem a, FieldElem b) const { return mul(a, inv(b)); }

    /// Absolute trace tr(x) = sum_{j<r} x^{p^j}; the result lies in F_p.
    FieldElem trace(FieldElem a) const noexcept {
        if (r_ == 1) return a;
        if (!trace_table_.empty()) return FieldElem{trace_table_[a.value]};
        return compute_trace(a);
    }

    std::string describe() const {
        std::ostringstream os;
        os << "F_" << d_;
        if (r_ > 1) {
            os << " (p=" << p_ << ", r=" << r_ << ", poly=[";
            for (std::size_t k = 0; k < poly_.size(); ++k) os << (k ? "," : "") << poly_[k];
            os << "])";
        }
        return os.str();
    }

  private:
    FieldSpec(std::uint32_t p, std::uint32_t r, std::optional<std::vector<std::uint32_t>> poly) : p_(p), r_(r) {
        if (!detail::is_prime(p)) throw Error(ErrorKind::InvalidField, "p = " + std::to_string(p) + " is not prime");
        if (r < 1) throw Error(ErrorKind::InvalidField, "extension degree must be at least 1");
        std::uint64_t d = 1;
        for (std::uint32_t k = 0; k < r; ++k) {
            d *= p;
            if (d > kMaxOrder) throw Error(ErrorKind::InvalidField, "field order exceeds 2^31 - 1");
        }
        d_ = static_cast<std::uint32_t>(d);

        if (r == 1) {
            poly_ = {0, 1};
        } else {
            if (!poly) {
                for (const auto &entry : detail::kBuiltinPolys)
                    if (entry.p == p && entry.r == r) poly = std::vector<std::uint32_t>(entry.coeffs.begin(), entry.coeffs.begin() + r + 1);
                if (!poly) {
                    throw Error(ErrorKind::InvalidField, "no built-in irreducible polynomial for p = " + std::to_string(p) +
                                                             ", r = " + std::to_string(r) + "; supply one");
                }
            }
            if (poly->size() != r + 1 || poly->back() != 1)
                throw Error(ErrorKind::InvalidField, "polynomial must be monic of degree r (r + 1 coefficients, last = 1)");
            for (auto c : *poly)
                if (c >= p) throw Error(ErrorKind::InvalidField, "polynomial coefficient out of range [0, p)");
            detail::Poly f(poly->begin(), poly->end());
            if (!detail::is_irreducible(f, p)) throw Error(ErrorKind::InvalidField, "polynomial is reducible over F_p");
            poly_ = *poly;
        }

        if (d_ <= kTableLimit) build_tables();
    }

    FieldElem digitwise(FieldElem a, FieldElem b, bool negate_b) const noexcept {
        std::uint32_t x = a.value, y = b.value, out = 0, scale = 1;
        for (std::uint32_t k = 0; k < r_; ++k) {
            const std::uint32_t da = x % p_, db = y % p_;
            const std::uint32_t digit = negate_b ? (da + p_ - db) % p_ : (da + db) % p_;
            out += digit * scale;
            scale *= p_;
            x /= p_;
            y /= p_;
        }
        return FieldElem{out};
    }

    FieldElem poly_mul(FieldElem a, FieldElem b) const noexcept {
        std::vector<std::uint64_t> da(r_), db(r_), prod(2 * r_ - 1, 0);
        std::uint32_t x = a.value, y = b.value;
        for (std::uint32_t k = 0; k < r_; ++k) {
            da[k] = x % p_;
            db[k] = y % p_;
            x /= p_;
            y /= p_;
        }
        for (std::uint32_t i = 0; i < r_; ++i)
            for (std::uint32_t j = 0; j < r_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
        const detail::Poly modulus(poly_.begin(), poly_.end());
        const auto rem = detail::poly_mod(std::move(prod), modulus, p_);
        std::uint64_t out = 0, scale = 1;
        for (std::size_t k = 0; k < rem.size(); ++k) {
            out += rem[k] * scale;
            scale *= p_;
        }
        return FieldElem{static_cast<std::uint32_t>(out)};
    }

    FieldElem compute_trace(FieldElem a) const noexcept {
        FieldElem sum = a, power = a;
        for (std::uint32_t j = 1; j < r_; ++j) {
            power = pow(power, p_);
            sum = add(sum, power);
        }
        return sum;
    }

    void build_tables() {
        const std::size_t n = d_;
        std::vector<std::uint16_t> add(n * n), mul(n * n), inv(n, 0), tr(n);
        for (std::uint32_t a = 0; a < n; ++a)
            for (std::uint32_t b = 0; b < n; ++b) {
                add[a * n + b] = static_cast<std::uint16_t>(r_ == 1 ? (a + b) % p_ : digitwise({a}, {b}, false).value);
                mul[a * n + b] = static_cast<std::uint16_t>(r_ == 1 ? (a * b) % p_ : poly_mul({a}, {b}).value);
            }
        for (std::uint32_t a = 1; a < n; ++a)
            for (std::uint32_t b = 1; b < n; ++b)
                if (mul[a * n + b] == 1) {
                    inv[a] = static_cast<std::uint16_t>(b);
                    break;
                }
        add_table_ = std::move(add);
        mul_table_ = std::move(mul);
        inv_table_ = std::move(inv);
        for (std::uint32_t a = 0; a < n; ++a) tr[a] = static_cast<std::uint16_t>(compute_trace({a}).value);
        trace_table_ = std::move(tr);
    }

    std::uint32_t p_ = 2;
    std::uint32_t r_ = 1;
    std::uint32_t d_ = 2;
    std::vector<std::uint32_t> poly_;
    std::vector<std::uint16_t> add_table_;
    std::vector<std::uint16_t> mul_table_;
    std::vector<std::uint16_t> inv_table_;
    std::vector<std::uint16_t> trace_table_;
};

inline void require_same_field(const FieldSpec &a, const FieldSpec &b) {
    if (!a.same_as(b)) throw Error(ErrorKind::FieldMismatch, a.describe() + " vs " + b.describe());
}

}  // namespace eaqmac

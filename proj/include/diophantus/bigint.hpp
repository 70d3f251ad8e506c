#pragma once

#include <cstdint>
#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace diophantus {

// Signed arbitrary-precision integer, base 2^32 little-endian magnitude.
// Covers the desk-scale needs of this library (Pell fundamental solutions
// run to a few hundred digits); not a general bignum package.
class bigint {
public:
    bigint() = default;

    bigint(std::int64_t v) { // NOLINT: implicit by design
        if (v == 0) return;
        sign_ = v < 0 ? -1 : 1;
        std::uint64_t m = v < 0 ? ~static_cast<std::uint64_t>(v) + 1 : static_cast<std::uint64_t>(v);
        mag_.push_back(static_cast<std::uint32_t>(m));
        if (m >> 32) mag_.push_back(static_cast<std::uint32_t>(m >> 32));
    }

    explicit bigint(std::string_view s) {
        bool neg = false;
        std::size_t i = 0;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) { neg = s[i] == '-'; ++i; }
        if (i == s.size()) fail(errc::bad_input, "empty integer literal");
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') fail(errc::bad_input, "bad digit in integer literal");
            mul_small_inplace(10);
            add_small_inplace(static_cast<std::uint32_t>(s[i] - '0'));
        }
        if (!mag_.empty()) sign_ = neg ? -1 : 1;
    }

    int sign() const noexcept { return sign_; }
    bool is_zero() const noexcept { return sign_ == 0; }
    bool even() const noexcept { return mag_.empty() || (mag_[0] & 1u) == 0; }

    bigint operator-() const {
        bigint r = *this;
        r.sign_ = -r.sign_;
        return r;
    }

    friend bigint operator+(const bigint& a, const bigint& b) {
        if (a.sign_ == 0) return b;
        if (b.sign_ == 0) return a;
        bigint r;
        if (a.sign_ == b.sign_) {
            r.mag_ = add_mag(a.mag_, b.mag_);
            r.sign_ = a.sign_;
        } else {
            int c = cmp_mag(a.mag_, b.mag_);
            if (c == 0) return r;
            if (c > 0) { r.mag_ = sub_mag(a.mag_, b.mag_); r.sign_ = a.sign_; }
            else       { r.mag_ = sub_mag(b.mag_, a.mag_); r.sign_ = b.sign_; }
        }
        return r;
    }

    friend bigint operator-(const bigint& a, const bigint& b) { return a + (-b); }

    friend bigint operator*(const bigint& a, const bigint& b) {
        bigint r;
        if (a.sign_ == 0 || b.sign_ == 0) return r;
        r.mag_.assign(a.mag_.size() + b.mag_.size(), 0);
        for (std::size_t i = 0; i < a.mag_.size(); ++i) {
            std::uint64_t carry = 0;
            for (std::size_t j = 0; j < b.mag_.size(); ++j) {
                std::uint64_t cur = static_cast<std::uint64_t>(a.mag_[i]) * b.mag_[j] +
                                    r.mag_[i + j] + carry;
                r.mag_[i + j] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
            }
            std::size_t k = i + b.mag_.size();
            while (carry) {
                std::uint64_t cur = r.mag_[k] + carry;
                r.mag_[k] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
                ++k;
            }
        }
        r.trim();
        r.sign_ = a.sign_ * b.sign_;
        return r;
    }

    bigint& operator+=(const bigint& o) { return *this = *this + o; }
    bigint& operator-=(const bigint& o) { return *this = *this - o; }
    bigint& operator*=(const bigint& o) { return *this = *this * o; }

    // Quotient truncated toward zero; remainder has the dividend's sign.
    std::pair<bigint, std::uint32_t> divmod_small(std::uint32_t m) const {
        if (m == 0) fail(errc::bad_input, "division by zero");
        bigint q;
        q.mag_.assign(mag_.size(), 0);
        std::uint64_t rem = 0;
        for (std::size_t i = mag_.size(); i-- > 0;) {
            std::uint64_t cur = (rem << 32) | mag_[i];
            q.mag_[i] = static_cast<std::uint32_t>(cur / m);
            rem = cur % m;
        }
        q.trim();
        q.sign_ = q.mag_.empty() ? 0 : sign_;
        return {q, static_cast<std::uint32_t>(rem)};
    }

    friend int cmp(const bigint& a, const bigint& b) {
        if (a.sign_ != b.sign_) return a.sign_ < b.sign_ ? -1 : 1;
        int c = cmp_mag(a.mag_, b.mag_);
        return a.sign_ >= 0 ? c : -c;
    }

    friend bool operator==(const bigint& a, const bigint& b) { return cmp(a, b) == 0; }
    friend bool operator!=(const bigint& a, const bigint& b) { return cmp(a, b) != 0; }
    friend bool operator<(const bigint& a, const bigint& b) { return cmp(a, b) < 0; }
    friend bool operator<=(const bigint& a, const bigint& b) { return cmp(a, b) <= 0; }
    friend bool operator>(const bigint& a, const bigint& b) { return cmp(a, b) > 0; }
    friend bool operator>=(const bigint& a, const bigint& b) { return cmp(a, b) >= 0; }

    bool fits_int64() const {
        if (mag_.size() > 2) return false;
        std::uint64_t m = mag_u64();
        if (sign_ >= 0) return m <= static_cast<std::uint64_t>(INT64_MAX);
        return m <= static_cast<std::uint64_t>(INT64_MAX) + 1;
    }

    std::int64_t to_int64() const {
        if (!fits_int64()) fail(errc::overflow, "bigint does not fit in int64");
        std::uint64_t m = mag_u64();
        return sign_ < 0 ? -static_cast<std::int64_t>(m - 1) - 1 : static_cast<std::int64_t>(m);
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::vector<std::uint32_t> chunks;
        bigint t = *this;
        t.sign_ = 1;
        while (!t.is_zero()) {
            auto [q, r] = t.divmod_small(1000000000u);
            chunks.push_back(r);
            t = std::move(q);
        }
        std::string out;
        if (sign_ < 0) out.push_back('-');
        out += std::to_string(chunks.back());
        for (std::size_t i = chunks.size() - 1; i-- > 0;) {
            std::string part = std::to_string(chunks[i]);
            out += std::string(9 - part.size(), '0') + part;
        }
        return out;
    }

private:
    int sign_ = 0;
    std::vector<std::uint32_t> mag_;

    std::uint64_t mag_u64() const {
        std::uint64_t m = mag_.empty() ? 0 : mag_[0];
        if (mag_.size() == 2) m |= static_cast<std::uint64_t>(mag_[1]) << 32;
        return m;
    }

    void trim() {
        while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
        if (mag_.empty()) sign_ = 0;
    }

    void mul_small_inplace(std::uint32_t m) {
        std::uint64_t carry = 0;
        for (auto& limb : mag_) {
            std::uint64_t cur = static_cast<std::uint64_t>(limb) * m + carry;
            limb = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) mag_.push_back(static_cast<std::uint32_t>(carry));
    }

    void add_small_inplace(std::uint32_t v) {
        std::uint64_t carry = v;
        for (std::size_t i = 0; carry && i < mag_.size(); ++i) {
            std::uint64_t cur = mag_[i] + carry;
            mag_[i] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) mag_.push_back(static_cast<std::uint32_t>(carry));
    }

    static int cmp_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        for (std::size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    }

    static std::vector<std::uint32_t> add_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b) {
        const auto& big = a.size() >= b.size() ? a : b;
        const auto& small = a.size() >= b.size() ? b : a;
        std::vector<std::uint32_t> r = big;
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < small.size(); ++i) {
            std::uint64_t cur = static_cast<std::uint64_t>(r[i]) + small[i] + carry;
            r[i] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        for (std::size_t i = small.size(); carry && i < r.size(); ++i) {
            std::uint64_t cur = static_cast<std::uint64_t>(r[i]) + carry;
            r[i] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) r.push_back(static_cast<std::uint32_t>(carry));
        return r;
    }

    // requires |a| >= |b|
    static std::vector<std::uint32_t> sub_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b) {
        std::vector<std::uint32_t> r = a;
        std::int64_t borrow = 0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            std::int64_t cur = static_cast<std::int64_t>(r[i]) - borrow -
                               (i < b.size() ? static_cast<std::int64_t>(b[i]) : 0);
            borrow = cur < 0;
            if (cur < 0) cur += (1LL << 32);
            r[i] = static_cast<std::uint32_t>(cur);
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }
};

} // namespace diophantus

#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace veerflow {

// Arbitrary-precision unsigned integer on 32-bit limbs, little-endian.
// Sized for exact cycle counting and matrix powers at desk scale, not for
// cryptographic workloads.
class BigNat {
public:
    BigNat() = default;
    BigNat(std::uint64_t v) {
        while (v) {
            limbs_.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
            v >>= 32;
        }
    }

    bool is_zero() const { return limbs_.empty(); }

    static int cmp(const BigNat& a, const BigNat& b) {
        if (a.limbs_.size() != b.limbs_.size())
            return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
        for (std::size_t i = a.limbs_.size(); i-- > 0;)
            if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
        return 0;
    }
    bool operator==(const BigNat& o) const { return cmp(*this, o) == 0; }
    std::strong_ordering operator<=>(const BigNat& o) const {
        int c = cmp(*this, o);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    BigNat& operator+=(const BigNat& o) {
        std::uint64_t carry = 0;
        std::size_t n = std::max(limbs_.size(), o.limbs_.size());
        limbs_.resize(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t s = carry + limbs_[i] + (i < o.limbs_.size() ? o.limbs_[i] : 0);
            limbs_[i] = static_cast<std::uint32_t>(s & 0xffffffffu);
            carry = s >> 32;
        }
        if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
        return *this;
    }
    friend BigNat operator+(BigNat a, const BigNat& b) { return a += b; }

    // requires *this >= o
    BigNat& operator-=(const BigNat& o) {
        if (cmp(*this, o) < 0) throw std::underflow_error("BigNat subtraction underflow");
        std::int64_t borrow = 0;
        for (std::size_t i = 0; i < limbs_.size(); ++i) {
            std::int64_t d = static_cast<std::int64_t>(limbs_[i]) - borrow -
                             (i < o.limbs_.size() ? o.limbs_[i] : 0);
            borrow = d < 0;
            if (d < 0) d += (std::int64_t(1) << 32);
            limbs_[i] = static_cast<std::uint32_t>(d);
        }
        trim();
        return *this;
    }
    friend BigNat operator-(BigNat a, const BigNat& b) { return a -= b; }

    friend BigNat operator*(const BigNat& a, const BigNat& b) {
        if (a.is_zero() || b.is_zero()) return BigNat();
        BigNat r;
        r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
        for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
            std::uint64_t carry = 0;
            for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
                std::uint64_t cur = r.limbs_[i + j] +
                                    std::uint64_t(a.limbs_[i]) * b.limbs_[j] + carry;
                r.limbs_[i + j] = static_cast<std::uint32_t>(cur & 0xffffffffu);
                carry = cur >> 32;
            }
            std::size_t k = i + b.limbs_.size();
            while (carry) {
                std::uint64_t cur = r.limbs_[k] + carry;
                r.limbs_[k] = static_cast<std::uint32_t>(cur & 0xffffffffu);
                carry = cur >> 32;
                ++k;
            }
        }
        r.trim();
        return r;
    }
    BigNat& operator*=(const BigNat& o) { return *this = *this * o; }

    // schoolbook long division; returns quotient, stores remainder in rem
    static BigNat divmod(const BigNat& a, const BigNat& b, BigNat& rem) {
        if (b.is_zero()) throw std::domain_error("BigNat division by zero");
        if (cmp(a, b) < 0) {
            rem = a;
            return BigNat();
        }
        BigNat q, r;
        q.limbs_.assign(a.limbs_.size(), 0);
        for (std::size_t i = a.limbs_.size(); i-- > 0;) {
            r.shift_left_limb();
            r.limbs_[0] = a.limbs_[i];
            r.trim();
            // binary search the quotient limb
            std::uint64_t lo = 0, hi = 0xffffffffu, digit = 0;
            while (lo <= hi) {
                std::uint64_t mid = lo + (hi - lo) / 2;
                if (cmp(b * BigNat(mid), r) <= 0) {
                    digit = mid;
                    lo = mid + 1;
                } else {
                    if (mid == 0) break;
                    hi = mid - 1;
                }
            }
            q.limbs_[i] = static_cast<std::uint32_t>(digit);
            r -= b * BigNat(digit);
        }
        q.trim();
        rem = r;
        return q;
    }
    friend BigNat operator/(const BigNat& a, const BigNat& b) {
        BigNat r;
        return divmod(a, b, r);
    }
    friend BigNat operator%(const BigNat& a, const BigNat& b) {
        BigNat r;
        divmod(a, b, r);
        return r;
    }

    static BigNat gcd(BigNat a, BigNat b) {
        while (!b.is_zero()) {
            BigNat r = a % b;
            a = b;
            b = r;
        }
        return a;
    }

    std::size_t bit_length() const {
        if (limbs_.empty()) return 0;
        std::uint32_t top = limbs_.back();
        std::size_t bits = (limbs_.size() - 1) * 32;
        while (top) {
            ++bits;
            top >>= 1;
        }
        return bits;
    }

    // natural log; -inf for zero
    double log() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        std::size_t bits = bit_length();
        // top 64 bits as mantissa
        double mant = 0;
        std::size_t start = bits > 64 ? bits - 64 : 0;
        for (std::size_t i = start; i < bits; ++i)
            mant = mant + (get_bit(i) ? std::ldexp(1.0, int(i - start)) : 0.0);
        return std::log(mant) + double(start) * std::log(2.0);
    }

    double to_double() const {
        if (is_zero()) return 0.0;
        double r = 0;
        for (std::size_t i = limbs_.size(); i-- > 0;) r = r * 4294967296.0 + limbs_[i];
        return r;
    }

    bool fits_u64() const { return limbs_.size() <= 2; }
    std::uint64_t to_u64() const {
        std::uint64_t v = 0;
        for (std::size_t i = std::min<std::size_t>(limbs_.size(), 2); i-- > 0;)
            v = (v << 32) | limbs_[i];
        return v;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        BigNat t = *this;
        std::string s;
        BigNat ten(10);
        while (!t.is_zero()) {
            BigNat r;
            t = divmod(t, ten, r);
            s.push_back(char('0' + (r.is_zero() ? 0 : r.limbs_[0])));
        }
        return std::string(s.rbegin(), s.rend());
    }

    static BigNat from_string(const std::string& s) {
        BigNat r;
        for (char c : s) {
            if (c < '0' || c > '9') throw std::invalid_argument("BigNat parse");
            r = r * BigNat(10) + BigNat(std::uint64_t(c - '0'));
        }
        return r;
    }

private:
    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    }
    void shift_left_limb() { limbs_.insert(limbs_.begin(), 0); }
    bool get_bit(std::size_t i) const {
        std::size_t limb = i / 32;
        return limb < limbs_.size() && ((limbs_[limb] >> (i % 32)) & 1u);
    }

    std::vector<std::uint32_t> limbs_;
};

// Signed arbitrary-precision integer.
class BigInt {
public:
    BigInt() = default;
    BigInt(std::int64_t v) : neg_(v < 0), mag_(v < 0 ? std::uint64_t(-(v + 1)) + 1 : std::uint64_t(v)) {}
    BigInt(BigNat mag, bool neg = false) : neg_(neg && !mag.is_zero()), mag_(std::move(mag)) {}

    bool is_zero() const { return mag_.is_zero(); }
    int sign() const { return mag_.is_zero() ? 0 : (neg_ ? -1 : 1); }
    const BigNat& mag() const { return mag_; }
    BigInt operator-() const { return BigInt(mag_, !neg_); }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.neg_ == b.neg_) return BigInt(a.mag_ + b.mag_, a.neg_);
        int c = BigNat::cmp(a.mag_, b.mag_);
        if (c == 0) return BigInt();
        if (c > 0) return BigInt(a.mag_ - b.mag_, a.neg_);
        return BigInt(b.mag_ - a.mag_, b.neg_);
    }
    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }
    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        return BigInt(a.mag_ * b.mag_, a.neg_ != b.neg_);
    }
    BigInt& operator+=(const BigInt& o) { return *this = *this + o; }
    BigInt& operator-=(const BigInt& o) { return *this = *this - o; }
    BigInt& operator*=(const BigInt& o) { return *this = *this * o; }

    // exact division (asserts no remainder in debug use); truncating otherwise
    friend BigInt operator/(const BigInt& a, const BigInt& b) {
        BigNat r;
        BigNat q = BigNat::divmod(a.mag_, b.mag_, r);
        return BigInt(q, a.neg_ != b.neg_);
    }

    static int cmp(const BigInt& a, const BigInt& b) {
        if (a.sign() != b.sign()) return a.sign() < b.sign() ? -1 : 1;
        int c = BigNat::cmp(a.mag_, b.mag_);
        return a.sign() >= 0 ? c : -c;
    }
    bool operator==(const BigInt& o) const { return cmp(*this, o) == 0; }
    std::strong_ordering operator<=>(const BigInt& o) const {
        int c = cmp(*this, o);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    static BigInt gcd(const BigInt& a, const BigInt& b) {
        return BigInt(BigNat::gcd(a.mag_, b.mag_), false);
    }

    double to_double() const { return (neg_ ? -1.0 : 1.0) * mag_.to_double(); }
    bool fits_i64() const {
        return mag_.fits_u64() && mag_.to_u64() <= (neg_ ? std::uint64_t(1) << 63 : (std::uint64_t(1) << 63) - 1);
    }
    std::int64_t to_i64() const {
        std::uint64_t m = mag_.to_u64();
        return neg_ ? -static_cast<std::int64_t>(m) : static_cast<std::int64_t>(m);
    }
    std::string to_string() const { return (neg_ ? "-" : "") + mag_.to_string(); }
    static BigInt from_string(const std::string& s) {
        if (!s.empty() && (s[0] == '-' || s[0] == '+'))
            return BigInt(BigNat::from_string(s.substr(1)), s[0] == '-');
        return BigInt(BigNat::from_string(s), false);
    }

private:
    bool neg_ = false;
    BigNat mag_;
};

// Exact rational with normalized (den > 0, gcd = 1) representation.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t v) : num_(v), den_(1) {}
    Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }
    Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    int sign() const { return num_.sign(); }
    bool is_zero() const { return num_.is_zero(); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw std::domain_error("Rational division by zero");
        return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }
    Rational operator-() const { return Rational(-num_, den_); }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    static int cmp(const Rational& a, const Rational& b) {
        return BigInt::cmp(a.num_ * b.den_, b.num_ * a.den_);
    }
    bool operator==(const Rational& o) const { return cmp(*this, o) == 0; }
    std::strong_ordering operator<=>(const Rational& o) const {
        int c = cmp(*this, o);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    double to_double() const { return num_.to_double() / den_.to_double(); }
    std::string to_string() const {
        if (den_ == BigInt(1)) return num_.to_string();
        return num_.to_string() + "/" + den_.to_string();
    }

private:
    void normalize() {
        if (den_.is_zero()) throw std::domain_error("Rational with zero denominator");
        if (den_.sign() < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_.is_zero()) {
            den_ = BigInt(1);
            return;
        }
        BigInt g = BigInt::gcd(num_, den_);
        num_ = num_ / g;
        den_ = den_ / g;
    }

    BigInt num_;
    BigInt den_;
};

}  // namespace veerflow

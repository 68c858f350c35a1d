#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace cubehom {

/// Exact rational number, always in lowest terms with a positive denominator.
///
/// Values whose numerator and denominator fit in a signed 64-bit word are
/// stored inline; anything larger is promoted to a GMP rational and demoted
/// again as soon as it fits. Boundary-matrix arithmetic almost never leaves
/// the inline range, so the common case costs a few integer operations.
class Rational {
public:
    Rational() noexcept = default;
    Rational(std::int64_t value); // NOLINT(google-explicit-constructor)
    Rational(std::int64_t num, std::int64_t den);
    explicit Rational(const mpq_class& value);

    Rational(const Rational& other);
    Rational(Rational&&) noexcept = default;
    Rational& operator=(const Rational& other);
    Rational& operator=(Rational&&) noexcept = default;
    ~Rational() = default;

    bool is_zero() const noexcept { return !big_ && num_ == 0; }
    bool is_integer() const noexcept;
    /// -1, 0 or +1.
    int sign() const noexcept;
    bool is_small() const noexcept { return !big_; }
    /// Inline numerator and denominator; only meaningful when is_small().
    std::int64_t small_num() const noexcept { return num_; }
    std::int64_t small_den() const noexcept { return den_; }

    mpq_class to_mpq() const;
    mpz_class numerator() const;
    mpz_class denominator() const;

    /// "p" for integers, "p/q" otherwise.
    std::string to_string() const;
    static Rational parse(std::string_view text);

    /// Bit length of |numerator| plus bit length of the denominator; used to
    /// prefer well-conditioned pivots.
    std::size_t height() const;
    std::size_t hash() const;

    Rational operator-() const;
    Rational abs() const { return sign() < 0 ? -*this : *this; }
    Rational& operator+=(const Rational& rhs);
    Rational& operator-=(const Rational& rhs);
    Rational& operator*=(const Rational& rhs);
    Rational& operator/=(const Rational& rhs);

    friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
    friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
    friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
    friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

    friend bool operator==(const Rational& a, const Rational& b);
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    void assign(mpq_class&& value);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    std::unique_ptr<mpq_class> big_;
};

} // namespace cubehom

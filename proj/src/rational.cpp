#include "cubehom/rational.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

#include "cubehom/errors.hpp"

namespace cubehom {

namespace {

constexpr std::int64_t int64_min = std::numeric_limits<std::int64_t>::min();

bool fits_small(const mpz_class& z) { return mpz_fits_slong_p(z.get_mpz_t()) && z.get_si() != int64_min; }

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

bool mul_ok(std::int64_t a, std::int64_t b, std::int64_t& out) {
    return !__builtin_mul_overflow(a, b, &out) && out != int64_min;
}

bool add_ok(std::int64_t a, std::int64_t b, std::int64_t& out) {
    return !__builtin_add_overflow(a, b, &out) && out != int64_min;
}

mpq_class make_mpq(std::int64_t num, std::int64_t den) {
    mpq_class q{mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den))};
    q.canonicalize();
    return q;
}

} // namespace

Rational::Rational(std::int64_t value) {
    if (value == int64_min) {
        assign(make_mpq(value, 1));
    } else {
        num_ = value;
    }
}

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw ContractError("Rational with zero denominator");
    if (num == int64_min || den == int64_min) {
        assign(make_mpq(num, den));
        return;
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = gcd64(num, den);
    num_ = num / g;
    den_ = den / g;
}

Rational::Rational(const mpq_class& value) {
    mpq_class copy(value);
    copy.canonicalize();
    assign(std::move(copy));
}

Rational::Rational(const Rational& other)
    : num_(other.num_), den_(other.den_), big_(other.big_ ? std::make_unique<mpq_class>(*other.big_) : nullptr) {}

Rational& Rational::operator=(const Rational& other) {
    if (this != &other) {
        num_ = other.num_;
        den_ = other.den_;
        big_ = other.big_ ? std::make_unique<mpq_class>(*other.big_) : nullptr;
    }
    return *this;
}

void Rational::assign(mpq_class&& value) {
    if (fits_small(value.get_num()) && fits_small(value.get_den())) {
        num_ = value.get_num().get_si();
        den_ = value.get_den().get_si();
        big_.reset();
    } else {
        num_ = 0;
        den_ = 1;
        if (big_) {
            *big_ = std::move(value);
        } else {
            big_ = std::make_unique<mpq_class>(std::move(value));
        }
    }
}

bool Rational::is_integer() const noexcept { return big_ ? big_->get_den() == 1 : den_ == 1; }

int Rational::sign() const noexcept {
    if (big_) return sgn(*big_);
    return (num_ > 0) - (num_ < 0);
}

mpq_class Rational::to_mpq() const { return big_ ? *big_ : make_mpq(num_, den_); }

mpz_class Rational::numerator() const { return big_ ? mpz_class(big_->get_num()) : mpz_class(static_cast<long>(num_)); }

mpz_class Rational::denominator() const {
    return big_ ? mpz_class(big_->get_den()) : mpz_class(static_cast<long>(den_));
}

std::string Rational::to_string() const {
    if (big_) return big_->get_str();
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
    mpq_class q;
    if (text.empty() || q.set_str(std::string(text), 10) != 0) {
        throw InputError("invalid rational '" + std::string(text) + "'");
    }
    if (q.get_den() == 0) throw InputError("invalid rational '" + std::string(text) + "' (zero denominator)");
    return Rational(q);
}

std::size_t Rational::height() const {
    if (big_) return mpz_sizeinbase(big_->get_num_mpz_t(), 2) + mpz_sizeinbase(big_->get_den_mpz_t(), 2);
    auto bits = [](std::int64_t v) -> std::size_t {
        const auto u = static_cast<std::uint64_t>(v < 0 ? -v : v);
        return u == 0 ? 1 : 64 - static_cast<std::size_t>(__builtin_clzll(u));
    };
    return bits(num_) + bits(den_);
}

std::size_t Rational::hash() const {
    if (big_) return std::hash<std::string>{}(big_->get_str());
    const auto h = static_cast<std::uint64_t>(num_) * 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(den_);
    return static_cast<std::size_t>(h ^ (h >> 29));
}

Rational Rational::operator-() const {
    Rational out;
    if (big_) {
        out.assign(-*big_);
    } else {
        out.num_ = -num_;
        out.den_ = den_;
    }
    return out;
}

Rational& Rational::operator+=(const Rational& rhs) {
    if (!big_ && !rhs.big_) {
        if (den_ == 1 && rhs.den_ == 1) {
            std::int64_t s;
            if (add_ok(num_, rhs.num_, s)) {
                num_ = s;
                return *this;
            }
        } else {
            // Knuth 4.5.1: the result's gcd divides g.
            const std::int64_t g = gcd64(den_, rhs.den_);
            const std::int64_t b1 = den_ / g;
            const std::int64_t d1 = rhs.den_ / g;
            std::int64_t t1, t2, num, den;
            if (mul_ok(num_, d1, t1) && mul_ok(rhs.num_, b1, t2) && add_ok(t1, t2, num) && mul_ok(b1, rhs.den_, den)) {
                const std::int64_t g2 = gcd64(num, g);
                if (num == 0) {
                    num_ = 0;
                    den_ = 1;
                } else {
                    num_ = num / g2;
                    den_ = den / g2;
                }
                return *this;
            }
        }
    }
    assign(to_mpq() + rhs.to_mpq());
    return *this;
}

Rational& Rational::operator-=(const Rational& rhs) { return *this += -rhs; }

Rational& Rational::operator*=(const Rational& rhs) {
    if (!big_ && !rhs.big_) {
        if (num_ == 0 || rhs.num_ == 0) {
            num_ = 0;
            den_ = 1;
            return *this;
        }
        const std::int64_t g1 = gcd64(num_, rhs.den_);
        const std::int64_t g2 = gcd64(rhs.num_, den_);
        std::int64_t num, den;
        if (mul_ok(num_ / g1, rhs.num_ / g2, num) && mul_ok(den_ / g2, rhs.den_ / g1, den)) {
            num_ = num;
            den_ = den;
            return *this;
        }
    }
    assign(to_mpq() * rhs.to_mpq());
    return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
    if (rhs.is_zero()) throw ContractError("Rational division by zero");
    if (!rhs.big_) {
        Rational inverse;
        inverse.num_ = rhs.num_ < 0 ? -rhs.den_ : rhs.den_;
        inverse.den_ = rhs.num_ < 0 ? -rhs.num_ : rhs.num_;
        return *this *= inverse;
    }
    assign(to_mpq() / rhs.to_mpq());
    return *this;
}

bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    // canonical forms are unique, and a demoted value is never stored big
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_ && a.den_ == 1 && b.den_ == 1) return a.num_ <=> b.num_;
    const int c = cmp(a.to_mpq(), b.to_mpq());
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

} // namespace cubehom

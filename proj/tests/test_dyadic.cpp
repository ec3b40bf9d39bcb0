#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace aqir;
using testing_support::pow2_q;
using testing_support::Q;
using testing_support::Z;
using testing_support::q_of;

namespace {

Dyadic dy(const char* text) { return parse_dyadic(text); }
DyadicInterval iv(const char* lo, const char* hi) { return {dy(lo), dy(hi)}; }

bool on_grid(const Dyadic& x, Precision rho) { return x.is_zero() || x.exponent() >= -rho.bits(); }

Dyadic random_dyadic(std::mt19937_64& gen, int bits, int max_shift) {
    Integer m;
    for (int i = 0; i < bits; i += 32) {
        m <<= 32;
        m += static_cast<unsigned long>(gen() & 0xffffffffU);
    }
    if (gen() & 1U) m = -m;
    return Dyadic(m, -static_cast<std::int64_t>(gen() % static_cast<unsigned>(max_shift)));
}

} // namespace

TEST(Dyadic, CanonicalForm) {
    const Dyadic x(Integer(12), 0);
    EXPECT_EQ(x.mantissa(), 3);
    EXPECT_EQ(x.exponent(), 2);
    const Dyadic zero(Integer(0), 17);
    EXPECT_EQ(zero.exponent(), 0);
    EXPECT_TRUE(zero.is_zero());
    EXPECT_EQ(Dyadic(Integer(6), -3), dy("0.75"));
}

TEST(Dyadic, ExactArithmetic) {
    const Dyadic a = dy("1.375");
    const Dyadic b = dy("-0.0625");
    EXPECT_EQ(q_of(a + b), Q(1.375) + Q(-0.0625));
    EXPECT_EQ(q_of(a - b), Q(1.375) - Q(-0.0625));
    EXPECT_EQ(q_of(a * b), Q(1.375) * Q(-0.0625));
    EXPECT_EQ(q_of(midpoint(a, b)), (Q(1.375) + Q(-0.0625)) / 2);
    EXPECT_LT(b, a);
    EXPECT_EQ(a.floor_log2(), 0);
    EXPECT_EQ(dy("0.0625").floor_log2(), -4);
}

TEST(Dyadic, RoundDownExamples) {
    EXPECT_EQ(round_down(Rational(3, 10), Precision(2)), dy("0.25"));
    EXPECT_EQ(round_down(Rational(-3, 10), Precision(2)), dy("-0.5"));
    EXPECT_EQ(round_down(dy("0.25"), Precision(3)), dy("0.25"));
}

TEST(Dyadic, RoundUpExamples) {
    EXPECT_EQ(round_up(Rational(3, 10), Precision(2)), dy("0.5"));
    EXPECT_EQ(round_up(dy("0.25"), Precision(3)), dy("0.25"));
    EXPECT_EQ(round_up(Rational(-3, 10), Precision(2)), dy("-0.25"));
}

TEST(Dyadic, RoundingGapsProperty) {
    std::mt19937_64 gen(11);
    for (int t = 0; t < 2000; ++t) {
        const Q x(Z(static_cast<long>(gen() % 2000001) - 1000000), Z(static_cast<long>(gen() % 9999) + 1));
        Q xc = x;
        xc.canonicalize();
        const Precision rho(2 + static_cast<std::int64_t>(gen() % 40));
        const Q lo = q_of(round_down(xc, rho));
        const Q hi = q_of(round_up(xc, rho));
        ASSERT_LE(lo, xc);
        ASSERT_GE(hi, xc);
        ASSERT_LT(xc - lo, pow2_q(-rho.bits()));
        ASSERT_LT(hi - xc, pow2_q(-rho.bits()));
        ASSERT_TRUE(on_grid(round_down(xc, rho), rho));
        ASSERT_TRUE(on_grid(round_up(xc, rho), rho));
    }
}

TEST(Interval, AddExamples) {
    EXPECT_EQ(interval_add(iv("1", "2"), iv("3", "4"), Precision(2)), iv("4", "6"));
    // [0.25,0.25] + [0.3,0.3]: 0.3 enters as its own enclosure [0.25, 0.5]
    const DyadicInterval point{round_down(Rational(3, 10), Precision(2)), round_up(Rational(3, 10), Precision(2))};
    EXPECT_EQ(interval_add(iv("0.25", "0.25"), point, Precision(2)), iv("0.5", "0.75"));
    const DyadicInterval x = iv("0.3125", "0.3125");
    EXPECT_TRUE(interval_add(x, interval_neg(x), Precision(2)).contains(Dyadic(0)));
}

TEST(Interval, MulExamples) {
    EXPECT_EQ(interval_mul(iv("1", "2"), iv("-3", "-1"), Precision(64)), iv("-6", "-1"));
    EXPECT_EQ(interval_mul(iv("0", "0"), iv("-3.5", "7"), Precision(4)), iv("0", "0"));
    EXPECT_EQ(interval_mul(iv("-1", "1"), iv("-1", "1"), Precision(4)), iv("-1", "1"));
}

TEST(Interval, InvExamples) {
    EXPECT_EQ(interval_inv(iv("2", "4"), Precision(2)), iv("0.25", "0.5"));
    EXPECT_EQ(interval_inv(iv("1", "1"), Precision(8)), iv("1", "1"));
    EXPECT_EQ(interval_inv(iv("-4", "-2"), Precision(2)), iv("-0.5", "-0.25"));
    EXPECT_THROW(interval_inv(iv("-1", "2"), Precision(4)), DivisionByIntervalContainingZero);
    EXPECT_THROW(interval_inv(iv("0", "2"), Precision(4)), DivisionByIntervalContainingZero);
}

TEST(Interval, SignExamples) {
    EXPECT_EQ(interval_sign(iv("0.25", "0.5")), 1);
    EXPECT_EQ(interval_sign(iv("-0.5", "0.25")), 0);
    EXPECT_EQ(interval_sign(iv("0", "0")), 0);
    EXPECT_EQ(interval_sign(iv("-3", "-0.125")), -1);
}

TEST(Interval, EnclosureAndGridProperty) {
    std::mt19937_64 gen(5);
    for (int t = 0; t < 3000; ++t) {
        const Precision rho(2 + static_cast<std::int64_t>(gen() % 30));
        Dyadic a1 = random_dyadic(gen, 32, 40);
        Dyadic a2 = random_dyadic(gen, 32, 40);
        Dyadic b1 = random_dyadic(gen, 32, 40);
        Dyadic b2 = random_dyadic(gen, 32, 40);
        if (a2 < a1) std::swap(a1, a2);
        if (b2 < b1) std::swap(b1, b2);
        const DyadicInterval A{a1, a2};
        const DyadicInterval B{b1, b2};
        const auto check = [&](const DyadicInterval& r, const Q& value) {
            ASSERT_LE(q_of(r.lo), value);
            ASSERT_GE(q_of(r.hi), value);
            ASSERT_TRUE(on_grid(r.lo, rho));
            ASSERT_TRUE(on_grid(r.hi, rho));
        };
        const DyadicInterval sum = interval_add(A, B, rho);
        const DyadicInterval prod = interval_mul(A, B, rho);
        for (const Dyadic& x : {a1, a2, midpoint(a1, a2)}) {
            for (const Dyadic& y : {b1, b2, midpoint(b1, b2)}) {
                check(sum, q_of(x) + q_of(y));
                check(prod, q_of(x) * q_of(y));
                check(interval_sub(A, B, rho), q_of(x) - q_of(y));
            }
        }
        if (!round_out(B, rho).contains_zero()) {
            const DyadicInterval inv = interval_inv(B, rho);
            for (const Dyadic& y : {b1, b2, midpoint(b1, b2)}) {
                Q r = 1 / q_of(y);
                r.canonicalize();
                check(inv, r);
            }
        }
    }
}

TEST(Interval, WidthNonIncreasingInPrecision) {
    std::mt19937_64 gen(9);
    for (int t = 0; t < 500; ++t) {
        const DyadicInterval A{random_dyadic(gen, 40, 50), random_dyadic(gen, 40, 50)};
        const DyadicInterval Ao = A.lo < A.hi ? A : DyadicInterval{A.hi, A.lo};
        const DyadicInterval B{Dyadic(Integer(3), -1), random_dyadic(gen, 20, 5).abs() + Dyadic(2)};
        Dyadic last;
        for (std::int64_t r = 2; r <= 128; r *= 2) {
            const DyadicInterval x = interval_mul(interval_add(Ao, B, Precision(r)), interval_inv(B, Precision(r)), Precision(r));
            if (r > 2) {
                ASSERT_LE(x.width(), last);
            }
            last = x.width();
        }
    }
}

TEST(Dyadic, RoundToIntegerExamples) {
    EXPECT_EQ(round_to_integer(Rational(13333, 10000)), 1);
    EXPECT_EQ(round_to_integer(Rational(128, 10)), 13);
    EXPECT_EQ(round_to_integer(dy("2.5")), 3);
    EXPECT_EQ(round_to_integer(dy("-2.5")), -3);
    EXPECT_EQ(round_to_integer(dy("-2.25")), -2);
    EXPECT_EQ(round_to_integer(Rational(4, 3)), 1);
}

TEST(Dyadic, TextForms) {
    EXPECT_EQ(to_string(dy("0.75")), "3*2^-2");
    EXPECT_EQ(to_string(Dyadic(0)), "0*2^0");
    EXPECT_EQ(to_string(Dyadic(-40)), "-5*2^3");
    EXPECT_EQ(to_decimal_exact(dy("-1.375")), "-1.375");
    EXPECT_EQ(to_decimal(Rational(1, 3), 4, DecimalRounding::down), "0.3333");
    EXPECT_EQ(to_decimal(Rational(1, 3), 4, DecimalRounding::up), "0.3334");
    EXPECT_EQ(to_decimal(Rational(-1, 3), 2, DecimalRounding::down), "-0.34");
    EXPECT_EQ(dy("3*2^-2"), dy("0.75"));
    EXPECT_EQ(dy("-5*2^3"), Dyadic(-40));
    EXPECT_EQ(dy("3/8"), dy("0.375"));
    EXPECT_THROW(dy("0.1"), ParseError);
    EXPECT_THROW(dy("1/3"), ParseError);
    EXPECT_THROW(dy("abc"), ParseError);
    EXPECT_EQ(parse_decimal("2.5e-1"), Rational(1, 4));
    EXPECT_EQ(parse_rational("-6/4"), Rational(-3, 2));
}

TEST(Dyadic, TextRoundTripProperty) {
    std::mt19937_64 gen(3);
    for (int t = 0; t < 1000; ++t) {
        const Dyadic x = random_dyadic(gen, 96, 200);
        ASSERT_EQ(parse_dyadic(to_string(x)), x);
        ASSERT_EQ(parse_dyadic(to_decimal_exact(x)), x);
    }
}

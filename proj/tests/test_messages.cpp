#include <cmath>

#include <doctest.h>

#include "personrank/errors.hpp"
#include "personrank/messages.hpp"
#include "personrank/rng.hpp"

using namespace personrank;

TEST_CASE("msg_spatial hand values") {
    const std::vector<double> ones(7, 1.0), zeros(7, 0.0);
    CHECK(msg_spatial(ones, ones, std::vector<double>(7, 1.0)) == doctest::Approx(7.0));
    CHECK(msg_spatial(ones, zeros, std::vector<double>(7, 0.0)) == doctest::Approx(0.0));

    std::vector<double> phi_j(7, 0.0);
    phi_j[0] = 1.0;
    std::vector<double> w(7, 0.0);
    w[0] = 2.0;
    CHECK(msg_spatial(zeros, phi_j, w) == doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-10));

    CHECK_THROWS_AS(msg_spatial(zeros, phi_j, {1.0, 2.0}), Error);
}

TEST_CASE("msg_action hand values") {
    const std::vector<double> a(3, 0.5);
    CHECK(msg_action(a, a, std::vector<double>(3, 1.0)) == doctest::Approx(3.0));
    CHECK(msg_action(a, a, std::vector<double>(3, 0.0)) == doctest::Approx(0.0));
    // diff = [ln 2, ln 3], w = [1, 1] -> 2 + 3
    CHECK(msg_action({0.0, 0.0}, {std::log(2.0), std::log(3.0)}, {1.0, 1.0}) ==
          doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("msg_appearance hand values and symmetry") {
    const std::vector<double> x{1.0, 2.0}, y{0.0, 2.5};
    CHECK(msg_appearance(x, x, {3.0, 4.0}) == doctest::Approx(0.0));
    CHECK(msg_appearance(x, y, {1.0, 2.0}) == doctest::Approx(2.0)); // 1*1 + 2*0.5
    CHECK(msg_appearance(x, y, {1.0, 2.0}) == msg_appearance(y, x, {1.0, 2.0}));
}

TEST_CASE("msg_attention hand values") {
    // v aligned with the offset direction: exp(0) = 1.
    const std::vector<double> looker_aligned{0.0, 1.0, 0.6, 0.8};
    const std::vector<double> target{3.0, 5.0, 0.0, 0.0}; // f_j - f_i = [3, 4]
    CHECK(msg_attention(looker_aligned, target, 1.0) == doctest::Approx(1.0).epsilon(1e-12));

    // Antiparallel gaze: exp(-2).
    const std::vector<double> looker_opposed{0.0, 1.0, -0.6, -0.8};
    CHECK(msg_attention(looker_opposed, target, 1.0) ==
          doctest::Approx(std::exp(-2.0)).epsilon(1e-10));

    // v = [0, 1], direction [0.6, 0.8] -> exp(-0.2).
    const std::vector<double> looker_up{0.0, 1.0, 0.0, 1.0};
    CHECK(msg_attention(looker_up, target, 1.0) == doctest::Approx(std::exp(-0.2)).epsilon(1e-10));
    CHECK(msg_attention(looker_up, target, 1.0) == doctest::Approx(0.81873).epsilon(1e-4));

    // Coincident f's: neutral value.
    const std::vector<double> same{0.0, 1.0, 1.0, 0.0};
    CHECK(msg_attention(same, {0.0, 1.0, 0.3, 0.9}, 1.0) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("msg_fused hand values") {
    CHECK(msg_fused({0.1, 0.2}, {0.1, 0.2}, {1.0, 1.0}) == doctest::Approx(0.0));
    // lambda ratios 2 and 4 per channel, q = [1, 1]: ln 8.
    const std::vector<double> li{std::log(0.1), std::log(0.05)};
    const std::vector<double> lj{std::log(0.2), std::log(0.2)};
    CHECK(msg_fused(li, lj, {1.0, 1.0}) == doctest::Approx(std::log(8.0)).epsilon(1e-12));
}

TEST_CASE("message properties on random inputs") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int dim = rng.uniform_int(1, 6);
        std::vector<double> a(dim), b(dim), w(dim), shift(dim);
        for (int k = 0; k < dim; ++k) {
            a[k] = rng.uniform(-2, 2);
            b[k] = rng.uniform(-2, 2);
            w[k] = rng.uniform(-1, 1);
            shift[k] = rng.uniform(-3, 3);
        }

        // appearance symmetric, fused antisymmetric
        CHECK(msg_appearance(a, b, w) == doctest::Approx(msg_appearance(b, a, w)).epsilon(1e-12));
        CHECK(msg_fused(a, b, w) == doctest::Approx(-msg_fused(b, a, w)).epsilon(1e-12));

        // shared shift leaves every message unchanged
        std::vector<double> a2(dim), b2(dim);
        for (int k = 0; k < dim; ++k) {
            a2[k] = a[k] + shift[k];
            b2[k] = b[k] + shift[k];
        }
        CHECK(msg_action(a, b, w) == doctest::Approx(msg_action(a2, b2, w)).epsilon(1e-9));
        CHECK(msg_appearance(a, b, w) == doctest::Approx(msg_appearance(a2, b2, w)).epsilon(1e-9));
        CHECK(msg_fused(a, b, w) == doctest::Approx(msg_fused(a2, b2, w)).epsilon(1e-9));
    }
}

TEST_CASE("msg_attention stays inside [e^-2, 1]") {
    Rng rng(13);
    for (int trial = 0; trial < 500; ++trial) {
        const double theta = rng.uniform(0, 2 * M_PI);
        const std::vector<double> att_i{rng.uniform(-100, 100), rng.uniform(0.001, 0.1),
                                        std::sin(theta), std::cos(theta)};
        const std::vector<double> att_j{rng.uniform(-100, 100), rng.uniform(0.001, 0.1), 0.0, 1.0};
        const double value = msg_attention(att_i, att_j, rng.uniform(0.1, 5.0));
        CHECK(value >= std::exp(-2.0) - 1e-12);
        CHECK(value <= 1.0 + 1e-12);
    }
}

TEST_CASE("one-hot spatial message is strictly monotone in the active diff") {
    std::vector<double> w(7, 0.0);
    w[2] = 1.0;
    const std::vector<double> zero(7, 0.0);
    double prev = -1.0;
    for (double d = -3.0; d <= 3.0; d += 0.25) {
        std::vector<double> phi_j(7, 0.0);
        phi_j[2] = d;
        const double value = msg_spatial(zero, phi_j, w);
        CHECK(value > prev);
        prev = value;
    }
}

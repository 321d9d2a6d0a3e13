#include <random>

#include "catch_amalgamated.hpp"
#include "reference_values.hpp"
#include "su11/correlations.hpp"

using namespace su11;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

InterferometerParams balanced(double g, double alpha, double theta_alpha, double phi, LossParams loss = {},
                              double theta1 = 0.0) {
    return InterferometerParams::balanced_setup(g, theta1, CoherentInput(alpha, theta_alpha), phi, loss);
}

} // namespace

TEST_CASE("lcc examples") {
    CHECK(lcc(0.0, 1.0, 1.0) == 0.0);
    CHECK(lcc(0.25, 0.25, 0.25) == 1.0);
    CHECK_THAT(lcc(-0.2, 0.25, 0.25), WithinAbs(-0.8, 1e-15));
    CHECK_THROWS_WITH(lcc(0.1, 0.0, 1.0), "degenerate marginal");
    CHECK_THROWS_WITH(lcc(0.1, 1.0, -1.0), "degenerate marginal");
    CHECK(lcc(1.0 + 5e-10, 1.0, 1.0) == 1.0);
    CHECK_THROWS_AS(lcc(1.0 + 1e-6, 1.0, 1.0), DomainError);
}

TEST_CASE("j_rp1 examples") {
    CHECK_THAT(j_rp1(2.0, 0.0, 0.0).jn1, WithinAbs(1.0, 1e-12));
    const auto q = j_rp1(2.0, kPi / 2, 3.0);
    CHECK_THAT(q.jx1, WithinAbs(0.0, 1e-15));
    CHECK_THAT(q.jy1, WithinAbs(0.0, 1e-15));
    const auto r = j_rp1(2.0, 0.0, 10.0);
    CHECK_THAT(r.jx1, WithinRel(ref::kTanh4, 1e-14));
    CHECK_THAT(r.jn1, WithinRel(ref::kJn1G2, 1e-14));
    CHECK(j_rp1(0.0, 0.0, 5.0).jn1 == 0.0);
    CHECK_THROWS_AS(j_rp1(-1.0, 0.0, 0.0), DomainError);
}

TEST_CASE("j_rp1 properties") {
    for (double g : {0.1, 0.5, 1.0, 2.0, 3.0}) {
        for (double theta : {0.0, 0.4, 1.9, 3.0}) {
            const auto base = j_rp1(g, theta, 0.0);
            for (double alpha : {0.0, 1.0, 10.0}) {
                const auto r = j_rp1(g, theta, alpha);
                CHECK(r.jy1 == -r.jx1);
                CHECK(r.jx1 == base.jx1);
                CHECK(r.jn1 > 0.0);
                CHECK(std::abs(r.jn1) <= 1.0);
                CHECK(std::abs(r.jx1) <= 1.0);
            }
        }
    }
}

TEST_CASE("after RP2 with no second gain, J_x2 equals jx1") {
    // loss-free arms with g2 = 0 leave the RP1 correlation unchanged
    for (double theta1 : {0.0, 0.6}) {
        InterferometerParams p = balanced(0.8, 2.0, 0.3, 0.0, {}, theta1);
        p.rp2 = RamanGain(0.0, 0.0);
        CHECK_THAT(j_x2(p).j_value, WithinAbs(j_rp1(0.8, theta1, 2.0).jx1, 1e-12));
        CHECK_THAT(j_n2(p).j_value, WithinAbs(j_rp1(0.8, theta1, 2.0).jn1, 1e-12));
    }
}

TEST_CASE("decorrelation point") {
    for (double g : {0.5, 2.0}) {
        const auto p = balanced(g, 10.0, 0.3, 0.0);
        CHECK_THAT(j_x2(p).j_value, WithinAbs(0.0, 1e-12));
        CHECK_THAT(j_n2(p).j_value, WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("limits at phi = pi") {
    CHECK_THAT(j_x2(balanced(2.0, 10.0, 0.0, kPi)).j_value, WithinAbs(-ref::kTanh8, 1e-12));
    CHECK_THAT(j_x2_ideal(2.0, 0.0, kPi), WithinAbs(-ref::kTanh8, 1e-12));
    // the second process doubles the gain of the first at phi = pi
    CHECK_THAT(j_n2(balanced(2.0, 10.0, 0.0, kPi)).j_value, WithinAbs(ref::kJn1G4, 1e-12));
    CHECK_THAT(j_n2(balanced(2.0, 10.0, 0.0, kPi)).j_value, WithinAbs(j_rp1(4.0, 0.0, 10.0).jn1, 1e-12));
    CHECK_THAT(j_n2_ideal(2.0, 10.0, kPi), WithinAbs(ref::kJn1G4, 1e-12));
    CHECK_THAT(j_n2(balanced(0.4, 0.0, 0.0, kPi)).j_value, WithinAbs(1.0, 1e-12));
}

TEST_CASE("lossless general forms match the ideal displays") {
    for (double g : {0.3, 1.0, 2.0}) {
        for (double theta1 : {0.0, 0.5}) {
            for (double phi : {0.2, 1.0, 2.5, kPi, 4.0}) {
                const auto p = balanced(g, 3.0, 0.7, phi, {}, theta1);
                CHECK_THAT(j_x2(p).j_value, WithinAbs(j_x2_ideal(g, theta1, phi), 1e-12));
                CHECK_THAT(j_n2(p).j_value, WithinAbs(j_n2_ideal(g, 3.0, phi), 1e-12));
            }
        }
    }
}

TEST_CASE("J_x2 stays in [-1, 0] for theta1 = 0") {
    for (int k = 0; k < 720; ++k) {
        const double phi = kTwoPi * k / 720.0;
        const double j = j_x2(balanced(2.0, 10.0, 0.0, phi)).j_value;
        CHECK(j <= 1e-12);
        CHECK(j >= -1.0);
    }
}

TEST_CASE("|J| <= 1 on random parameters") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> gain(0.0, 2.5);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const InterferometerParams p{RamanGain(gain(rng), angle(rng)), RamanGain(gain(rng), angle(rng)),
                                     CoherentInput(10.0 * unit(rng), angle(rng)), angle(rng),
                                     LossParams(unit(rng), 2.0 * unit(rng))};
        CHECK(std::abs(j_x2(p).j_value) <= 1.0);
        CHECK(std::abs(j_n2(p).j_value) <= 1.0);
    }
}

TEST_CASE("J_x2 approaches -1 monotonically as T falls") {
    double previous = 1.0;
    for (int k = 20; k >= 1; --k) {
        const double T = 0.05 * k;
        const double j = j_x2(balanced(2.0, 10.0, kPi / 2, 0.0, LossParams(T, 0.0))).j_value;
        CHECK(j < previous);
        previous = j;
    }
    CHECK(previous < -0.99);
}

TEST_CASE("J_n2 dips and revives as T falls") {
    std::vector<double> j;
    for (int k = 100; k >= 1; --k) {
        j.push_back(j_n2(balanced(2.0, 10.0, 0.0, 0.062, LossParams(0.01 * k, 0.0))).j_value);
    }
    const auto min_it = std::min_element(j.begin(), j.end());
    CHECK(min_it != j.begin());
    CHECK(min_it != j.end() - 1);
    CHECK(*min_it < j.front());
    CHECK(j.back() > 0.95);
}

TEST_CASE("J_n2 dips and revives as gamma_tau grows") {
    std::vector<double> j;
    for (int k = 0; k <= 100; ++k) {
        j.push_back(j_n2(balanced(2.0, 10.0, 0.0, 0.062, LossParams(1.0, 0.03 * k))).j_value);
    }
    const auto min_it = std::min_element(j.begin(), j.end());
    CHECK(min_it != j.begin());
    CHECK(min_it != j.end() - 1);
    CHECK(j.back() > 0.95);
}

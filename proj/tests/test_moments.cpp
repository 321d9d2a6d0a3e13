#include <random>

#include "catch_amalgamated.hpp"
#include "reference_values.hpp"
#include "su11/moments.hpp"

using namespace su11;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

InterferometerParams balanced(double g, double alpha, double theta_alpha, double phi, LossParams loss = {}) {
    return InterferometerParams::balanced_setup(g, 0.0, CoherentInput(alpha, theta_alpha), phi, loss);
}

InterferometerParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> gain(0.0, 2.0);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> alpha(0.0, 10.0);
    return {RamanGain(gain(rng), angle(rng)), RamanGain(gain(rng), angle(rng)), CoherentInput(alpha(rng), angle(rng)),
            angle(rng), LossParams(unit(rng), 2.0 * unit(rng))};
}

} // namespace

TEST_CASE("quadrature variance examples") {
    CHECK_THAT(quad_stats_a2(balanced(2.0, 10.0, 0.0, 0.0)).variance, WithinAbs(0.25, 1e-12));

    const auto lossy = quad_stats_a2(balanced(2.0, 10.0, 0.0, 0.0, LossParams(0.8, 0.1)));
    CHECK_THAT(lossy.variance, WithinRel(ref::kLossyQuadVar, 1e-12));

    for (double T : {1.0, 0.7, 0.2}) {
        const double phi = 0.4;
        const double theta_alpha = 0.9;
        const auto s = quad_stats_a2(balanced(0.0, 3.0, theta_alpha, phi, LossParams(T, 0.5)));
        CHECK_THAT(s.variance, WithinAbs(0.25, 1e-15));
        CHECK_THAT(s.mean, WithinAbs(std::sqrt(T) * 3.0 * std::cos(phi + theta_alpha), 1e-14));
    }
}

TEST_CASE("balanced quadrature variance display") {
    for (double g : {0.5, 1.0, 2.0}) {
        for (double T : {1.0, 0.8, 0.4}) {
            for (double gt : {0.0, 0.1, 0.5}) {
                for (double phi : {0.0, 0.3, 2.0}) {
                    const double display =
                        0.25 * (std::pow(std::sinh(2 * g), 2) * (T / 2 - std::sqrt(T) * std::exp(-gt) * std::cos(phi)) +
                                2 * std::exp(-2 * gt) * std::pow(std::sinh(g), 4) + std::cosh(2 * g));
                    const double v = quad_stats_a2(balanced(g, 1.0, 0.0, phi, LossParams(T, gt))).variance;
                    CHECK_THAT(v, WithinRel(display, 1e-12));
                }
            }
        }
    }
}

TEST_CASE("balanced quadrature slope magnitude") {
    for (double T : {1.0, 0.8}) {
        for (double phi : {0.0, 0.3, 1.0}) {
            const double theta_alpha = kPi / 2;
            const auto s = quad_stats_a2(balanced(2.0, 10.0, theta_alpha, phi, LossParams(T, 0.1)));
            const double expect = std::sqrt(T * 100.0) * ref::kCosh2 * ref::kCosh2 * std::abs(std::sin(phi + theta_alpha));
            CHECK_THAT(std::abs(s.slope), WithinRel(expect, 1e-12));
        }
    }
    const auto s = quad_stats_a2(balanced(2.0, 10.0, kPi / 2, 0.0, LossParams(0.8, 0.1)));
    CHECK_THAT(std::abs(s.slope), WithinRel(ref::kLossyHdSlope, 1e-12));
}

TEST_CASE("number statistics examples") {
    const auto s = number_stats_a2(balanced(2.0, 10.0, 0.0, 0.0));
    CHECK_THAT(s.mean, WithinRel(100.0, 1e-12));
    CHECK_THAT(s.variance, WithinRel(100.0, 1e-12));

    CHECK_THAT(number_stats_a2(balanced(2.0, 0.0, 0.0, kPi)).mean, WithinRel(ref::kSinh4Sq, 1e-12));

    const auto pass = number_stats_a2(balanced(0.0, 10.0, 0.0, 0.7));
    CHECK_THAT(pass.mean, WithinRel(100.0, 1e-14));
    CHECK(pass.slope == 0.0);

    CHECK_THAT(number_stats_b2(balanced(2.0, 10.0, 0.0, 0.0)).mean, WithinAbs(0.0, 1e-12));
    CHECK_THAT(number_stats_b2(balanced(2.0, 0.0, 0.0, kPi)).mean, WithinRel(ref::kSinh4Sq, 1e-12));

    const auto lossy = number_stats_a2(balanced(2.0, 10.0, 0.0, 0.3, LossParams(0.8, 0.1)));
    CHECK_THAT(lossy.variance, WithinRel(ref::kVarNa2Lossy, 1e-12));
}

TEST_CASE("number variance equals the displaced thermal form") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const auto p = random_params(rng);
        const auto e = compose_expansion(p);
        const double n = p.input.n_alpha();
        const double nth_a = std::norm(e.V1) + e.lang_comm * std::norm(e.v2);
        const double amp_a = std::norm(e.U1) * n;
        const double nth_b = std::norm(e.V2) + e.R * std::norm(e.v2);
        const double amp_b = std::norm(e.V2) * n;
        const double va = number_stats_a2(p).variance;
        const double vb = number_stats_b2(p).variance;
        CHECK_THAT(va, WithinRel(nth_a * (nth_a + 1) + amp_a * (2 * nth_a + 1), 1e-10));
        CHECK_THAT(vb, WithinRel(nth_b * (nth_b + 1) + amp_b * (2 * nth_b + 1), 1e-10));
    }
}

TEST_CASE("balanced number slope magnitude") {
    for (double phi : {0.1, 0.5, 2.0}) {
        for (double T : {1.0, 0.8}) {
            const double gt = 0.1;
            const auto s = number_stats_a2(balanced(2.0, 10.0, 0.0, phi, LossParams(T, gt)));
            const double expect = 0.5 * std::sqrt(T) * std::exp(-gt) * 101.0 * std::pow(std::sinh(4.0), 2) * std::abs(std::sin(phi));
            CHECK_THAT(std::abs(s.slope), WithinRel(expect, 1e-10));
        }
    }
}

TEST_CASE("covariance examples") {
    const auto transparent = balanced(2.0, 10.0, 0.3, 0.0);
    CHECK_THAT(cov_quad(transparent), WithinAbs(0.0, 1e-12));
    CHECK_THAT(cov_number(transparent), WithinAbs(0.0, 1e-12));

    // twin beams at alpha = 0, g = 1, phi = pi: cov_number = |U V|^2
    const auto twin = balanced(1.0, 0.0, 0.0, kPi);
    const auto e = compose_expansion(twin);
    CHECK_THAT(cov_number(twin), WithinRel(std::norm(e.U1 * e.V2), 1e-12));
    CHECK_THAT(cov_number(twin), WithinRel(number_stats_a2(twin).variance, 1e-12));
}

TEST_CASE("lossless quadrature variance reduction") {
    for (double g : {0.2, 1.0, 2.0}) {
        for (double phi : {0.0, 0.5, kPi, 4.0}) {
            const double expect = 0.25 * (std::pow(std::cosh(2 * g), 2) - std::pow(std::sinh(2 * g), 2) * std::cos(phi));
            CHECK_THAT(quad_stats_a2(balanced(g, 2.0, 0.0, phi)).variance, WithinAbs(expect, 1e-12 * std::max(1.0, expect)));
        }
    }
}

TEST_CASE("variances are non-negative on random parameters") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) {
        const auto p = random_params(rng);
        for (Observable o : kAllObservables) {
            CHECK(observable_stats(p, o).variance >= 0.0);
        }
    }
}

TEST_CASE("slopes match central differences of the means") {
    std::mt19937_64 rng(5);
    const double h = 1e-5;
    for (int i = 0; i < 200; ++i) {
        const auto p = random_params(rng);
        for (Observable o : kAllObservables) {
            const double analytic = observable_stats(p, o).slope;
            const double fd =
                (observable_stats(p.with_phi(p.phi + h), o).mean - observable_stats(p.with_phi(p.phi - h), o).mean) /
                (2 * h);
            const double scale = std::max(1.0, std::abs(observable_stats(p, o).mean));
            INFO("tuple " << i << " observable " << observable_token(o));
            CHECK(std::abs(analytic - fd) <= 1e-6 * std::max(std::abs(analytic), scale));
        }
    }
}

TEST_CASE("quadrature covariance equals the expansion form") {
    // fluctuations: <da db> = phase_b U1 V2 + R u2 v2 and <da db^dag> = 0
    std::mt19937_64 rng(9);
    for (int i = 0; i < 200; ++i) {
        const auto p = random_params(rng);
        const auto e = compose_expansion(p);
        const cplx ab = e.phase_b * e.U1 * e.V2 + e.R * e.u2 * e.v2;
        const double expect = 0.5 * ab.real();
        const double scale = std::max(1.0, std::norm(e.U1) + std::norm(e.V1));
        CHECK(std::abs(cov_quad(p) - expect) <= 1e-12 * scale);
    }
}

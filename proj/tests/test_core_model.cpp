#include <random>

#include "catch_amalgamated.hpp"
#include "reference_values.hpp"
#include "su11/core_model.hpp"

using namespace su11;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

InterferometerParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> gain(0.0, 2.0);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> alpha(0.0, 20.0);
    std::uniform_real_distribution<double> damping(0.0, 3.0);
    return {RamanGain(gain(rng), angle(rng)), RamanGain(gain(rng), angle(rng)), CoherentInput(alpha(rng), angle(rng)),
            angle(rng), LossParams(unit(rng), damping(rng))};
}

/// Relative check for identities whose terms grow like cosh^4 g.
double scale_of(const ModeExpansion& e) {
    return std::max({1.0, std::norm(e.U1), std::norm(e.U2)});
}

} // namespace

TEST_CASE("angles are reduced to [0, 2pi)") {
    CHECK(reduce_angle(-kPi / 2) == Catch::Approx(3 * kPi / 2));
    CHECK(reduce_angle(kTwoPi) == 0.0);
    CHECK(RamanGain(1.0, 7.0).theta() == Catch::Approx(7.0 - kTwoPi));
    CHECK(unit_phase(kPi) == cplx(-1.0, 0.0));
    CHECK(unit_phase(kPi / 2) == cplx(0.0, 1.0));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(RamanGain(-0.1, 0.0), DomainError);
    CHECK_THROWS_AS(CoherentInput(-1.0, 0.0), DomainError);
    CHECK_THROWS_AS(LossParams(1.2, 0.0), DomainError);
    CHECK_THROWS_AS(LossParams(0.5, -0.1), DomainError);
    CHECK_THROWS_AS(RamanGain(std::nan(""), 0.0), DomainError);
    CHECK(LossParams(0.8, 0.1).reflectance() == Catch::Approx(0.2));
    CHECK(CoherentInput(10.0, 0.3).n_alpha() == Catch::Approx(100.0));
}

TEST_CASE("balanced predicate") {
    const auto p = InterferometerParams::balanced_setup(2.0, 0.4, CoherentInput(1.0, 0.0), 0.0);
    CHECK(p.balanced());
    auto q = p;
    q.rp2 = RamanGain(2.0, 0.4);
    CHECK_FALSE(q.balanced());
    q.rp2 = RamanGain(1.9, 0.4 + kPi);
    CHECK_FALSE(q.balanced());
    CHECK_THROWS_AS(require_balanced(q, "test"), DomainError);
    // wraps through 2pi
    q = InterferometerParams::balanced_setup(1.0, 5.0, CoherentInput(), 0.0);
    CHECK(q.balanced());
}

TEST_CASE("raman_coeffs examples") {
    auto [u0, v0] = raman_coeffs(RamanGain(0.0, 0.0));
    CHECK(u0 == cplx(1.0, 0.0));
    CHECK(v0 == cplx(0.0, 0.0));

    auto [u, v] = raman_coeffs(RamanGain(2.0, 0.0));
    CHECK_THAT(u.real(), WithinRel(ref::kCosh2, 1e-15));
    CHECK_THAT(v.real(), WithinRel(ref::kSinh2, 1e-15));

    auto [up, vp] = raman_coeffs(RamanGain(2.0, kPi));
    CHECK_THAT(up.real(), WithinRel(ref::kCosh2, 1e-15));
    CHECK_THAT(vp.real(), WithinRel(-ref::kSinh2, 1e-15));
    CHECK(vp.imag() == 0.0);
    CHECK_THAT(std::norm(up) - std::norm(vp), WithinAbs(1.0, 1e-12));
}

TEST_CASE("compose_expansion examples") {
    SECTION("transparent at phi = 0") {
        const auto e = compose_expansion(InterferometerParams::balanced_setup(2.0, 0.0, CoherentInput(), 0.0));
        CHECK_THAT(e.U1.real(), WithinAbs(1.0, 1e-12));
        CHECK_THAT(e.U1.imag(), WithinAbs(0.0, 1e-12));
        CHECK_THAT(std::abs(e.V1), WithinAbs(0.0, 1e-12));
    }
    SECTION("phi = pi") {
        const auto e = compose_expansion(InterferometerParams::balanced_setup(2.0, 0.0, CoherentInput(), kPi));
        CHECK_THAT(std::norm(e.V1), WithinRel(ref::kSinh4Sq, 1e-12));
    }
    SECTION("lossy commutator") {
        const auto e = compose_expansion(
            InterferometerParams::balanced_setup(2.0, 0.0, CoherentInput(), 0.0, LossParams(0.8, 0.1)));
        CHECK_THAT(e.commutator_a(), WithinAbs(1.0, 1e-12));
        CHECK_THAT(e.commutator_b(), WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("lossy_balanced_magnitudes examples") {
    auto m = lossy_balanced_magnitudes(2.0, LossParams(), 0.0);
    CHECK_THAT(m.absU_sq, WithinAbs(1.0, 1e-12));
    CHECK_THAT(m.absV_sq, WithinAbs(0.0, 1e-12));

    m = lossy_balanced_magnitudes(2.0, LossParams(), kPi);
    CHECK_THAT(m.absV_sq, WithinRel(ref::kSinh4Sq, 1e-12));

    const LossParams loss(0.8, 0.1);
    m = lossy_balanced_magnitudes(2.0, loss, 0.3);
    const auto e = compose_expansion(InterferometerParams::balanced_setup(2.0, 0.0, CoherentInput(), 0.3, loss));
    CHECK_THAT(m.absU_sq, WithinRel(ref::kU1SqLossy, 1e-12));
    CHECK_THAT(m.absV_sq, WithinRel(ref::kV1SqLossy, 1e-12));
    CHECK_THAT(std::norm(e.U1), WithinRel(ref::kU1SqLossy, 1e-12));
    CHECK_THAT(std::norm(e.V1), WithinRel(ref::kV1SqLossy, 1e-12));
}

TEST_CASE("commutators are conserved on random parameters") {
    std::mt19937_64 rng(20240917);
    for (int i = 0; i < 1000; ++i) {
        const auto p = random_params(rng);
        const auto e = compose_expansion(p);
        INFO("tuple " << i);
        CHECK_THAT(e.commutator_a(), WithinAbs(1.0, 1e-12));
        CHECK_THAT(e.commutator_b(), WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("lossless expansion reduces to the ideal coefficients") {
    for (double g : {0.3, 1.0, 2.0}) {
        for (double theta1 : {0.0, 0.7, 2.5}) {
            for (double phi : {0.0, 0.3, 1.7, kPi, 5.0}) {
                const auto e =
                    compose_expansion(InterferometerParams::balanced_setup(g, theta1, CoherentInput(), phi));
                const cplx ephi = std::polar(1.0, phi);
                const cplx U = std::cosh(g) * std::cosh(g) * ephi - std::sinh(g) * std::sinh(g);
                const cplx V = 0.5 * std::sinh(2 * g) * (ephi - 1.0) * std::polar(1.0, theta1);
                const double s = scale_of(e);
                CHECK(std::abs(e.U1 - U) <= 1e-12 * s);
                CHECK(std::abs(e.U2 - U) <= 1e-12 * s);
                CHECK(std::abs(e.V1 - V) <= 1e-12 * s);
                CHECK(std::abs(e.V2 - V) <= 1e-12 * s);
                CHECK(std::abs(std::norm(U) - std::norm(V) - 1.0) <= 1e-12 * s);
            }
        }
    }
}

TEST_CASE("expansion is 2pi periodic in phi") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const auto p = random_params(rng);
        const auto a = compose_expansion(p);
        const auto b = compose_expansion(p.with_phi(p.phi + kTwoPi));
        const double s = scale_of(a);
        CHECK(std::abs(a.U1 - b.U1) <= 1e-13 * s);
        CHECK(std::abs(a.V1 - b.V1) <= 1e-13 * s);
        CHECK(std::abs(a.U2 - b.U2) <= 1e-13 * s);
        CHECK(std::abs(a.V2 - b.V2) <= 1e-13 * s);
    }
    // representable phases reduce to the same angle
    const auto p = InterferometerParams::balanced_setup(1.0, 0.0, CoherentInput(), kPi / 2);
    const auto a = compose_expansion(p);
    const auto b = compose_expansion(p.with_phi(kPi / 2 + kTwoPi));
    CHECK(a.U1 == b.U1);
    CHECK(a.V2 == b.V2);
}

TEST_CASE("balanced magnitudes agree with the expansion on a grid") {
    for (double g : {0.1, 0.8, 2.0}) {
        for (double T : {1.0, 0.8, 0.3, 0.0}) {
            for (double gt : {0.0, 0.1, 1.0}) {
                for (double phi : {0.0, 0.3, 1.5, kPi}) {
                    const LossParams loss(T, gt);
                    const auto m = lossy_balanced_magnitudes(g, loss, phi);
                    const auto e =
                        compose_expansion(InterferometerParams::balanced_setup(g, 0.0, CoherentInput(), phi, loss));
                    const double s = scale_of(e);
                    CHECK(std::abs(m.absU_sq - std::norm(e.U1)) <= 1e-12 * s);
                    CHECK(std::abs(m.absV_sq - std::norm(e.V1)) <= 1e-12 * s);
                }
            }
        }
    }
}

TEST_CASE("phi slope of the coefficients matches finite differences") {
    const auto p = InterferometerParams::balanced_setup(0.9, 0.4, CoherentInput(), 0.7, LossParams(0.6, 0.2));
    const auto s = expansion_slope(p);
    const double h = 1e-6;
    const auto plus = compose_expansion(p.with_phi(p.phi + h));
    const auto minus = compose_expansion(p.with_phi(p.phi - h));
    CHECK(std::abs(s.dU1 - (plus.U1 - minus.U1) / (2 * h)) < 1e-8);
    CHECK(std::abs(s.dV1 - (plus.V1 - minus.V1) / (2 * h)) < 1e-8);
    CHECK(std::abs(s.dU2 - (plus.U2 - minus.U2) / (2 * h)) < 1e-8);
    CHECK(std::abs(s.dV2 - (plus.V2 - minus.V2) / (2 * h)) < 1e-8);
}

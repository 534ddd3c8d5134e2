#include <gtest/gtest.h>

#include <random>

#include "nhse/hamiltonian.hpp"
#include "nhse/lattice.hpp"
#include "oracles/oracles.hpp"

using namespace nhse;

namespace {

LatticeModel three_term(const BravaisSpec& b) {
    return LatticeModel(b, {{1, 0, {0.7, 0.2}}, {0, 1, {-0.4, 0.9}}, {1, -1, {0.3, -0.5}}});
}

std::vector<oracle::Hop> as_oracle(const LatticeModel& m) {
    std::vector<oracle::Hop> out;
    for (const auto& h : m.hops())
        out.push_back({h.n_X, h.n_Y, h.amplitude});
    return out;
}

} // namespace

TEST(StripParameters, DiagonalCutOfSquareLattice) {
    const BravaisSpec b{std::sqrt(2.0), std::sqrt(2.0), pi / 2};
    const auto cut = strip_parameters(b, 1, 1);
    EXPECT_NEAR(cut.theta, pi / 4, 1e-15);
    EXPECT_NEAR(cut.a, 1.0, 1e-15);
}

TEST(StripParameters, ZeroPGivesThetaZero) {
    for (double alpha : {pi / 3, pi / 2, 2.0}) {
        const BravaisSpec b{1.3, 0.8, alpha};
        const auto cut = strip_parameters(b, 0, 1);
        EXPECT_EQ(cut.theta, 0.0);
        EXPECT_NEAR(cut.a, b.a_Y, 1e-15);
    }
}

TEST(StripParameters, RectangularClosedForm) {
    const auto cut = strip_parameters({1.0, 2.0, pi / 2}, 1, 1);
    EXPECT_NEAR(cut.theta, std::atan(2.0), 1e-15);
}

TEST(StripParameters, ObliqueLatticeSatisfiesBothForms) {
    const BravaisSpec b{1.1, 0.7, 1.2};
    for (auto [p, q] : {std::pair{1, 1}, {2, 3}, {3, 1}, {1, 4}}) {
        const auto cut = strip_parameters(b, p, q);
        const auto f = oracle::frame(b.a_X, b.a_Y, b.alpha, p, q);
        EXPECT_NEAR(cut.theta, f.theta, 1e-14);
        EXPECT_NEAR(cut.a, f.a, 1e-14);
        EXPECT_NEAR(cut.a, b.a_Y * std::sin(b.alpha - cut.theta) / (q * std::sin(b.alpha)), 1e-14);
    }
}

TEST(StripParameters, RejectsBadCuts) {
    const BravaisSpec b{1.0, 1.0, pi / 2};
    EXPECT_THROW(strip_parameters(b, 0, 0), Error);
    EXPECT_THROW(strip_parameters(b, 2, 4), Error);
    EXPECT_THROW(strip_parameters(b, 1, 0), Error);
    EXPECT_THROW(strip_parameters(b, -1, 1), Error);
    try {
        strip_parameters(b, 2, 4);
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("coprime"), std::string::npos);
    }
}

TEST(ModelValidation, RejectsMalformedHoppingSets) {
    const BravaisSpec b{1.0, 1.0, pi / 2};
    EXPECT_THROW(LatticeModel(b, {}), Error);
    EXPECT_THROW(LatticeModel(b, {{0, 0, 1.0}}), Error);
    EXPECT_THROW(LatticeModel(b, {{1, 0, 0.0}}), Error);
    EXPECT_THROW(LatticeModel(b, {{1, 0, 1.0}, {1, 0, 2.0}}), Error);
    EXPECT_THROW((BravaisSpec{-1.0, 1.0, pi / 2}.validate()), Error);
    EXPECT_THROW((BravaisSpec{1.0, 1.0, pi}.validate()), Error);
}

TEST(ProjectDelta, ThetaZeroExamples) {
    const BravaisSpec b{1.5, 0.9, pi / 2};
    const auto cut = strip_parameters(b, 0, 1);
    const auto dx = project_delta(cut, b, {1, 0, 1.0});
    EXPECT_NEAR(dx.delta_x, b.a_X, 1e-15);
    EXPECT_NEAR(dx.delta_y, 0.0, 1e-15);
    EXPECT_EQ(dx.l, 0);
    const auto dy = project_delta(cut, b, {0, 1, 1.0});
    EXPECT_NEAR(dy.delta_x, 0.0, 1e-15);
    EXPECT_NEAR(dy.delta_y, b.a_Y, 1e-15);
    EXPECT_EQ(dy.l, cut.q);
}

TEST(ProjectDelta, DiagonalCutShift) {
    const BravaisSpec b{1.0, 1.0, pi / 2};
    EXPECT_EQ(project_delta(strip_parameters(b, 1, 1), b, {1, 0, 1.0}).l, -1);
}

TEST(ProjectDelta, IntegerShiftMatchesFrameCoordinates) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> len(0.5, 2.0), ang(0.3, pi - 0.3);
    std::uniform_int_distribution<int> off(-3, 3);
    for (int trial = 0; trial < 50; ++trial) {
        const BravaisSpec b{len(rng), len(rng), ang(rng)};
        for (auto [p, q] : {std::pair{0, 1}, {1, 1}, {1, 2}, {3, 2}}) {
            const auto cut = strip_parameters(b, p, q);
            const auto f = oracle::frame(b.a_X, b.a_Y, b.alpha, p, q);
            const HoppingTerm t{off(rng), off(rng), 1.0};
            if (t.n_X == 0 && t.n_Y == 0)
                continue;
            const auto d = project_delta(cut, b, t);
            const auto [x, y] = f.coords(oracle::cartesian(b.a_X, b.a_Y, b.alpha, t.n_X, t.n_Y));
            EXPECT_NEAR(d.delta_x, x, 1e-12);
            EXPECT_NEAR(d.delta_y, y, 1e-12);
            EXPECT_EQ(d.l, -t.n_X * p + t.n_Y * q);
            EXPECT_NEAR(d.delta_y / cut.a, static_cast<double>(d.l), 1e-12);
        }
    }
}

TEST(PeierlsStaticPhase, Examples) {
    const BravaisSpec rect{1.0, 1.0, pi / 2};
    EXPECT_EQ(peierls_static_phase(rect, FluxSpec::real(0.3), 1.2, 0.0), 0.0);
    EXPECT_EQ(peierls_static_phase(rect, FluxSpec::real(0.0), 1.2, 0.7), 0.0);
    EXPECT_NEAR(peierls_static_phase(rect, FluxSpec::real(0.3), 1.2, 0.7), pi * 0.3 * 0.7 * 1.2, 1e-15);
}

TEST(FluxSpec, RationalTag) {
    const auto f = FluxSpec::ratio(377, 610);
    EXPECT_EQ(f.value, 377.0 / 610.0);
    ASSERT_TRUE(f.rational.has_value());
    EXPECT_EQ(f.rational->second, 610);
    EXPECT_THROW(FluxSpec::ratio(1, 0), Error);
    const BravaisSpec b{2.0, 0.5, pi / 3};
    EXPECT_NEAR(FluxSpec::from_plaquette(0.2, b).value * b.cell_area(), 0.2, 1e-15);
}

TEST(HoppingTable, ZeroFieldIsTranslationInvariant) {
    const BravaisSpec b{1.0, 1.3, 1.1};
    const auto model = three_term(b);
    const auto cut = strip_parameters(b, 1, 2);
    const auto ref = effective_hopping_table(model, cut, FluxSpec::real(0.0), 0.4, 1);
    for (long n = 1; n <= 100; ++n) {
        const auto t = effective_hopping_table(model, cut, FluxSpec::real(0.0), 0.4, n);
        ASSERT_EQ(t.size(), ref.size());
        for (const auto& [l, v] : ref)
            EXPECT_LT(std::abs(t.at(l) - v), 1e-14);
    }
}

TEST(HoppingTable, ZeroFieldEqualsBlochFourierCoefficients) {
    // H_y(k) = sum_l tau_l e^{i k l a} must equal E(k) for k = k_x u_x + k_y u_y^perp.
    const BravaisSpec b{1.0, 1.0, pi / 2};
    const auto model = three_term(b);
    const auto cut = strip_parameters(b, 0, 1);
    const double kx = 0.37;
    const auto table = effective_hopping_table(model, cut, FluxSpec::real(0.0), kx, 1);
    for (double ky : {0.0, 0.9, 2.5}) {
        cplx hy{};
        for (const auto& [l, t] : table)
            hy += t * std::polar(1.0, ky * l * cut.a);
        EXPECT_LT(std::abs(hy - bloch_energy(model, {kx, ky})), 1e-13);
    }
}

TEST(HoppingTable, HofstadterOnsiteTerm) {
    const BravaisSpec b{1.0, 1.0, pi / 2};
    const HofstadterParams hp{1.3, 0.8, 0.25, 0.2};
    const auto cut = strip_parameters(b, 0, 1);
    const double phi = 0.31, kx = 0.6;
    for (long n : {1L, 2L, 17L}) {
        const auto t = effective_hopping_table(hp.model(b), cut, FluxSpec::real(phi), kx, n);
        const cplx expected = 2.0 * hp.J_X * std::cos(cplx{2 * pi * phi * n + kx, -hp.h_X});
        EXPECT_LT(std::abs(t.at(0) - expected), 1e-13);
        EXPECT_LT(std::abs(t.at(1) - hp.kappa_YL()), 1e-13);
        EXPECT_LT(std::abs(t.at(-1) - hp.kappa_YR()), 1e-13);
    }
}

TEST(HoppingTable, MatchesTermByTermLineIntegralOracle) {
    const double B = 1.0 / 7.0;
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> k(-pi, pi);
    for (const BravaisSpec& b : {BravaisSpec{1.0, 1.0, pi / 2}, BravaisSpec{1.2, 0.8, 1.1}}) {
        const auto model = three_term(b);
        for (auto [p, q] : {std::pair{0, 1}, {1, 1}, {2, 1}, {1, 3}}) {
            const auto cut = strip_parameters(b, p, q);
            for (int trial = 0; trial < 5; ++trial) {
                const double kx = k(rng);
                for (long n : {1L, 4L, 23L}) {
                    const auto lib = effective_hopping_table(model, cut, FluxSpec::real(B), kx, n);
                    const auto ref = oracle::hopping_table(as_oracle(model), b.a_X, b.a_Y, b.alpha, p, q, B, kx, n);
                    ASSERT_EQ(lib.size(), ref.size());
                    for (const auto& [l, v] : ref)
                        EXPECT_LT(std::abs(lib.at(l) - v), 1e-12) << "l=" << l << " n=" << n;
                }
            }
        }
    }
}

TEST(HoppingTable, RationalFluxPeriodicity) {
    const BravaisSpec b{1.0, 1.0, pi / 2};
    const auto model = HofstadterParams{1.0, 1.0, 0.1, 0.2}.model(b);
    const auto cut = strip_parameters(b, 0, 1);
    for (long Q : {3L, 5L, 8L}) {
        const auto flux = FluxSpec::ratio(2, Q);
        for (long n = 1; n <= 20; ++n) {
            const auto a = effective_hopping_table(model, cut, flux, 0.3, n);
            const auto c = effective_hopping_table(model, cut, flux, 0.3, n + Q);
            for (const auto& [l, v] : a)
                EXPECT_LT(std::abs(c.at(l) - v), 1e-12);
        }
    }
}

TEST(Reciprocity, Classification) {
    const BravaisSpec b{1.0, 1.0, pi / 2};
    const auto recip = LatticeModel(b, {{1, 0, 1.0}, {-1, 0, 1.0}, {0, 1, I}, {0, -1, I}});
    EXPECT_EQ(classify_reciprocity(recip), (ReciprocityClass{true, false}));
    const auto hn = HofstadterParams{1.0, 1.0, 0.0, 0.2}.model(b);
    EXPECT_EQ(classify_reciprocity(hn), (ReciprocityClass{false, false}));
    const auto herm = LatticeModel(b, {{1, 0, 0.5}, {-1, 0, 0.5}, {0, 1, 2.0}, {0, -1, 2.0}});
    EXPECT_EQ(classify_reciprocity(herm), (ReciprocityClass{true, true}));
    const auto one_way = LatticeModel(b, {{1, 0, 1.0}});
    EXPECT_FALSE(classify_reciprocity(one_way).reciprocal);
}

TEST(Reciprocity, HermitianImpliesReciprocal) {
    std::mt19937 rng(3);
    std::normal_distribution<double> g;
    const BravaisSpec b{1.0, 1.0, pi / 2};
    for (int trial = 0; trial < 20; ++trial) {
        const cplx t1{g(rng), g(rng)}, t2{g(rng), g(rng)};
        const auto m = LatticeModel(b, {{1, 0, t1}, {-1, 0, std::conj(t1)}, {1, 1, t2}, {-1, -1, std::conj(t2)}});
        const auto c = classify_reciprocity(m);
        EXPECT_TRUE(c.hermitian);
        EXPECT_TRUE(c.reciprocal);
    }
}

TEST(BlochEnergy, ReciprocalRectangularDispersion) {
    const BravaisSpec b{1.3, 0.7, pi / 2};
    const cplx kX{0.4, 0.3}, kY{-0.2, 1.1};
    const auto m = LatticeModel(b, {{1, 0, kX}, {-1, 0, kX}, {0, 1, kY}, {0, -1, kY}});
    for (auto k : {std::array{0.0, 0.0}, std::array{0.5, -1.3}, std::array{2.0, 3.0}}) {
        const cplx expected = 2.0 * kX * std::cos(k[0] * b.a_X) + 2.0 * kY * std::cos(k[1] * b.a_Y);
        EXPECT_LT(std::abs(bloch_energy(m, k) - expected), 1e-14);
    }
}

TEST(BlochEnergy, HermitianBandIsReal) {
    const BravaisSpec b{1.0, 1.0, 1.2};
    const auto m = LatticeModel(b, {{1, 0, {0.5, 0.5}}, {-1, 0, {0.5, -0.5}}, {1, 1, 2.0}, {-1, -1, 2.0}});
    for (double kx = -3; kx < 3; kx += 0.7)
        for (double ky = -3; ky < 3; ky += 0.7)
            EXPECT_LT(std::abs(bloch_energy(m, {kx, ky}).imag()), 1e-14);
}

TEST(BlochEnergy, HatanoNelsonAtZeroMomentum) {
    const HofstadterParams hp{1.2, 0.7, 0.3, 0.2};
    const auto m = hp.model({1.0, 1.0, pi / 2});
    const cplx expected = 2 * hp.J_X * std::cosh(hp.h_X) + 2 * hp.J_Y * std::cosh(hp.h_Y);
    EXPECT_LT(std::abs(bloch_energy(m, {0.0, 0.0}) - expected), 1e-14);
}

TEST(SpectralArea, HermitianBandHasZeroArea) {
    const BravaisSpec b{1.0, 1.0, pi / 2};
    const auto m = LatticeModel(b, {{1, 0, 1.0}, {-1, 0, 1.0}, {0, 1, 1.0}, {0, -1, 1.0}});
    // a real band fills one pixel row
    const int res = 128;
    const double side = 8.0 / res;
    EXPECT_LE(spectral_area(m, res), (res + 1) * side * side * (1 + 1e-12));
    EXPECT_THROW(spectral_area(m, 32), Error);
}

TEST(SpectralArea, ReciprocalComplexModelHasPositiveAreaAndConverges) {
    const BravaisSpec b{1.0, 1.0, pi / 2};
    const auto m = LatticeModel(b, {{1, 0, 1.0}, {-1, 0, 1.0}, {0, 1, I}, {0, -1, I}});
    const double a256 = spectral_area(m, 256), a512 = spectral_area(m, 512);
    EXPECT_GT(a256, 1.0);
    EXPECT_LT(std::abs(a256 - a512) / a512, 0.05);
    // The image of 2cos(x) + 2i cos(y) is the square [-2,2]^2.
    EXPECT_NEAR(a512, 16.0, 16.0 * 0.05);
}

TEST(SpectralArea, InvariantUnderGlobalPhase) {
    const BravaisSpec b{1.0, 1.0, pi / 2};
    const auto base = LatticeModel(b, {{1, 0, 1.0}, {-1, 0, 1.0}, {0, 1, I}, {0, -1, I}});
    const cplx rot = std::polar(1.0, 0.6);
    const auto rotated = LatticeModel(b, {{1, 0, rot}, {-1, 0, rot}, {0, 1, I * rot}, {0, -1, I * rot}});
    const double a = spectral_area(base, 256), r = spectral_area(rotated, 256);
    EXPECT_LT(std::abs(a - r) / a, 0.05);
}

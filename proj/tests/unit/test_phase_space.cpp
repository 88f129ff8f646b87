#include "test_support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace weylab;
using namespace weylab::testing;

TEST(PhaseGrid, SpacingSatisfiesTheCharacterCondition) {
    for (int n : {4, 16, 64}) {
        const auto g = make_grid(1, n);
        EXPECT_NEAR(g.h * g.h * n, kPi, 1e-13);
        EXPECT_NEAR(g.L, n * g.h, 1e-13);
        EXPECT_NEAR(g.base_spacing(), std::sqrt(2.0) * g.h, 1e-14);
    }
    EXPECT_THROW(make_grid(1, 15), std::invalid_argument);
    EXPECT_THROW(make_grid(1, 2), std::invalid_argument);
    EXPECT_THROW(make_grid(0, 16), std::invalid_argument);
}

TEST(PhaseGrid, CoordinatesAreCentered) {
    const auto g = make_grid(1, 8);
    const auto a = GridFunction::zeros_symbol(g);
    const auto c0 = coordinates(a, 0);
    EXPECT_DOUBLE_EQ(c0[0], -4 * g.h);
    EXPECT_DOUBLE_EQ(c0[1], -4 * g.h);
    const auto c = coordinates(a, 4 * 8 + 5);
    EXPECT_DOUBLE_EQ(c[0], 0.0);
    EXPECT_DOUBLE_EQ(c[1], g.h);
}

TEST(Sigma, IsAntisymmetricAndBilinear) {
    const std::vector<double> X{1.0, 2.0, -0.5, 3.0}, Y{0.25, -1.0, 2.0, 0.5};
    EXPECT_DOUBLE_EQ(sigma(X, Y), -sigma(Y, X));
    EXPECT_DOUBLE_EQ(sigma(X, X), 0.0);
    // <y, xi> - <x, eta> with x = (1, 2), xi = (-0.5, 3), y = (0.25, -1), eta = (2, 0.5)
    EXPECT_DOUBLE_EQ(sigma(X, Y), (0.25 * -0.5 + -1.0 * 3.0) - (1.0 * 2.0 + 2.0 * 0.5));
}

TEST(SymplecticFourier, IsAnInvolution) {
    std::mt19937_64 rng(1);
    for (int n : {16, 32, 64}) {
        const auto g = make_grid(1, n);
        for (int t = 0; t < 5; ++t) {
            const auto a = random_symbol(g, rng);
            EXPECT_LT(rel_err(symplectic_fourier(symplectic_fourier(a)), a), 1e-12) << n;
        }
    }
}

TEST(SymplecticFourier, MatchesTheDirectSum) {
    std::mt19937_64 rng(2);
    const auto g = make_grid(1, 8);
    const auto a = random_symbol(g, rng);
    const auto F = symplectic_fourier(a);
    // pi^{-d} h^{2d} sum_Z a(Z) exp(2i sigma(Y, Z))
    auto direct = GridFunction::zeros_symbol(g);
    for (std::size_t y = 0; y < a.size(); ++y) {
        const auto Y = coordinates(a, y);
        cplx s(0.0, 0.0);
        for (std::size_t z = 0; z < a.size(); ++z) s += a[z] * std::polar(1.0, 2.0 * sigma(Y, coordinates(a, z)));
        direct[y] = s * g.h * g.h / kPi;
    }
    EXPECT_LT(rel_err(F, direct), 1e-12);
}

TEST(SymplecticFourier, FixesTheStandardGaussian) {
    // exp(-|Z|^2) is its own symplectic transform in the continuum
    const auto g = make_grid(1, 64);
    GaussianAtomSpec s;
    s.center = {0.0, 0.0};
    s.modulation = {0.0, 0.0};
    const auto a = gaussian_atom(g, s);
    EXPECT_LT(rel_err(symplectic_fourier(a), a), 1e-10);
}

TEST(SymplecticFourier, RejectsBaseFunctions) {
    EXPECT_THROW(symplectic_fourier(GridFunction::zeros_function(1, 8)), std::invalid_argument);
}

TEST(Fourier, IsUnitaryAndInvertible) {
    std::mt19937_64 rng(3);
    for (int d : {1, 2}) {
        const auto f = random_function(d, 16, rng);
        const auto F = fourier(f, false);
        EXPECT_NEAR(l2_norm(F), l2_norm(f), 1e-12 * l2_norm(f));
        EXPECT_LT(rel_err(fourier(F, true), f), 1e-12);
    }
}

TEST(Fourier, GaussianIsAFixedPoint) {
    const std::vector<double> c{0.0}, xi{0.0};
    const auto f = gaussian_function(1, 64, c, xi, 1.0);
    EXPECT_LT(rel_err(fourier(f, false), f), 1e-10);
}

TEST(Fourier, ModulationBecomesTranslation) {
    // F(e^{i x xi0} e^{-x^2/2})(xi) = e^{-(xi - xi0)^2/2}
    const int n = 64;
    const double step = std::sqrt(2.0 * kPi / n);
    const std::vector<double> c{0.0}, xi{3 * step}, shifted{3 * step}, zero{0.0};
    const auto F = fourier(gaussian_function(1, n, c, xi, 1.0), false);
    const auto expected = gaussian_function(1, n, shifted, zero, 1.0);
    EXPECT_LT(rel_err(F, expected), 1e-10);
}

TEST(GaussianAtom, EnforcesTruncationSafety) {
    const auto g = make_grid(1, 16);
    GaussianAtomSpec s;
    s.center = {g.L / 4.0 + 0.1, 0.0};
    s.modulation = {0.0, 0.0};
    EXPECT_FALSE(truncation_safe(g, s));
    EXPECT_THROW(gaussian_atom(g, s), std::invalid_argument);
    s.center = {0.0, 0.0};
    s.gamma = 0.0;
    EXPECT_THROW(gaussian_atom(g, s), std::invalid_argument);
}

TEST(GaussianAtom, CenteredAtomIsSmallOnTheBoundary) {
    const auto g = make_grid(1, 64);
    GaussianAtomSpec s;
    s.center = {0.0, 0.0};
    s.modulation = {0.0, 0.0};
    EXPECT_LT(boundary_ratio(gaussian_atom(g, s)), 1e-10);
}

TEST(GaussianAtom, L2NormMatchesTheContinuum) {
    // ||exp(-|Z|^2/(2 g^2))||_2^2 = pi g^2 in R^2
    const auto g = make_grid(1, 64);
    GaussianAtomSpec s;
    s.center = {0.3, -0.2};
    s.modulation = {0.5, 0.1};
    s.gamma = 0.8;
    const double n2 = l2_norm(gaussian_atom(g, s));
    EXPECT_NEAR(n2 * n2, kPi * 0.64, 1e-10);
}

TEST(Inner, IsConjugateSymmetric) {
    std::mt19937_64 rng(4);
    const auto g = make_grid(1, 8);
    const auto a = random_symbol(g, rng), b = random_symbol(g, rng);
    EXPECT_LT(std::abs(inner(a, b) - std::conj(inner(b, a))), 1e-12);
    EXPECT_NEAR(inner(a, a).real(), l2_norm(a) * l2_norm(a), 1e-10);
}

TEST(Reflect, IsAnInvolutionAndNegatesCoordinates) {
    std::mt19937_64 rng(5);
    const auto g = make_grid(1, 8);
    const auto a = random_symbol(g, rng);
    const auto r = reflect(a);
    EXPECT_EQ(reflect(r).samples, a.samples);
    // (1, 2) -> (-1, -2)
    EXPECT_EQ(r[raw(1, 8) * 8 + raw(2, 8)], a[raw(-1, 8) * 8 + raw(-2, 8)]);
}

TEST(Serialization, JsonRoundTripIsExact) {
    std::mt19937_64 rng(6);
    const auto a = random_symbol(make_grid(1, 8), rng);
    const auto b = grid_function_from_json(to_json(a));
    EXPECT_EQ(b.kind, a.kind);
    EXPECT_EQ(b.n, a.n);
    EXPECT_EQ(b.spacing, a.spacing);
    EXPECT_EQ(b.samples, a.samples);
}

TEST(Serialization, BinaryRoundTripIsExact) {
    std::mt19937_64 rng(7);
    const auto f = random_function(2, 8, rng);
    std::stringstream ss;
    write_binary(ss, f);
    const auto g = read_binary(ss);
    EXPECT_EQ(g.kind, GridKind::function);
    EXPECT_EQ(g.d, 2);
    EXPECT_EQ(g.samples, f.samples);
}

TEST(Serialization, RejectsCorruptInput) {
    std::stringstream ss("not a grid function");
    EXPECT_THROW(read_binary(ss), std::invalid_argument);
    EXPECT_THROW(grid_function_from_json(R"({"kind":"symbol","d":1,"n":4,"h":0.5,"data":[1,2]})"),
                 std::invalid_argument);
}

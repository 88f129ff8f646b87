#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace weylab;
using namespace weylab::testing;

namespace {

// (2 pi)^{-D/2} delta^D sum_y f(y) conj(phi(y - x)) exp(-i <y, xi>)
cplx ordinary_direct(const GridFunction& f, const GridFunction& phi, std::size_t x, std::size_t k) {
    const int D = f.axes(), n = f.n;
    const double dual = 2.0 * kPi / (n * f.spacing);
    std::vector<int> cx(D), ck(D), cy(D), s(D);
    auto dec = [&](std::size_t i, std::vector<int>& c) {
        for (int a = D - 1; a >= 0; --a) {
            c[a] = static_cast<int>(i % n) - n / 2;
            i /= n;
        }
    };
    auto enc = [&](const std::vector<int>& c) {
        std::size_t i = 0;
        for (int a = 0; a < D; ++a) i = i * n + raw(c[a], n);
        return i;
    };
    dec(x, cx);
    dec(k, ck);
    cplx sum(0.0, 0.0);
    for (std::size_t y = 0; y < f.size(); ++y) {
        dec(y, cy);
        double ph = 0.0;
        for (int a = 0; a < D; ++a) {
            s[a] = cy[a] - cx[a];
            ph += (cy[a] * f.spacing) * (ck[a] * dual);
        }
        sum += f[y] * std::conj(phi[enc(s)]) * std::polar(1.0, -ph);
    }
    return sum * std::pow(2.0 * kPi, -0.5 * D) * std::pow(f.spacing, D);
}

double tensor_energy(const STFTTensor& T) {
    double s = 0.0;
    for (const auto& v : T.samples) s += std::norm(v);
    return s * std::pow(T.x_spacing * T.y_spacing, T.axes);
}

} // namespace

TEST(Stft, OrdinaryMatchesTheDirectSumOnFunctions) {
    std::mt19937_64 rng(1);
    const auto f = random_function(1, 16, rng);
    const auto phi = random_function(1, 16, rng);
    const auto V = stft(f, phi);
    std::vector<cplx> direct(V.samples.size());
    for (std::size_t x = 0; x < 16; ++x)
        for (std::size_t k = 0; k < 16; ++k) direct[x * 16 + k] = ordinary_direct(f, phi, x, k);
    EXPECT_LT(rel_err(V.samples, direct), 1e-12);
}

TEST(Stft, OrdinaryMatchesTheDirectSumOnSymbols) {
    std::mt19937_64 rng(2);
    const auto g = make_grid(1, 8);
    const auto a = random_symbol(g, rng), w = random_symbol(g, rng);
    const auto V = stft(a, w);
    double err = 0.0;
    for (std::size_t x = 0; x < 64; x += 7)
        for (std::size_t k = 0; k < 64; ++k) err = std::max(err, std::abs(V.at(x, k) - ordinary_direct(a, w, x, k)));
    EXPECT_LT(err / max_abs(V.samples), 1e-12);
}

TEST(Stft, SymplecticMatchesThePointwiseSum) {
    std::mt19937_64 rng(3);
    const auto g = make_grid(1, 8);
    const auto a = random_symbol(g, rng), w = random_symbol(g, rng);
    const auto V = symplectic_stft(a, w);
    double err = 0.0;
    for (int x = -4; x < 4; x += 3)
        for (int xi = -4; xi < 4; xi += 2)
            for (int y = -4; y < 4; ++y)
                for (int eta = -4; eta < 4; ++eta) {
                    const auto ref = symplectic_stft_at(a, w, {x, xi}, {y, eta});
                    const auto got = V.at(raw(x, 8) * 8 + raw(xi, 8), raw(y, 8) * 8 + raw(eta, 8));
                    err = std::max(err, std::abs(ref - got));
                }
    EXPECT_LT(err / max_abs(V.samples), 1e-12);
}

TEST(Stft, SymplecticIsTheOrdinaryTransformAtRotatedFrequencies) {
    // V_sigma a(X, Y) = 2^d V a(x, xi, -2 eta, 2 y)
    std::mt19937_64 rng(4);
    const int n = 16;
    const auto g = make_grid(1, n);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const auto a = random_symbol(g, rng), w = random_symbol(g, rng);
        const auto S = symplectic_stft(a, w);
        const auto V = stft(a, w);
        std::vector<cplx> mapped(S.samples.size());
        for (std::size_t x = 0; x < S.block(); ++x)
            for (int y = -n / 2; y < n / 2; ++y)
                for (int eta = -n / 2; eta < n / 2; ++eta) {
                    const std::size_t Y = raw(y, n) * n + raw(eta, n);
                    const std::size_t K = raw(-eta, n) * n + raw(y, n);
                    mapped[x * S.block() + Y] = 2.0 * V.at(x, K);
                }
        worst = std::max(worst, rel_err(S.samples, mapped));
    }
    EXPECT_LT(worst, 1e-10);
}

TEST(Stft, MoyalIdentityHoldsExactly) {
    std::mt19937_64 rng(5);
    const auto f = random_function(2, 8, rng), phi = random_function(2, 8, rng);
    EXPECT_NEAR(tensor_energy(stft(f, phi)), std::pow(l2_norm(f) * l2_norm(phi), 2), 1e-10 * tensor_energy(stft(f, phi)));
    const auto g = make_grid(1, 16);
    const auto a = random_symbol(g, rng), w = random_symbol(g, rng);
    const double e = tensor_energy(symplectic_stft(a, w));
    EXPECT_NEAR(e, std::pow(l2_norm(a) * l2_norm(w), 2), 1e-10 * e);
}

TEST(Stft, StreamedSlicesEqualTheMaterializedTensor) {
    std::mt19937_64 rng(6);
    const auto g = make_grid(1, 8);
    const auto a = random_symbol(g, rng), w = random_symbol(g, rng);
    const auto V = symplectic_stft(a, w);
    std::size_t expected = 0;
    for_each_stft_slice(a, w, StftFlavor::symplectic, [&](std::size_t x, const cplx* s) {
        EXPECT_EQ(x, expected++);
        for (std::size_t y = 0; y < V.block(); ++y) ASSERT_EQ(s[y], V.at(x, y));
    });
    EXPECT_EQ(expected, V.block());
}

TEST(Stft, GaussianAtomTransformIsLocalized) {
    // the symplectic STFT of an atom peaks at its center
    const auto g = make_grid(1, 32);
    GaussianAtomSpec s;
    s.center = {4 * g.h, -2 * g.h};
    s.modulation = {0.0, 0.0};
    const auto a = gaussian_atom(g, s);
    s.center = {0.0, 0.0};
    const auto V = symplectic_stft(a, gaussian_atom(g, s));
    std::size_t arg = 0;
    for (std::size_t i = 0; i < V.samples.size(); ++i)
        if (std::abs(V.samples[i]) > std::abs(V.samples[arg])) arg = i;
    EXPECT_EQ(arg / V.block(), static_cast<std::size_t>(raw(4, 32) * 32 + raw(-2, 32)));
}

TEST(Stft, Errors) {
    const auto g = make_grid(1, 8);
    const auto a = GridFunction::zeros_symbol(g);
    EXPECT_THROW(stft(a, a), std::invalid_argument);
    EXPECT_THROW(symplectic_stft(a, GridFunction::zeros_symbol(make_grid(1, 16))), std::invalid_argument);
    const auto big = GridFunction::zeros_symbol(make_grid(1, 64));
    auto w = big;
    w[0] = 1.0;
    EXPECT_THROW(symplectic_stft(big, w), std::length_error);
}

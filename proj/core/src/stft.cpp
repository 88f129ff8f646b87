#include "weylab/stft.hpp"

#include "fft.hpp"
#include "indexing.hpp"

#include <cmath>
#include <stdexcept>

namespace weylab {

using detail::decode;
using detail::encode;
using detail::ipow;

std::size_t STFTTensor::block() const { return ipow(static_cast<std::size_t>(n), axes); }

namespace {

void validate(const GridFunction& f, const GridFunction& w, StftFlavor flavor) {
    require_same_grid(f, w, "stft");
    if (flavor == StftFlavor::symplectic && f.kind != GridKind::symbol)
        throw std::invalid_argument("symplectic stft: expects symbols");
    bool nonzero = false;
    for (const auto& v : w.samples)
        if (v != cplx(0.0, 0.0)) {
            nonzero = true;
            break;
        }
    if (!nonzero) throw std::invalid_argument("stft: zero window");
}

} // namespace

void for_each_stft_slice(const GridFunction& f, const GridFunction& window, StftFlavor flavor,
                         const SliceCallback& callback) {
    validate(f, window, flavor);
    const int D = f.axes();
    const int n = f.n;
    const std::size_t M = f.samples.size();
    // raw digits of every grid point, for the periodic window shift
    std::vector<int> digits(M * static_cast<std::size_t>(D));
    for (std::size_t z = 0; z < M; ++z) {
        std::size_t r = z;
        for (int a = D - 1; a >= 0; --a) {
            digits[z * D + a] = static_cast<int>(r % static_cast<std::size_t>(n));
            r /= static_cast<std::size_t>(n);
        }
    }
    const unsigned all = (1u << D) - 1u;

    double scale;
    if (flavor == StftFlavor::ordinary)
        scale = std::pow(2.0 * kPi, -0.5 * D) * std::pow(f.spacing, D);
    else
        scale = std::pow(static_cast<double>(n), -f.d);

    std::vector<cplx> g(M), out(M);
    std::vector<int> Y(D), K(D);
    std::vector<std::size_t> perm;
    if (flavor == StftFlavor::symplectic) {
        // out(y, eta) = A(-eta, y)
        const int d = f.d;
        perm.resize(M);
        for (std::size_t i = 0; i < M; ++i) {
            decode(i, D, n, Y.data());
            for (int k = 0; k < d; ++k) {
                K[k] = -Y[d + k];
                K[d + k] = Y[k];
            }
            perm[i] = encode(K.data(), D, n);
        }
    }

    for (std::size_t x = 0; x < M; ++x) {
        // window shifted to X: w(Z - X)
        const int* xd = &digits[x * D];
        for (std::size_t z = 0; z < M; ++z) {
            const int* zd = &digits[z * D];
            std::size_t s = 0;
            for (int a = 0; a < D; ++a) s = s * static_cast<std::size_t>(n) + static_cast<std::size_t>((zd[a] - xd[a] + n + n / 2) % n);
            g[z] = f.samples[z] * std::conj(window.samples[s]);
        }
        detail::centered_dft(g.data(), D, n, all, -1);
        if (flavor == StftFlavor::ordinary) {
            for (std::size_t i = 0; i < M; ++i) out[i] = g[i] * scale;
        } else {
            for (std::size_t i = 0; i < M; ++i) out[i] = g[perm[i]] * scale;
        }
        callback(x, out.data());
    }
}

namespace {

STFTTensor materialize(const GridFunction& f, const GridFunction& w, StftFlavor flavor) {
    validate(f, w, flavor);
    STFTTensor T;
    T.flavor = flavor;
    T.axes = f.axes();
    T.n = f.n;
    T.x_spacing = f.spacing;
    T.y_spacing = flavor == StftFlavor::symplectic ? f.spacing : 2.0 * kPi / (f.n * f.spacing);
    const std::size_t M = f.samples.size();
    if (M * M > kMaxMaterializedEntries)
        throw std::length_error("stft tensor too large to materialize; stream slices instead");
    T.samples.resize(M * M);
    for_each_stft_slice(f, w, flavor, [&](std::size_t x, const cplx* s) {
        std::copy(s, s + M, T.samples.begin() + static_cast<std::ptrdiff_t>(x * M));
    });
    return T;
}

} // namespace

STFTTensor stft(const GridFunction& f, const GridFunction& phi) { return materialize(f, phi, StftFlavor::ordinary); }

STFTTensor symplectic_stft(const GridFunction& a, const GridFunction& Phi) {
    return materialize(a, Phi, StftFlavor::symplectic);
}

cplx symplectic_stft_at(const GridFunction& a, const GridFunction& Phi, const std::vector<int>& X,
                        const std::vector<int>& Y) {
    validate(a, Phi, StftFlavor::symplectic);
    const int d = a.d;
    const int D = 2 * d;
    const int n = a.n;
    if (static_cast<int>(X.size()) != D || static_cast<int>(Y.size()) != D)
        throw std::invalid_argument("symplectic_stft_at: dimension mismatch");
    std::vector<int> Z(D), S(D);
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        decode(i, D, n, Z.data());
        long B = 0;
        for (int k = 0; k < d; ++k) B += static_cast<long>(Z[k]) * Y[d + k] - static_cast<long>(Y[k]) * Z[d + k];
        for (int k = 0; k < D; ++k) S[k] = Z[k] - X[k];
        const long r = ((B % n) + n) % n;
        const double ang = 2.0 * kPi * static_cast<double>(r) / n;
        s += a.samples[i] * std::conj(Phi.samples[encode(S.data(), D, n)]) * cplx(std::cos(ang), std::sin(ang));
    }
    return s * std::pow(static_cast<double>(n), -d);
}

} // namespace weylab

#include "weylab/weyl.hpp"

#include "fft.hpp"
#include "indexing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace weylab {

using detail::BlockArith;
using detail::decode;
using detail::encode;
using detail::ipow;

MatrixA MatrixA::scalar(int d, double a) {
    MatrixA m;
    m.d = d;
    m.entries.assign(static_cast<std::size_t>(d * d), 0.0);
    for (int i = 0; i < d; ++i) m.entries[static_cast<std::size_t>(i * d + i)] = a;
    return m;
}

MatrixA MatrixA::minus(const MatrixA& other) const {
    if (other.d != d) throw std::invalid_argument("MatrixA: dimension mismatch");
    MatrixA m = *this;
    for (std::size_t i = 0; i < entries.size(); ++i) m.entries[i] -= other.entries[i];
    return m;
}

bool MatrixA::half_integer() const {
    if (static_cast<int>(entries.size()) != d * d) return false;
    for (double v : entries) {
        const double t = 2.0 * v;
        if (!std::isfinite(t) || std::abs(t - std::round(t)) > 1e-12) return false;
    }
    return true;
}

namespace {

void require_symbol(const GridFunction& a, const char* what) {
    if (a.kind != GridKind::symbol) throw std::invalid_argument(std::string(what) + ": expects a symbol");
}

void require_shear(const MatrixA& A, int d, const char* what) {
    if (A.d != d) throw std::invalid_argument(std::string(what) + ": matrix dimension mismatch");
    if (!A.half_integer()) throw std::invalid_argument(std::string(what) + ": shear is not grid-compatible");
}

// 2A as an integer matrix.
std::vector<long> doubled(const MatrixA& A) {
    std::vector<long> out(A.entries.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::lround(2.0 * A.entries[i]);
    return out;
}

unsigned xi_mask(int d) { return ((1u << (2 * d)) - 1u) & ~((1u << d) - 1u); }

std::vector<cplx> roots_of_unity(int n) {
    std::vector<cplx> w(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) w[k] = std::polar(1.0, 2.0 * kPi * k / n);
    return w;
}

} // namespace

GridFunction twisted_convolution(const GridFunction& a, const GridFunction& b) {
    require_symbol(a, "twisted_convolution");
    require_same_grid(a, b, "twisted_convolution");
    const int d = a.d, n = a.n, D = 2 * d;
    const BlockArith ar(d, n);
    const std::size_t M = ar.size();
    std::vector<cplx> Ah = a.samples, Bh = b.samples;
    detail::centered_dft(Ah.data(), D, n, xi_mask(d), -1);
    detail::centered_dft(Bh.data(), D, n, xi_mask(d), -1);

    // C(x, r) = sum_y Ah(x - y, r - y) Bh(y, x + r - y)
    GridFunction out = a;
    auto& C = out.samples;
    for (std::size_t x = 0; x < M; ++x) {
        for (std::size_t r = 0; r < M; ++r) {
            const std::size_t xr = ar.add(x, r);
            cplx s(0.0, 0.0);
            for (std::size_t y = 0; y < M; ++y) s += Ah[ar.sub(x, y) * M + ar.sub(r, y)] * Bh[y * M + ar.sub(xr, y)];
            C[x * M + r] = s;
        }
    }
    detail::centered_dft(C.data(), D, n, xi_mask(d), +1);
    const double h = std::sqrt(kPi / n);
    const double cT = std::pow(2.0 / kPi, 0.5 * d) * std::pow(h, 2 * d);
    const double scale = cT / static_cast<double>(M);
    for (auto& v : C) v *= scale;
    return out;
}

GridFunction twisted_convolution_slow(const GridFunction& a, const GridFunction& b) {
    require_symbol(a, "twisted_convolution_slow");
    require_same_grid(a, b, "twisted_convolution_slow");
    const int d = a.d, n = a.n, D = 2 * d;
    const std::size_t T = a.samples.size();
    const auto w = roots_of_unity(n);
    std::vector<int> coords(T * D);
    for (std::size_t i = 0; i < T; ++i) decode(i, D, n, &coords[i * D]);
    const double h = std::sqrt(kPi / n);
    const double cT = std::pow(2.0 / kPi, 0.5 * d) * std::pow(h, 2 * d);
    GridFunction out = a;
    std::vector<int> diff(D);
    for (std::size_t X = 0; X < T; ++X) {
        const int* cx = &coords[X * D];
        cplx s(0.0, 0.0);
        for (std::size_t Y = 0; Y < T; ++Y) {
            const int* cy = &coords[Y * D];
            long B = 0;
            // sigma(X, Y) = <y, xi> - <x, eta>
            for (int k = 0; k < d; ++k) B += static_cast<long>(cy[k]) * cx[d + k] - static_cast<long>(cx[k]) * cy[d + k];
            for (int k = 0; k < D; ++k) diff[k] = cx[k] - cy[k];
            s += a.samples[encode(diff.data(), D, n)] * b.samples[Y] * w[static_cast<std::size_t>(((B % n) + n) % n)];
        }
        out.samples[X] = s * cT;
    }
    return out;
}

GridFunction weyl_product(const GridFunction& a, const GridFunction& b) {
    GridFunction out = twisted_convolution(a, symplectic_fourier(b));
    const double c = std::pow(2.0 * kPi, -0.5 * a.d);
    for (auto& v : out.samples) v *= c;
    return out;
}

GridFunction kernel_symbol_map(const GridFunction& input, const MatrixA& A, KernelDirection direction) {
    require_shear(A, input.d, "kernel_symbol_map");
    const int d = input.d, n = input.n, D = 2 * d;
    const double h = std::sqrt(kPi / n);
    if (std::abs(input.spacing - h) > 1e-14 * h) throw std::invalid_argument("kernel_symbol_map: grid mismatch");
    GridFunction out = input;
    const double c = std::pow(2.0 * kPi, -0.5 * d) * std::pow(2.0 * n, -0.5 * d);
    if (direction == KernelDirection::symbol_to_kernel) {
        if (input.kind != GridKind::symbol) throw std::invalid_argument("kernel_symbol_map: expects a symbol");
        out.kind = GridKind::kernel;
        detail::centered_dft(out.samples.data(), D, n, xi_mask(d), +1);
        for (auto& v : out.samples) v *= c;
    } else {
        if (input.kind != GridKind::kernel) throw std::invalid_argument("kernel_symbol_map: expects a kernel");
        out.kind = GridKind::symbol;
        detail::centered_dft(out.samples.data(), D, n, xi_mask(d), -1);
        const double inv = 1.0 / (c * static_cast<double>(ipow(static_cast<std::size_t>(n), d)));
        for (auto& v : out.samples) v *= inv;
    }
    return out;
}

GridFunction sample_kernel_lattice(const PhaseGrid& grid, const MatrixA& A, const KernelCallback& kernel) {
    require_shear(A, grid.d, "sample_kernel_lattice");
    const int d = grid.d, n = grid.n, D = 2 * d;
    GridFunction out = GridFunction::zeros_symbol(grid);
    out.kind = GridKind::kernel;
    const auto A2 = doubled(A);
    std::vector<int> c(D);
    std::vector<double> x(d), y(d);
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        decode(i, D, n, c.data());
        for (int r = 0; r < d; ++r) {
            long s = c[r];
            for (int k = 0; k < d; ++k) s += A2[static_cast<std::size_t>(r * d + k)] * c[d + k];
            x[r] = grid.h * static_cast<double>(s);
            y[r] = x[r] - 2.0 * grid.h * c[d + r];
        }
        out.samples[i] = kernel(x, y);
    }
    return out;
}

OperatorMatrix OperatorMatrix::compose(const OperatorMatrix& other) const {
    if (other.d != d || other.m != m) throw std::invalid_argument("OperatorMatrix: shape mismatch");
    OperatorMatrix out = *this;
    out.M = M * other.M;
    return out;
}

OperatorMatrix operator_matrix_from_kernel(const GridFunction& kernel, const MatrixA& A) {
    if (kernel.kind != GridKind::kernel) throw std::invalid_argument("operator_matrix: expects a kernel");
    require_shear(A, kernel.d, "operator_matrix");
    const int d = kernel.d, n = kernel.n, D = 2 * d;
    if (n % 4 != 0) throw std::invalid_argument("operator_matrix: n must be a multiple of 4");
    const int m = n / 2;
    const double h = std::sqrt(kPi / n);
    const std::size_t Mb = ipow(static_cast<std::size_t>(m), d);
    const auto A2 = doubled(A);
    OperatorMatrix out;
    out.d = d;
    out.m = m;
    out.spacing = 2.0 * h;
    out.M.resize(static_cast<Eigen::Index>(Mb), static_cast<Eigen::Index>(Mb));
    const double w = std::pow(2.0 * h, d);
    std::vector<int> ci(d), cj(d), idx(D);
    for (std::size_t i = 0; i < Mb; ++i) {
        decode(i, d, m, ci.data());
        for (std::size_t j = 0; j < Mb; ++j) {
            decode(j, d, m, cj.data());
            // u = 2i - 2A(i - j), t = i - j
            for (int r = 0; r < d; ++r) {
                long s = 2L * ci[r];
                for (int k = 0; k < d; ++k) s -= A2[static_cast<std::size_t>(r * d + k)] * (ci[k] - cj[k]);
                idx[r] = static_cast<int>(s);
                idx[d + r] = ci[r] - cj[r];
            }
            out.M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                w * kernel.samples[encode(idx.data(), D, n)];
        }
    }
    return out;
}

OperatorMatrix operator_matrix(const GridFunction& a, const MatrixA& A) {
    require_symbol(a, "operator_matrix");
    return operator_matrix_from_kernel(kernel_symbol_map(a, A, KernelDirection::symbol_to_kernel), A);
}

GridFunction calculi_transform(const GridFunction& a, const MatrixA& A1, const MatrixA& A2) {
    require_symbol(a, "calculi_transform");
    require_shear(A1, a.d, "calculi_transform");
    require_shear(A2, a.d, "calculi_transform");
    const MatrixA C = A1.minus(A2);
    if (!C.half_integer()) throw std::invalid_argument("calculi_transform: incompatible shear");
    if (A1 == A2) return a;
    const int d = a.d, n = a.n, D = 2 * d;
    const auto C2 = doubled(C);
    // Partial inverse transform along xi, then the multiplier
    // exp(i <(A1 - A2) x, xi>) on the Fourier side becomes the exact shift
    // u -> u - (A1 - A2) t of the first variable.
    std::vector<cplx> b = a.samples;
    detail::centered_dft(b.data(), D, n, xi_mask(d), +1);
    GridFunction out = a;
    std::vector<int> c(D), src(D);
    for (std::size_t i = 0; i < b.size(); ++i) {
        decode(i, D, n, c.data());
        for (int r = 0; r < d; ++r) {
            long s = c[r];
            for (int k = 0; k < d; ++k) s -= C2[static_cast<std::size_t>(r * d + k)] * c[d + k];
            src[r] = static_cast<int>(s);
            src[d + r] = c[d + r];
        }
        out.samples[i] = b[encode(src.data(), D, n)];
    }
    detail::centered_dft(out.samples.data(), D, n, xi_mask(d), -1);
    const double inv = 1.0 / static_cast<double>(ipow(static_cast<std::size_t>(n), d));
    for (auto& v : out.samples) v *= inv;
    return out;
}

GridFunction pseudo_product_A(const GridFunction& a, const GridFunction& b, const MatrixA& A) {
    require_symbol(a, "pseudo_product_A");
    const MatrixA half = MatrixA::weyl(a.d);
    if (A == half) return weyl_product(a, b);
    return calculi_transform(weyl_product(calculi_transform(a, A, half), calculi_transform(b, A, half)), half, A);
}

namespace {

Eigen::MatrixXcd as_matrix(const GridFunction& K, std::size_t Mb) {
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(Mb), static_cast<Eigen::Index>(Mb));
    for (std::size_t i = 0; i < Mb; ++i)
        for (std::size_t j = 0; j < Mb; ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = K.samples[i * Mb + j];
    return out;
}

} // namespace

KernelComposition compose_kernels(const std::vector<GridFunction>& kernels) {
    if (kernels.empty()) throw std::invalid_argument("compose_kernels: need at least one kernel");
    const GridFunction& K1 = kernels.front();
    if (K1.kind != GridKind::function || K1.d % 2 != 0)
        throw std::invalid_argument("compose_kernels: kernels are functions of (x, y)");
    for (const auto& K : kernels) require_same_grid(K1, K, "compose_kernels");
    const int d = K1.d / 2;
    const int m = K1.n;
    const std::size_t Mb = ipow(static_cast<std::size_t>(m), d);
    const std::size_t N = kernels.size();
    const double w = std::pow(K1.spacing, d);

    KernelComposition out;
    // matrix route
    Eigen::MatrixXcd P = as_matrix(kernels[0], Mb);
    double bound = (w * P).norm();
    for (std::size_t j = 1; j < N; ++j) {
        Eigen::MatrixXcd Kj = as_matrix(kernels[j], Mb);
        bound *= (w * Kj).norm();
        P = (w * P) * Kj;
    }
    out.frobenius_bound = bound;
    out.frobenius_product = (w * P).norm();
    out.composed = K1;
    for (std::size_t i = 0; i < Mb; ++i)
        for (std::size_t j = 0; j < Mb; ++j)
            out.composed.samples[i * Mb + j] = P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));

    // factorization route
    out.factorized = K1;
    auto K = [&](std::size_t j, std::size_t x, std::size_t y) { return kernels[j - 1].samples[x * Mb + y]; };
    if (N == 1) {
        out.factorized = K1;
    } else if (N == 2) {
        for (std::size_t x0 = 0; x0 < Mb; ++x0)
            for (std::size_t x2 = 0; x2 < Mb; ++x2) {
                cplx s(0.0, 0.0);
                for (std::size_t x1 = 0; x1 < Mb; ++x1) s += K(1, x0, x1) * K(2, x1, x2);
                out.factorized.samples[x0 * Mb + x2] = w * s;
            }
    } else {
        const std::size_t inner = N - 3; // variables x_2 .. x_{N-2}
        if (static_cast<double>(Mb) * Mb * std::pow(static_cast<double>(Mb), static_cast<double>(inner)) > 1.5e8)
            throw std::length_error("compose_kernels: factorization route beyond budget");
        const std::size_t Ycount = ipow(Mb, static_cast<int>(inner));
        // H(x_1, x_{N-1}) = sum_y H_2 conj(H_1), with H_1 the product of the
        // conjugated even-index kernels and H_2 the product of the odd ones.
        std::vector<cplx> H(Mb * Mb);
        std::vector<std::size_t> xs(N + 1);
        for (std::size_t x1 = 0; x1 < Mb; ++x1) {
            for (std::size_t xl = 0; xl < Mb; ++xl) {
                cplx s(0.0, 0.0);
                for (std::size_t yi = 0; yi < Ycount; ++yi) {
                    xs[1] = x1;
                    xs[N - 1] = xl;
                    std::size_t r = yi;
                    for (std::size_t j = 2; j + 1 < N; ++j) {
                        xs[j] = r % Mb;
                        r /= Mb;
                    }
                    cplx H1(1.0, 0.0), H2(1.0, 0.0);
                    for (std::size_t j = 2; j <= N - 1; ++j) {
                        const cplx kv = K(j, xs[j - 1], xs[j]);
                        if (j % 2 == 0)
                            H1 *= std::conj(kv);
                        else
                            H2 *= kv;
                    }
                    s += H2 * std::conj(H1);
                }
                H[x1 * Mb + xl] = s * std::pow(w, static_cast<double>(inner));
            }
        }
        for (std::size_t x0 = 0; x0 < Mb; ++x0)
            for (std::size_t xN = 0; xN < Mb; ++xN) {
                cplx s(0.0, 0.0);
                for (std::size_t x1 = 0; x1 < Mb; ++x1)
                    for (std::size_t xl = 0; xl < Mb; ++xl)
                        s += K(1, x0, x1) * K(N, xl, xN) * H[x1 * Mb + xl];
                out.factorized.samples[x0 * Mb + xN] = w * w * s;
            }
    }
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < out.composed.samples.size(); ++i) {
        diff = std::max(diff, std::abs(out.composed.samples[i] - out.factorized.samples[i]));
        scale = std::max(scale, std::abs(out.composed.samples[i]));
    }
    out.factorization_residual = scale > 0.0 ? diff / scale : diff;
    return out;
}

} // namespace weylab

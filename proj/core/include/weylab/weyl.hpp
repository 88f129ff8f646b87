#pragma once

#include "weylab/phase_space.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

namespace weylab {

// d x d real matrix (row-major) selecting the quantization Op_A.
struct MatrixA {
    int d{1};
    std::vector<double> entries{0.0};

    static MatrixA scalar(int d, double a);
    static MatrixA kohn_nirenberg(int d) { return scalar(d, 0.0); }
    static MatrixA weyl(int d) { return scalar(d, 0.5); }
    static MatrixA identity(int d) { return scalar(d, 1.0); }

    double operator()(int r, int c) const { return entries[static_cast<std::size_t>(r * d + c)]; }
    MatrixA minus(const MatrixA& other) const;
    // Entries in (1/2)Z, so that the kernel shear permutes grid points.
    bool half_integer() const;
    bool operator==(const MatrixA& o) const { return d == o.d && entries == o.entries; }
};

// (2/pi)^{d/2} h^{2d} sum_Y a(X - Y) b(Y) exp(2i sigma(X, Y)), periodic.
// O(n^{3d}) through partial transforms along the xi axes.
GridFunction twisted_convolution(const GridFunction& a, const GridFunction& b);
// Direct O(n^{4d}) double sum of the same expression.
GridFunction twisted_convolution_slow(const GridFunction& a, const GridFunction& b);

// (2 pi)^{-d/2} a *_sigma F_sigma(b)
GridFunction weyl_product(const GridFunction& a, const GridFunction& b);

enum class KernelDirection { symbol_to_kernel, kernel_to_symbol };

// Kernels are stored in shear coordinates (u, t) = (x - A(x - y), x - y) with
// u on the h-grid and t on the 2h-grid, which makes the map an exact bijection:
// K(u, t) = (2 pi)^{-d/2} (F_2^{-1} a)(u, t).
GridFunction kernel_symbol_map(const GridFunction& input, const MatrixA& A, KernelDirection direction);

using KernelCallback = std::function<cplx(std::span<const double> x, std::span<const double> y)>;

// Fills a shear-coordinate kernel from K(x, y) evaluated at the lattice points
// x = h (u + 2 A t), y = x - 2 h t.
GridFunction sample_kernel_lattice(const PhaseGrid& grid, const MatrixA& A, const KernelCallback& kernel);

// Matrix of Op_A acting on the base grid of n/2 points per axis with spacing
// 2h = sqrt(2 pi / (n/2)); entries carry the quadrature weight (2h)^d.
struct OperatorMatrix {
    int d{1};
    int m{8};
    double spacing{0.0};
    Eigen::MatrixXcd M;

    OperatorMatrix compose(const OperatorMatrix& other) const;
};

OperatorMatrix operator_matrix(const GridFunction& a, const MatrixA& A);
OperatorMatrix operator_matrix_from_kernel(const GridFunction& kernel, const MatrixA& A);

// a_2 with Op_{A2}(a_2) = Op_{A1}(a_1), via exp(i <(A1 - A2) D_xi, D_x>).
GridFunction calculi_transform(const GridFunction& a, const MatrixA& A1, const MatrixA& A2);

// Symbol product for Op_A, conjugating the Weyl product by calculi transforms.
GridFunction pseudo_product_A(const GridFunction& a, const GridFunction& b, const MatrixA& A);

struct KernelComposition {
    GridFunction composed;           // matrix route
    GridFunction factorized;         // G / H factorization route
    double factorization_residual{}; // max |difference| / max |matrix route|
    double frobenius_product{};      // ||M_1 ... M_N||_F, M_j = delta^d K_j
    double frobenius_bound{};        // prod_j ||M_j||_F
};

// Kernels K_j(x, y) are base-space functions with 2d axes (x block, then y).
KernelComposition compose_kernels(const std::vector<GridFunction>& kernels);

} // namespace weylab

#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace weylab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Periodic discretization of R^{2d}: n samples per axis, spacing h with h^2 n = pi,
// so exp(2i sigma(Y, Z)) restricted to the grid is an exact character.
struct PhaseGrid {
    int d{1};
    int n{16};
    double h{0.0};
    double L{0.0};

    int axes() const { return 2 * d; }
    std::size_t size() const;
    // Spacing of the base-space companion grid (n points per axis), sqrt(2 pi / n).
    double base_spacing() const;
    double coord(int index) const { return (index - n / 2) * h; }
};

PhaseGrid make_grid(int d, int n);

enum class GridKind {
    symbol,   // function on the phase grid, 2d axes ordered x_1..x_d, xi_1..xi_d
    function, // function on a base grid of R^d (or R^D in general), any spacing
    kernel    // operator kernel in shear coordinates (u, t): u spacing h, t spacing 2h
};

// Complex samples on a centered periodic grid, row-major over the axes with
// the first axis slowest. Centered coordinate of raw index i is i - n/2.
struct GridFunction {
    GridKind kind{GridKind::symbol};
    int d{1};
    int n{16};
    double spacing{0.0};
    std::vector<cplx> samples;

    int axes() const { return kind == GridKind::function ? d : 2 * d; }
    std::size_t size() const { return samples.size(); }
    double quadrature_weight() const;
    PhaseGrid phase_grid() const;

    cplx& operator[](std::size_t i) { return samples[i]; }
    const cplx& operator[](std::size_t i) const { return samples[i]; }

    static GridFunction zeros_symbol(const PhaseGrid& grid);
    // Base-space function with the self-dual spacing sqrt(2 pi / n).
    static GridFunction zeros_function(int d, int n);
    static GridFunction zeros_function(int d, int n, double spacing);
};

bool same_grid(const GridFunction& a, const GridFunction& b);
void require_same_grid(const GridFunction& a, const GridFunction& b, const char* what);

// Physical coordinates of a flat index.
std::vector<double> coordinates(const GridFunction& f, std::size_t flat);

// sigma((x, xi), (y, eta)) = <y, xi> - <x, eta>
double sigma(std::span<const double> X, std::span<const double> Y);

// Unitary discrete Fourier transform on a self-dual base grid, with the
// (2 pi)^{-d/2} exp(-i<x, xi>) convention. Frequencies share the space axis.
GridFunction fourier(const GridFunction& f, bool inverse);

// pi^{-d} h^{2d} sum_Z a(Z) exp(2i sigma(Y, Z)); an exact involution on the grid.
GridFunction symplectic_fourier(const GridFunction& a);

struct GaussianAtomSpec {
    std::vector<double> center;     // X_0 in R^{2d}
    std::vector<double> modulation; // Y_0 in R^{2d}
    double gamma{0.70710678118654752440};
    cplx amplitude{1.0, 0.0};
};

// |center| + |modulation| must stay within L/4.
bool truncation_safe(const PhaseGrid& grid, const GaussianAtomSpec& spec);

// amplitude * exp(-|Z - X_0|^2 / (2 gamma^2)) * exp(2i sigma(Y_0, Z))
GridFunction gaussian_atom(const PhaseGrid& grid, const GaussianAtomSpec& spec);

// amplitude * exp(-|x - c|^2 / (2 gamma^2)) * exp(i <xi_0, x>) on a base grid.
GridFunction gaussian_function(int d, int n, std::span<const double> center, std::span<const double> frequency,
                               double gamma, double spacing = 0.0);

// Largest sample magnitude on the outermost layer of the periodic box,
// relative to the largest magnitude overall.
double boundary_ratio(const GridFunction& f);

// Inner product sum f conj(g) times the quadrature weight.
cplx inner(const GridFunction& f, const GridFunction& g);
double l2_norm(const GridFunction& f);
// Plain counting-measure l2 norm of the samples.
double l2_norm_counting(const GridFunction& f);

// Reflection a(-X) on the grid (periodic).
GridFunction reflect(const GridFunction& a);

// JSON: {"kind", "d", "n", "h", "data": [re0, im0, re1, im1, ...]}
std::string to_json(const GridFunction& f);
GridFunction grid_function_from_json(const std::string& text);
void write_binary(std::ostream& os, const GridFunction& f);
GridFunction read_binary(std::istream& is);

} // namespace weylab

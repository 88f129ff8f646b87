#include "weylab/phase_space.hpp"

#include "fft.hpp"
#include "indexing.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace weylab {

using detail::decode;
using detail::encode;
using detail::ipow;

std::size_t PhaseGrid::size() const { return ipow(static_cast<std::size_t>(n), 2 * d); }

double PhaseGrid::base_spacing() const { return std::sqrt(2.0 * kPi / n); }

PhaseGrid make_grid(int d, int n) {
    if (d < 1) throw std::invalid_argument("make_grid: d must be >= 1");
    if (n < 4 || n % 2 != 0) throw std::invalid_argument("make_grid: n must be even and >= 4");
    PhaseGrid g;
    g.d = d;
    g.n = n;
    g.h = std::sqrt(kPi / n);
    g.L = n * g.h;
    return g;
}

double GridFunction::quadrature_weight() const {
    if (kind == GridKind::kernel) return std::pow(spacing * spacing * 2.0, d);
    return std::pow(spacing, axes());
}

PhaseGrid GridFunction::phase_grid() const {
    if (kind == GridKind::function) throw std::invalid_argument("base-space function has no phase grid");
    return make_grid(d, n);
}

GridFunction GridFunction::zeros_symbol(const PhaseGrid& grid) {
    GridFunction f;
    f.kind = GridKind::symbol;
    f.d = grid.d;
    f.n = grid.n;
    f.spacing = grid.h;
    f.samples.assign(grid.size(), cplx(0.0, 0.0));
    return f;
}

GridFunction GridFunction::zeros_function(int d, int n) { return zeros_function(d, n, std::sqrt(2.0 * kPi / n)); }

GridFunction GridFunction::zeros_function(int d, int n, double spacing) {
    if (d < 1 || n < 2 || n % 2 != 0) throw std::invalid_argument("zeros_function: bad shape");
    GridFunction f;
    f.kind = GridKind::function;
    f.d = d;
    f.n = n;
    f.spacing = spacing;
    f.samples.assign(ipow(static_cast<std::size_t>(n), d), cplx(0.0, 0.0));
    return f;
}

bool same_grid(const GridFunction& a, const GridFunction& b) {
    return a.kind == b.kind && a.d == b.d && a.n == b.n && std::abs(a.spacing - b.spacing) <= 1e-14 * a.spacing &&
           a.samples.size() == b.samples.size();
}

void require_same_grid(const GridFunction& a, const GridFunction& b, const char* what) {
    if (!same_grid(a, b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

std::vector<double> coordinates(const GridFunction& f, std::size_t flat) {
    const int D = f.axes();
    std::vector<int> c(D);
    decode(flat, D, f.n, c.data());
    std::vector<double> x(D);
    for (int a = 0; a < D; ++a) {
        double sp = f.spacing;
        if (f.kind == GridKind::kernel && a >= f.d) sp = 2.0 * f.spacing;
        x[a] = c[a] * sp;
    }
    return x;
}

double sigma(std::span<const double> X, std::span<const double> Y) {
    if (X.size() != Y.size() || X.size() % 2 != 0) throw std::invalid_argument("sigma: dimension mismatch");
    const std::size_t d = X.size() / 2;
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) s += Y[k] * X[d + k] - X[k] * Y[d + k];
    return s;
}

GridFunction fourier(const GridFunction& f, bool inverse) {
    if (f.kind != GridKind::function) throw std::invalid_argument("fourier: expects a base-space function");
    const double self_dual = std::sqrt(2.0 * kPi / f.n);
    if (std::abs(f.spacing - self_dual) > 1e-14 * self_dual)
        throw std::invalid_argument("fourier: grid is not self-dual");
    GridFunction out = f;
    const int D = f.axes();
    detail::centered_dft(out.samples.data(), D, f.n, (1u << D) - 1u, inverse ? +1 : -1);
    const double scale = std::pow(static_cast<double>(f.n), -0.5 * D);
    for (auto& v : out.samples) v *= scale;
    return out;
}

GridFunction symplectic_fourier(const GridFunction& a) {
    if (a.kind != GridKind::symbol) throw std::invalid_argument("symplectic_fourier: expects a symbol");
    const double h = std::sqrt(kPi / a.n);
    if (std::abs(a.spacing - h) > 1e-14 * h)
        throw std::invalid_argument("symplectic_fourier: grid is not symplectically self-dual");
    const int d = a.d;
    const int D = 2 * d;
    const int n = a.n;
    std::vector<cplx> A = a.samples;
    detail::centered_dft(A.data(), D, n, (1u << D) - 1u, -1);
    GridFunction out = a;
    const double scale = std::pow(static_cast<double>(n), -d);
    std::vector<int> Y(D), K(D);
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        decode(i, D, n, Y.data());
        // out(y, eta) = A(k_z = -eta, k_zeta = y) / n^d
        for (int k = 0; k < d; ++k) {
            K[k] = -Y[d + k];
            K[d + k] = Y[k];
        }
        out.samples[i] = A[encode(K.data(), D, n)] * scale;
    }
    return out;
}

bool truncation_safe(const PhaseGrid& grid, const GaussianAtomSpec& spec) {
    auto norm = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::sqrt(s);
    };
    return norm(spec.center) + norm(spec.modulation) <= grid.L / 4.0 + 1e-12;
}

GridFunction gaussian_atom(const PhaseGrid& grid, const GaussianAtomSpec& spec) {
    const int D = grid.axes();
    if (static_cast<int>(spec.center.size()) != D || static_cast<int>(spec.modulation.size()) != D)
        throw std::invalid_argument("gaussian_atom: dimension mismatch");
    if (!(spec.gamma > 0.0)) throw std::invalid_argument("gaussian_atom: gamma must be positive");
    if (!truncation_safe(grid, spec)) throw std::invalid_argument("gaussian_atom: spec violates truncation safety");
    GridFunction f = GridFunction::zeros_symbol(grid);
    if (spec.amplitude == cplx(0.0, 0.0)) return f;
    std::vector<int> c(D);
    std::vector<double> Z(D);
    const double inv = 1.0 / (2.0 * spec.gamma * spec.gamma);
    for (std::size_t i = 0; i < f.samples.size(); ++i) {
        decode(i, D, grid.n, c.data());
        double r2 = 0.0;
        for (int a = 0; a < D; ++a) {
            Z[a] = c[a] * grid.h;
            const double dz = Z[a] - spec.center[a];
            r2 += dz * dz;
        }
        const double phase = 2.0 * sigma(spec.modulation, Z);
        f.samples[i] = spec.amplitude * std::exp(-r2 * inv) * cplx(std::cos(phase), std::sin(phase));
    }
    return f;
}

GridFunction gaussian_function(int d, int n, std::span<const double> center, std::span<const double> frequency,
                               double gamma, double spacing) {
    if (static_cast<int>(center.size()) != d || static_cast<int>(frequency.size()) != d)
        throw std::invalid_argument("gaussian_function: dimension mismatch");
    if (!(gamma > 0.0)) throw std::invalid_argument("gaussian_function: gamma must be positive");
    GridFunction f = spacing > 0.0 ? GridFunction::zeros_function(d, n, spacing) : GridFunction::zeros_function(d, n);
    std::vector<int> c(d);
    const double inv = 1.0 / (2.0 * gamma * gamma);
    for (std::size_t i = 0; i < f.samples.size(); ++i) {
        decode(i, d, n, c.data());
        double r2 = 0.0, ph = 0.0;
        for (int a = 0; a < d; ++a) {
            const double x = c[a] * f.spacing;
            r2 += (x - center[a]) * (x - center[a]);
            ph += frequency[a] * x;
        }
        f.samples[i] = std::exp(-r2 * inv) * cplx(std::cos(ph), std::sin(ph));
    }
    return f;
}

double boundary_ratio(const GridFunction& f) {
    const int D = f.axes();
    std::vector<int> c(D);
    double edge = 0.0, all = 0.0;
    for (std::size_t i = 0; i < f.samples.size(); ++i) {
        const double m = std::abs(f.samples[i]);
        all = std::max(all, m);
        decode(i, D, f.n, c.data());
        bool on_edge = false;
        for (int a = 0; a < D; ++a)
            if (c[a] == -f.n / 2 || c[a] == f.n / 2 - 1) on_edge = true;
        if (on_edge) edge = std::max(edge, m);
    }
    return all > 0.0 ? edge / all : 0.0;
}

cplx inner(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f, g, "inner");
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < f.samples.size(); ++i) s += f.samples[i] * std::conj(g.samples[i]);
    return s * f.quadrature_weight();
}

double l2_norm(const GridFunction& f) { return l2_norm_counting(f) * std::sqrt(f.quadrature_weight()); }

double l2_norm_counting(const GridFunction& f) {
    double s = 0.0;
    for (const auto& v : f.samples) s += std::norm(v);
    return std::sqrt(s);
}

GridFunction reflect(const GridFunction& a) {
    const int D = a.axes();
    GridFunction out = a;
    std::vector<int> c(D);
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        decode(i, D, a.n, c.data());
        for (auto& v : c) v = -v;
        out.samples[i] = a.samples[encode(c.data(), D, a.n)];
    }
    return out;
}

namespace {

std::string kind_name(GridKind k) {
    switch (k) {
    case GridKind::symbol: return "symbol";
    case GridKind::function: return "function";
    case GridKind::kernel: return "kernel";
    }
    return "?";
}

GridKind kind_from(const std::string& s) {
    if (s == "symbol") return GridKind::symbol;
    if (s == "function") return GridKind::function;
    if (s == "kernel") return GridKind::kernel;
    throw std::invalid_argument("unknown grid kind: " + s);
}

constexpr char kMagic[8] = {'W', 'Y', 'L', 'G', 'F', 'N', '0', '1'};

} // namespace

std::string to_json(const GridFunction& f) {
    nlohmann::json j;
    j["kind"] = kind_name(f.kind);
    j["d"] = f.d;
    j["n"] = f.n;
    j["h"] = f.spacing;
    std::vector<double> data;
    data.reserve(2 * f.samples.size());
    for (const auto& v : f.samples) {
        data.push_back(v.real());
        data.push_back(v.imag());
    }
    j["data"] = std::move(data);
    return j.dump();
}

GridFunction grid_function_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    GridFunction f;
    f.kind = kind_from(j.at("kind").get<std::string>());
    f.d = j.at("d").get<int>();
    f.n = j.at("n").get<int>();
    f.spacing = j.at("h").get<double>();
    const auto data = j.at("data").get<std::vector<double>>();
    const std::size_t expected = ipow(static_cast<std::size_t>(f.n), f.axes());
    if (data.size() != 2 * expected) throw std::invalid_argument("grid function JSON: sample count mismatch");
    f.samples.resize(expected);
    for (std::size_t i = 0; i < expected; ++i) f.samples[i] = cplx(data[2 * i], data[2 * i + 1]);
    return f;
}

void write_binary(std::ostream& os, const GridFunction& f) {
    os.write(kMagic, sizeof kMagic);
    const std::int32_t hdr[3] = {static_cast<std::int32_t>(f.kind), f.d, f.n};
    os.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
    os.write(reinterpret_cast<const char*>(&f.spacing), sizeof f.spacing);
    os.write(reinterpret_cast<const char*>(f.samples.data()),
             static_cast<std::streamsize>(f.samples.size() * sizeof(cplx)));
}

GridFunction read_binary(std::istream& is) {
    char magic[8];
    is.read(magic, sizeof magic);
    if (!is || !std::equal(magic, magic + 8, kMagic)) throw std::invalid_argument("not a grid function stream");
    std::int32_t hdr[3];
    is.read(reinterpret_cast<char*>(hdr), sizeof hdr);
    GridFunction f;
    f.kind = static_cast<GridKind>(hdr[0]);
    f.d = hdr[1];
    f.n = hdr[2];
    is.read(reinterpret_cast<char*>(&f.spacing), sizeof f.spacing);
    if (!is || f.d < 1 || f.n < 2) throw std::invalid_argument("corrupt grid function header");
    f.samples.resize(ipow(static_cast<std::size_t>(f.n), f.axes()));
    is.read(reinterpret_cast<char*>(f.samples.data()), static_cast<std::streamsize>(f.samples.size() * sizeof(cplx)));
    if (!is) throw std::invalid_argument("truncated grid function stream");
    return f;
}

} // namespace weylab

#include "identity_suite.hpp"

#include "weylab/weylab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace weylab::cli {

namespace {

double max_abs(const std::vector<cplx>& v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

double rel(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    const double s = max_abs(b);
    return s > 0.0 ? d / s : d;
}

double rel(const GridFunction& a, const GridFunction& b) { return rel(a.samples, b.samples); }

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double rel(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

GridFunction scaled(GridFunction a, cplx c) {
    for (auto& v : a.samples) v *= c;
    return a;
}

GridFunction conj(GridFunction a) {
    for (auto& v : a.samples) v = std::conj(v);
    return a;
}

GridFunction constant(const PhaseGrid& g, cplx c) {
    auto a = GridFunction::zeros_symbol(g);
    std::fill(a.samples.begin(), a.samples.end(), c);
    return a;
}

std::vector<GridFunction> symbols(const PhaseGrid& g, std::uint64_t seed, int count, int threads) {
    EnsembleSpec e;
    e.seed = seed;
    e.count = count;
    e.center_radius = std::min(0.75, g.L / 8.0);
    e.modulation_radius = e.center_radius;
    return ensemble_generate(e, g, threads);
}

int raw(int c, int n) { return ((c + n / 2) % n + n) % n; }

// centered index pairs of a d = 1 symbol
std::size_t at(int x, int xi, int n) { return static_cast<std::size_t>(raw(x, n) * n + raw(xi, n)); }

double stftcompare(const GridFunction& a, const GridFunction& w) {
    // V_sigma a(X, (y, eta)) = 2 V a(X, (-eta, y)) in index units
    const int n = a.n;
    const auto S = symplectic_stft(a, w);
    const auto V = stft(a, w);
    std::vector<cplx> mapped(S.samples.size());
    for (std::size_t x = 0; x < S.block(); ++x)
        for (int y = -n / 2; y < n / 2; ++y)
            for (int eta = -n / 2; eta < n / 2; ++eta)
                mapped[x * S.block() + at(y, eta, n)] = 2.0 * V.at(x, at(-eta, y, n));
    return rel(S.samples, mapped);
}

double stft_link(const GridFunction& a) {
    // |V_Phi K(x, y, xi, -eta)| = 2^{-1} (2 pi)^{-1/2} |V_Psi' a((Y + X)/2, (Y - X)/2)| on the interior box
    const int n = a.n, m = n / 2;
    const auto g = a.phase_grid();
    const auto Mo = operator_matrix(a, MatrixA::weyl(1));
    const double s = Mo.spacing;
    auto K = GridFunction::zeros_function(2, m, s);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) K[static_cast<std::size_t>(i * m + j)] = Mo.M(i, j) / s;
    const double x0 = 0.3, xi0 = -0.4;
    GaussianAtomSpec ps;
    ps.center = {x0, -xi0};
    ps.modulation = {0.0, 0.0};
    ps.gamma = 1.0;
    const auto psi = gaussian_atom(g, ps);
    auto Phi = GridFunction::zeros_function(2, m, s);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const double x = (i - m / 2) * s, y = (j - m / 2) * s, u = 0.5 * (x + y), v = x - y;
            Phi[static_cast<std::size_t>(i * m + j)] =
                std::exp(-0.5 * (u - x0) * (u - x0) - 0.5 * v * v) * std::polar(1.0, -v * xi0);
        }
    const auto V = stft(K, Phi);
    const double c = 0.5 / std::sqrt(2.0 * kPi);
    const int b = m / 4;
    std::vector<cplx> lhs, rhs;
    for (int ix = -b; ix < b; ++ix)
        for (int iy = -b; iy < b; ++iy)
            for (int ixi = -b; ixi < b; ixi += 2)
                for (int ie = -b; ie < b; ie += 3) {
                    lhs.emplace_back(std::abs(V.at(at(ix, iy, m), at(ixi, -ie, m))));
                    rhs.emplace_back(c * std::abs(symplectic_stft_at(a, psi, {iy + ix, ie + ixi}, {iy - ix, ie - ixi})));
                }
    return rel(lhs, rhs);
}

} // namespace

const std::map<std::string, double>& default_tolerances() {
    static const std::map<std::string, double> t{
        {"involution", 1e-12},          {"stftcompare", 1e-10},       {"tvist1", 1e-10},
        {"weylfourier1", 1e-10},        {"weyltwist2", 1e-10},        {"duality0", 1e-10},
        {"twist_duality", 1e-10},       {"associativity_weyl", 1e-10}, {"associativity_twist", 1e-10},
        {"unit", 1e-10},                {"kernel_roundtrip", 1e-12},  {"operator_identity", 1e-12},
        {"hermitian", 1e-12},           {"calculi_group", 1e-12},     {"calculi_operator", 1e-6},
        {"route_weyl_matrix", 1e-6},    {"route_pseudo_kn", 1e-6},    {"moyal", 1e-10},
        {"twistfourmod", 1e-8},         {"stft_link", 1e-8},
    };
    return t;
}

std::vector<Check> run_identity_suite(const IdentityOptions& o) {
    for (const auto& [k, v] : o.tolerance) {
        if (!default_tolerances().count(k)) throw std::invalid_argument("unknown tolerance key: " + k);
        if (!(v > 0.0)) throw std::invalid_argument("tolerance must be positive: " + k);
    }
    if (o.samples < 1) throw std::invalid_argument("samples must be positive");
    const auto g = make_grid(1, o.n);
    const int route_n = std::max(o.n, kRouteGrid);
    const int small_n = std::min(o.n, 32);
    const int link_n = std::max(o.n, 64);
    const auto gr = make_grid(1, route_n), gs = make_grid(1, small_n), gl = make_grid(1, link_n);
    const int S = o.samples;
    const auto a = symbols(g, o.seed, 3 * S, o.threads);
    const auto ar = route_n == o.n ? a : symbols(gr, o.seed, 2 * S, o.threads);
    const auto as = small_n == o.n ? a : symbols(gs, o.seed, 2 * S, o.threads);
    const double k = 1.0 / std::sqrt(2.0 * kPi);
    const std::vector<MatrixA> calculi{MatrixA::kohn_nirenberg(1), MatrixA::weyl(1), MatrixA::identity(1)};

    std::vector<Check> out;
    auto run = [&](const std::string& name, int grid, const std::function<double()>& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        Check c;
        c.name = name;
        c.grid = grid;
        c.value = fn();
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const auto it = o.tolerance.find(name);
        c.tolerance = it != o.tolerance.end() ? it->second : default_tolerances().at(name);
        out.push_back(c);
    };
    // worst value over the sample triples (a_i, b_i, c_i)
    auto over = [&](const std::function<double(const GridFunction&, const GridFunction&, const GridFunction&)>& f) {
        double w = 0.0;
        for (int i = 0; i < S; ++i) w = std::max(w, f(a[3 * i], a[3 * i + 1], a[3 * i + 2]));
        return w;
    };

    run("involution", o.n, [&] {
        return over([](const GridFunction& x, const GridFunction&, const GridFunction&) {
            return rel(symplectic_fourier(symplectic_fourier(x)), x);
        });
    });
    run("stftcompare", small_n, [&] {
        double w = 0.0;
        for (int i = 0; i < std::min(S, 2); ++i) w = std::max(w, stftcompare(as[2 * i], as[2 * i + 1]));
        return w;
    });
    run("tvist1", o.n, [&] {
        return over([&](const GridFunction& x, const GridFunction& y, const GridFunction&) {
            return rel(weyl_product(x, y), scaled(twisted_convolution_slow(x, symplectic_fourier(y)), k));
        });
    });
    run("weylfourier1", o.n, [&] {
        return over([](const GridFunction& x, const GridFunction& y, const GridFunction&) {
            const auto lhs = symplectic_fourier(twisted_convolution(x, y));
            return std::max(rel(twisted_convolution(symplectic_fourier(x), y), lhs),
                            rel(twisted_convolution(reflect(x), symplectic_fourier(y)), lhs));
        });
    });
    run("weyltwist2", o.n, [&] {
        return over([&](const GridFunction& x, const GridFunction& y, const GridFunction&) {
            return rel(symplectic_fourier(weyl_product(x, y)),
                       scaled(twisted_convolution(symplectic_fourier(x), symplectic_fourier(y)), k));
        });
    });
    run("duality0", o.n, [&] {
        return over([](const GridFunction& x, const GridFunction& y, const GridFunction& b) {
            const cplx ref = inner(weyl_product(x, y), b);
            return std::max(rel(inner(y, weyl_product(conj(x), b)), ref), rel(inner(x, weyl_product(b, conj(y))), ref));
        });
    });
    run("twist_duality", o.n, [&] {
        return over([](const GridFunction& x, const GridFunction& y, const GridFunction& b) {
            const cplx ref = inner(twisted_convolution(x, y), b);
            const auto tx = conj(reflect(x)), ty = conj(reflect(y));
            return std::max(rel(inner(x, twisted_convolution(b, ty)), ref),
                            rel(inner(y, twisted_convolution(tx, b)), ref));
        });
    });
    run("associativity_weyl", o.n, [&] {
        return over([](const GridFunction& x, const GridFunction& y, const GridFunction& z) {
            return rel(weyl_product(weyl_product(x, y), z), weyl_product(x, weyl_product(y, z)));
        });
    });
    run("associativity_twist", o.n, [&] {
        return over([](const GridFunction& x, const GridFunction& y, const GridFunction& z) {
            return rel(twisted_convolution(twisted_convolution(x, y), z),
                       twisted_convolution(x, twisted_convolution(y, z)));
        });
    });
    run("unit", o.n, [&] {
        const auto one = constant(g, 1.0);
        return over([&](const GridFunction& x, const GridFunction&, const GridFunction&) {
            double w = std::max(rel(weyl_product(x, one), x), rel(weyl_product(one, x), x));
            for (const auto& A : calculi) w = std::max(w, rel(pseudo_product_A(x, one, A), x));
            return w;
        });
    });
    run("kernel_roundtrip", o.n, [&] {
        return over([&](const GridFunction& x, const GridFunction&, const GridFunction&) {
            double w = 0.0;
            for (const auto& A : calculi) {
                const auto K = kernel_symbol_map(x, A, KernelDirection::symbol_to_kernel);
                w = std::max(w, rel(kernel_symbol_map(K, A, KernelDirection::kernel_to_symbol), x));
            }
            return w;
        });
    });
    run("operator_identity", o.n, [&] {
        double w = 0.0;
        for (const auto& A : calculi) {
            const auto M = operator_matrix(constant(g, 1.0), A).M;
            w = std::max(w, (M - Eigen::MatrixXcd::Identity(M.rows(), M.cols())).cwiseAbs().maxCoeff());
        }
        return w;
    });
    run("hermitian", o.n, [&] {
        return over([](const GridFunction& x, const GridFunction&, const GridFunction&) {
            auto r = x;
            for (auto& v : r.samples) v = v.real();
            const auto M = operator_matrix(r, MatrixA::weyl(1)).M;
            return (M - M.adjoint()).cwiseAbs().maxCoeff() / M.cwiseAbs().maxCoeff();
        });
    });
    run("calculi_group", o.n, [&] {
        return over([&](const GridFunction& x, const GridFunction&, const GridFunction&) {
            double w = 0.0;
            for (const auto& A1 : calculi)
                for (const auto& A2 : calculi)
                    for (const auto& A3 : calculi)
                        w = std::max(w, rel(calculi_transform(calculi_transform(x, A1, A2), A2, A3),
                                            calculi_transform(x, A1, A3)));
            return w;
        });
    });
    run("calculi_operator", o.n, [&] {
        return over([&](const GridFunction& x, const GridFunction&, const GridFunction&) {
            double w = 0.0;
            for (const auto& A1 : calculi)
                for (const auto& A2 : calculi)
                    w = std::max(w, rel(operator_matrix(calculi_transform(x, A1, A2), A2).M, operator_matrix(x, A1).M));
            return w;
        });
    });
    run("route_weyl_matrix", route_n, [&] {
        double w = 0.0;
        const auto A = MatrixA::weyl(1);
        for (int i = 0; i < S; ++i) {
            const auto& x = ar[2 * i];
            const auto& y = ar[2 * i + 1];
            w = std::max(w, rel(operator_matrix(weyl_product(x, y), A).M,
                                operator_matrix(x, A).compose(operator_matrix(y, A)).M));
        }
        return w;
    });
    run("route_pseudo_kn", route_n, [&] {
        double w = 0.0;
        const auto A = MatrixA::kohn_nirenberg(1);
        for (int i = 0; i < S; ++i) {
            const auto& x = ar[2 * i];
            const auto& y = ar[2 * i + 1];
            w = std::max(w, rel(operator_matrix(pseudo_product_A(x, y, A), A).M,
                                operator_matrix(x, A).compose(operator_matrix(y, A)).M));
        }
        return w;
    });
    const auto window = standard_window(g, Measure::quadrature);
    run("moyal", o.n, [&] {
        double w = 0.0;
        for (int i = 0; i < std::min(S, 2); ++i) {
            const double m2 = modulation_norm(a[i], window, MixedNormSpec{}, ModulationFlavor::symplectic_M);
            w = std::max(w, std::abs(m2 - l2_norm(a[i])) / l2_norm(a[i]));
        }
        return w;
    });
    run("twistfourmod", o.n, [&] {
        // M^{p,q}_omega(a) = W^{q,p}_{omega_0}(F a) with window F Phi and omega_0(X, Y) = omega(Y, X)
        const auto Fw = symplectic_fourier(window);
        MixedNormSpec lhs, rhs;
        lhs.p = rhs.q = Exponent::from_value(Rational(1));
        lhs.q = rhs.p = Exponent::infinity();
        lhs.weight = WeightSpec::parse("poly:s=1@X*poly:s=-0.5@Y", 4);
        rhs.weight = WeightSpec::parse("poly:s=1@Y*poly:s=-0.5@X", 4);
        double w = 0.0;
        for (int i = 0; i < std::min(S, 2); ++i) {
            const double m = modulation_norm(a[i], window, lhs, ModulationFlavor::symplectic_M);
            const double v = modulation_norm(symplectic_fourier(a[i]), Fw, rhs, ModulationFlavor::symplectic_W);
            w = std::max(w, std::abs(m - v) / m);
        }
        return w;
    });
    run("stft_link", link_n, [&] {
        const auto al = link_n == o.n ? a : symbols(gl, o.seed, 1, o.threads);
        return stft_link(al.front());
    });
    return out;
}

} // namespace weylab::cli

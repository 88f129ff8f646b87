#include "weylab/multilinear.hpp"

#include "indexing.hpp"
#include "parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace weylab {

using detail::decode;
using detail::encode;
using detail::ipow;

GridFunction nfold_product(const std::vector<GridFunction>& symbols, const MatrixA& A) {
    if (symbols.empty()) throw std::invalid_argument("nfold_product: need at least one symbol");
    GridFunction acc = symbols.front();
    for (std::size_t j = 1; j < symbols.size(); ++j) {
        require_same_grid(acc, symbols[j], "nfold_product");
        acc = pseudo_product_A(acc, symbols[j], A);
    }
    return acc;
}

GridFunction nfold_twist(const std::vector<GridFunction>& symbols) {
    if (symbols.empty()) throw std::invalid_argument("nfold_twist: need at least one symbol");
    GridFunction acc = symbols.front();
    for (std::size_t j = 1; j < symbols.size(); ++j) acc = twisted_convolution(acc, symbols[j]);
    return acc;
}

STFTTensor stft_f_form(const STFTTensor& V) {
    const int D = V.axes, n = V.n;
    const std::size_t M = V.block();
    STFTTensor F = V;
    std::vector<int> cx(D), cy(D), s(D), t(D);
    for (std::size_t x = 0; x < M; ++x) {
        decode(x, D, n, cx.data());
        for (std::size_t y = 0; y < M; ++y) {
            decode(y, D, n, cy.data());
            for (int k = 0; k < D; ++k) {
                s[k] = cx[k] + cy[k];
                t[k] = cx[k] - cy[k];
            }
            F.samples[x * M + y] = V.samples[encode(s.data(), D, n) * M + encode(t.data(), D, n)];
        }
    }
    return F;
}

STFTTensor stft_integral_representation(const std::vector<STFTTensor>& F) {
    const std::size_t N = F.size();
    if (N < 2) throw std::invalid_argument("stft_integral_representation: need N >= 2");
    const STFTTensor& F1 = F.front();
    for (const auto& Fj : F) {
        if (Fj.flavor != StftFlavor::symplectic || Fj.axes != F1.axes || Fj.n != F1.n)
            throw std::invalid_argument("stft_integral_representation: tensors must share one symbol grid");
    }
    const int D = F1.axes, d = D / 2, n = F1.n;
    const std::size_t M = F1.block();
    const double Md = static_cast<double>(M);
    if (Md * Md * Md * static_cast<double>(N - 1) > kRepresentationBudget)
        throw std::length_error("stft_integral_representation: quadrature beyond budget");

    std::vector<int> coords(M * D);
    for (std::size_t i = 0; i < M; ++i) decode(i, D, n, &coords[i * D]);
    std::vector<cplx> w(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) w[k] = std::polar(1.0, 2.0 * kPi * k / n);
    // sigma(U, V) in grid units, reduced mod n
    auto phase = [&](std::size_t a, std::size_t b, std::size_t o) {
        const int* A = &coords[a * D];
        const int* B = &coords[b * D];
        const int* O = &coords[o * D];
        long s = 0;
        for (int k = 0; k < d; ++k)
            s += static_cast<long>(B[k] - O[k]) * (A[d + k] - O[d + k]) -
                 static_cast<long>(A[k] - O[k]) * (B[d + k] - O[d + k]);
        return w[static_cast<std::size_t>(((s % n) + n) % n)];
    };

    const double h = std::sqrt(kPi / n);
    const double weight = std::pow(h, static_cast<double>(D) * static_cast<double>(N - 1));
    STFTTensor out = F1;
    std::vector<cplx> G(M), Gn(M);
    for (std::size_t x0 = 0; x0 < M; ++x0) {
        // G(X_1) = F_1(X_1, X_0), then G(X_{j+1}) = sum_{X_j} G(X_j) F_{j+1}(X_{j+1}, X_j) e^{2i sigma}
        for (std::size_t x1 = 0; x1 < M; ++x1) G[x1] = F[0].samples[x1 * M + x0];
        for (std::size_t j = 1; j < N; ++j) {
            for (std::size_t xn = 0; xn < M; ++xn) {
                cplx s(0.0, 0.0);
                for (std::size_t xj = 0; xj < M; ++xj)
                    s += G[xj] * F[j].samples[xn * M + xj] * phase(xj, xn, x0);
                Gn[xn] = s;
            }
            std::swap(G, Gn);
        }
        for (std::size_t xn = 0; xn < M; ++xn) out.samples[xn * M + x0] = weight * G[xn];
    }
    return out;
}

RepresentationCheck representation_check(const std::vector<GridFunction>& symbols,
                                         const std::vector<GridFunction>& windows) {
    if (symbols.size() != windows.size() || symbols.size() < 2)
        throw std::invalid_argument("representation_check: need N >= 2 symbols and as many windows");
    const std::size_t N = symbols.size();
    const int d = symbols.front().d;
    std::vector<STFTTensor> F;
    F.reserve(N);
    for (std::size_t j = 0; j < N; ++j) F.push_back(stft_f_form(symplectic_stft(symbols[j], windows[j])));

    RepresentationCheck out;
    out.representation = stft_integral_representation(F);
    const MatrixA half = MatrixA::weyl(d);
    GridFunction Phi0 = nfold_product(windows, half);
    const double c = std::pow(kPi, static_cast<double>((N - 1) * d));
    for (auto& v : Phi0.samples) v *= c;
    out.direct = stft_f_form(symplectic_stft(nfold_product(symbols, half), Phi0));
    double diff = 0.0;
    for (std::size_t i = 0; i < out.direct.samples.size(); ++i) {
        diff = std::max(diff, std::abs(out.direct.samples[i] - out.representation.samples[i]));
        out.scale = std::max(out.scale, std::abs(out.direct.samples[i]));
    }
    out.residual = out.scale > 0.0 ? diff / out.scale : diff;
    return out;
}

GridFunction standard_window(const PhaseGrid& grid, Measure measure) {
    GaussianAtomSpec spec;
    spec.center.assign(static_cast<std::size_t>(grid.axes()), 0.0);
    spec.modulation.assign(static_cast<std::size_t>(grid.axes()), 0.0);
    GridFunction w = gaussian_atom(grid, spec);
    const double norm = measure == Measure::counting ? l2_norm_counting(w) : l2_norm(w);
    for (auto& v : w.samples) v /= norm;
    return w;
}

namespace {

std::vector<double> random_ball_point(std::mt19937_64& rng, int dim, double radius) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<double> p(static_cast<std::size_t>(dim));
    double r2 = 0.0;
    for (auto& v : p) {
        v = normal(rng);
        r2 += v * v;
    }
    const double r = radius * std::pow(uniform(rng), 1.0 / dim);
    const double s = r2 > 0.0 ? r / std::sqrt(r2) : 0.0;
    for (auto& v : p) v *= s;
    return p;
}

} // namespace

std::vector<GridFunction> ensemble_generate(const EnsembleSpec& spec, const PhaseGrid& grid, int threads) {
    if (spec.count < 0 || spec.atoms_per_symbol < 1) throw std::invalid_argument("ensemble: bad count");
    if (!(spec.gamma_min > 0.0) || spec.gamma_max < spec.gamma_min)
        throw std::invalid_argument("ensemble: bad width range");
    if (spec.center_radius < 0.0 || spec.modulation_radius < 0.0 ||
        spec.center_radius + spec.modulation_radius > grid.L / 4.0)
        throw std::invalid_argument("ensemble: center/modulation radius exceeds L/4");
    std::vector<GridFunction> out(static_cast<std::size_t>(spec.count));
    const GridFunction window = spec.normalization == EnsembleNormalization::unit_M2
                                    ? standard_window(grid, Measure::quadrature)
                                    : GridFunction{};
    detail::parallel_for(out.size(), threads, [&](std::size_t i) {
        std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                          static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> width(spec.gamma_min, spec.gamma_max);
        std::normal_distribution<double> normal(0.0, 1.0);
        GridFunction a = GridFunction::zeros_symbol(grid);
        for (int k = 0; k < spec.atoms_per_symbol; ++k) {
            GaussianAtomSpec atom;
            atom.center = random_ball_point(rng, grid.axes(), spec.center_radius);
            atom.modulation = random_ball_point(rng, grid.axes(), spec.modulation_radius);
            atom.gamma = width(rng);
            const double re = normal(rng);
            const double im = normal(rng);
            atom.amplitude = cplx(re, im);
            const GridFunction g = gaussian_atom(grid, atom);
            for (std::size_t t = 0; t < a.samples.size(); ++t) a.samples[t] += g.samples[t];
        }
        if (spec.normalization == EnsembleNormalization::unit_M2) {
            MixedNormSpec ns;
            const double m2 = modulation_norm(a, window, ns, ModulationFlavor::symplectic_M);
            if (m2 > 0.0)
                for (auto& v : a.samples) v /= m2;
        }
        out[i] = std::move(a);
    });
    return out;
}

namespace {

ModulationFlavor flavor_of(ProductMode m) {
    return m == ProductMode::weyl ? ModulationFlavor::symplectic_M : ModulationFlavor::symplectic_W;
}

std::optional<WeightSpec> weight_or_unit(const RatioConfig& c, std::size_t j, int arity) {
    if (c.weights.empty()) return std::nullopt;
    if (c.weights.size() != c.p.size()) throw std::invalid_argument("ratio: need one weight per exponent");
    if (c.weights[j].arity != arity) throw std::invalid_argument("ratio: weight arity must be 4d");
    if (c.weights[j].factors.empty()) return std::nullopt;
    return j == 0 ? c.weights[j].inverse() : c.weights[j];
}

MixedNormSpec factor_spec(const RatioConfig& c, std::size_t j, int arity, Measure measure) {
    MixedNormSpec s;
    s.p = j == 0 ? conjugate(c.p[0]) : c.p[j];
    s.q = j == 0 ? conjugate(c.q[0]) : c.q[j];
    s.weight = weight_or_unit(c, j, arity);
    s.measure = measure;
    return s;
}

void validate_config(const RatioConfig& c) {
    if (c.p.size() != c.q.size()) throw std::invalid_argument("ratio: p and q lengths differ");
    if (c.p.N() < 1) throw std::invalid_argument("ratio: need N >= 1");
}

GridFunction product_of(const std::vector<GridFunction>& symbols, const RatioOptions& options) {
    return options.mode == ProductMode::weyl ? nfold_product(symbols, options.A) : nfold_twist(symbols);
}

// ratios[k] for each config k on one tuple of symbols
std::vector<std::optional<double>> sample_ratios(const std::vector<GridFunction>& symbols,
                                                 const std::vector<RatioConfig>& configs,
                                                 const GridFunction& window, const RatioOptions& options) {
    const std::size_t N = symbols.size();
    const int arity = 2 * symbols.front().axes();
    const ModulationFlavor flavor = flavor_of(options.mode);
    std::vector<double> denom(configs.size(), 1.0);
    for (std::size_t j = 1; j <= N; ++j) {
        std::vector<MixedNormSpec> specs;
        for (const auto& c : configs) specs.push_back(factor_spec(c, j, arity, options.measure));
        const auto norms = modulation_norms(symbols[j - 1], window, specs, flavor);
        for (std::size_t k = 0; k < configs.size(); ++k) denom[k] *= norms[k];
    }
    std::vector<std::optional<double>> out(configs.size());
    bool any = false;
    for (double v : denom) any = any || (v > 0.0 && std::isfinite(v));
    if (!any) return out;
    const GridFunction prod = product_of(symbols, options);
    std::vector<MixedNormSpec> specs;
    for (const auto& c : configs) specs.push_back(factor_spec(c, 0, arity, options.measure));
    const auto num = modulation_norms(prod, window, specs, flavor);
    for (std::size_t k = 0; k < configs.size(); ++k) {
        if (denom[k] > 0.0 && std::isfinite(denom[k]) && std::isfinite(num[k])) out[k] = num[k] / denom[k];
    }
    return out;
}

void summarize(RatioReport& r) {
    std::vector<double> v;
    for (const auto& x : r.ratios) {
        if (x)
            v.push_back(*x);
        else
            ++r.nulls;
    }
    if (v.empty()) return;
    double s = 0.0;
    for (double x : v) s += x;
    r.mean = s / static_cast<double>(v.size());
    std::sort(v.begin(), v.end());
    r.max = v.back();
    auto rank = [&](double q) {
        const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
        return v[std::min(v.size() - 1, k == 0 ? 0 : k - 1)];
    };
    r.median = rank(0.5);
    r.q90 = rank(0.9);
}

} // namespace

std::optional<double> norm_ratio(const std::vector<GridFunction>& symbols, const RatioConfig& config,
                                 const GridFunction& window, const RatioOptions& options) {
    validate_config(config);
    if (symbols.size() != static_cast<std::size_t>(config.p.N()))
        throw std::invalid_argument("ratio: symbol count does not match the exponent tuple");
    return sample_ratios(symbols, {config}, window, options)[0];
}

std::vector<RatioReport> norm_ratio_sweep(const std::vector<RatioConfig>& configs, const EnsembleSpec& ensemble,
                                          const PhaseGrid& grid, const RatioOptions& options) {
    if (configs.empty()) return {};
    for (const auto& c : configs) {
        validate_config(c);
        if (c.p.N() != configs.front().p.N()) throw std::invalid_argument("ratio sweep: configs must share N");
    }
    const int N = configs.front().p.N();
    EnsembleSpec es = ensemble;
    es.count = ensemble.count * N;
    const auto pool = ensemble_generate(es, grid, options.threads);
    const GridFunction window = standard_window(grid, options.measure);

    const auto samples = static_cast<std::size_t>(ensemble.count);
    std::vector<std::vector<std::optional<double>>> per_sample(samples);
    detail::parallel_for(samples, options.threads, [&](std::size_t s) {
        std::vector<GridFunction> symbols(pool.begin() + static_cast<std::ptrdiff_t>(s * N),
                                          pool.begin() + static_cast<std::ptrdiff_t>((s + 1) * N));
        per_sample[s] = sample_ratios(symbols, configs, window, options);
    });

    std::vector<RatioReport> out;
    for (std::size_t k = 0; k < configs.size(); ++k) {
        const auto& c = configs[k];
        RatioReport r;
        r.label = c.label;
        r.p = c.p;
        r.q = c.q;
        for (const auto& w : c.weights) r.weights.push_back(w.str());
        r.N = N;
        r.n = grid.n;
        r.d = grid.d;
        r.seed = ensemble.seed;
        r.mode = options.mode;
        r.measure = options.measure;
        const Criterion crit = options.mode == ProductMode::weyl ? Criterion::thm_b : Criterion::twist;
        r.criterion = to_string(crit);
        try {
            r.criterion_holds = check_conditions(crit, c.p, c.q).holds;
        } catch (const std::invalid_argument&) {
            r.criterion_holds.reset();
        }
        r.ratios.reserve(samples);
        for (std::size_t s = 0; s < samples; ++s) r.ratios.push_back(per_sample[s][k]);
        summarize(r);
        out.push_back(std::move(r));
    }
    return out;
}

RatioReport norm_ratio_experiment(const ExponentTuple& p, const ExponentTuple& q,
                                  const std::vector<WeightSpec>& weights, const EnsembleSpec& ensemble,
                                  const PhaseGrid& grid, const RatioOptions& options) {
    RatioConfig c{"", p, q, weights};
    return norm_ratio_sweep({c}, ensemble, grid, options).front();
}

std::string to_string(ProductMode m) { return m == ProductMode::weyl ? "weyl" : "twist"; }

namespace {

nlohmann::json report_to_json(const RatioReport& r) {
    nlohmann::json j;
    j["label"] = r.label;
    j["p"] = r.p.str();
    j["q"] = r.q.str();
    j["weights"] = r.weights;
    j["N"] = r.N;
    j["n"] = r.n;
    j["d"] = r.d;
    j["seed"] = r.seed;
    j["mode"] = to_string(r.mode);
    j["measure"] = r.measure == Measure::counting ? "counting" : "quadrature";
    j["criterion"] = r.criterion;
    j["criterion_holds"] = r.criterion_holds ? nlohmann::json(*r.criterion_holds) : nlohmann::json(nullptr);
    nlohmann::json ratios = nlohmann::json::array();
    for (const auto& x : r.ratios) ratios.push_back(x ? nlohmann::json(*x) : nlohmann::json(nullptr));
    j["ratios"] = ratios;
    j["nulls"] = r.nulls;
    j["max"] = r.max;
    j["mean"] = r.mean;
    j["median"] = r.median;
    j["q90"] = r.q90;
    return j;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string ratio_report_json(const RatioReport& r) { return report_to_json(r).dump(2); }

std::string ratio_report_csv(const RatioReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << "label,mode,measure,n,seed,p,q,sample,ratio\r\n";
    for (std::size_t s = 0; s < r.ratios.size(); ++s) {
        os << csv_field(r.label) << ',' << to_string(r.mode) << ','
           << (r.measure == Measure::counting ? "counting" : "quadrature") << ',' << r.n << ',' << r.seed << ','
           << csv_field(r.p.str()) << ',' << csv_field(r.q.str()) << ',' << s << ',';
        if (r.ratios[s]) os << *r.ratios[s];
        os << "\r\n";
    }
    return os.str();
}

} // namespace weylab

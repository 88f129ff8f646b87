#include "weylab/weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace weylab {

WeightSpec WeightSpec::unit(int arity) { return WeightSpec{arity, {}}; }

WeightSpec WeightSpec::polynomial(int arity, double s, WeightBlock block) {
    return WeightSpec{arity, {WeightFactor{WeightKind::polynomial, s, block}}};
}

WeightSpec WeightSpec::exponential(int arity, double c, WeightBlock block) {
    if (std::abs(c) > 1.0) throw std::invalid_argument("exponential weight rate must satisfy |c| <= 1");
    return WeightSpec{arity, {WeightFactor{WeightKind::exponential, c, block}}};
}

namespace {

double parse_param(const std::string& s, const std::string& key) {
    const std::string prefix = key + "=";
    if (s.rfind(prefix, 0) != 0) throw std::invalid_argument("weight literal: expected " + prefix + " in '" + s + "'");
    std::size_t pos = 0;
    const std::string num = s.substr(prefix.size());
    double v = std::stod(num, &pos);
    if (pos != num.size() || !std::isfinite(v)) throw std::invalid_argument("weight literal: bad number '" + num + "'");
    return v;
}

WeightFactor parse_factor(std::string tok) {
    WeightFactor f;
    if (tok.rfind("split:", 0) == 0) tok = tok.substr(6);
    const auto at = tok.find('@');
    if (at != std::string::npos) {
        const std::string b = tok.substr(at + 1);
        if (b == "X")
            f.block = WeightBlock::first;
        else if (b == "Y")
            f.block = WeightBlock::second;
        else
            throw std::invalid_argument("weight literal: block must be X or Y");
        tok = tok.substr(0, at);
    }
    if (tok == "unit") {
        f.kind = WeightKind::unit;
    } else if (tok.rfind("poly:", 0) == 0) {
        f.kind = WeightKind::polynomial;
        f.param = parse_param(tok.substr(5), "s");
    } else if (tok.rfind("exp:", 0) == 0) {
        f.kind = WeightKind::exponential;
        f.param = parse_param(tok.substr(4), "c");
        if (std::abs(f.param) > 1.0) throw std::invalid_argument("exponential weight rate must satisfy |c| <= 1");
    } else {
        throw std::invalid_argument("weight literal: unknown factor '" + tok + "'");
    }
    return f;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

double factor_log(const WeightFactor& f, std::span<const double> p) {
    if (f.kind == WeightKind::unit) return 0.0;
    std::size_t b = 0, e = p.size();
    if (f.block == WeightBlock::first) e = p.size() / 2;
    if (f.block == WeightBlock::second) b = p.size() / 2;
    double r2 = 0.0;
    for (std::size_t i = b; i < e; ++i) r2 += p[i] * p[i];
    if (f.kind == WeightKind::polynomial) return 0.5 * f.param * std::log1p(r2);
    return f.param * std::sqrt(r2);
}

} // namespace

WeightSpec WeightSpec::parse(std::string_view text, int arity) {
    if (arity < 2 || arity % 2 != 0) throw std::invalid_argument("weight arity must be even and positive");
    WeightSpec w{arity, {}};
    std::string s(text);
    std::stringstream ss(s);
    std::string tok;
    bool any = false;
    while (std::getline(ss, tok, '*')) {
        any = true;
        WeightFactor f = parse_factor(tok);
        if (f.kind != WeightKind::unit) w.factors.push_back(f);
    }
    if (!any) throw std::invalid_argument("empty weight literal");
    return w;
}

WeightSpec WeightSpec::moderator() const {
    WeightSpec v{arity, {}};
    for (const auto& f : factors) v.factors.push_back(WeightFactor{f.kind, std::abs(f.param), f.block});
    return v;
}

WeightSpec WeightSpec::inverse() const {
    WeightSpec v{arity, {}};
    for (const auto& f : factors) v.factors.push_back(WeightFactor{f.kind, -f.param, f.block});
    return v;
}

WeightSpec WeightSpec::times(const WeightSpec& other) const {
    if (other.arity != arity) throw std::invalid_argument("weight arity mismatch");
    WeightSpec v = *this;
    v.factors.insert(v.factors.end(), other.factors.begin(), other.factors.end());
    return v;
}

std::string WeightSpec::str() const {
    if (factors.empty()) return "unit";
    std::string out;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const auto& f = factors[i];
        if (i) out += "*";
        if (f.block != WeightBlock::all) out += "split:";
        out += f.kind == WeightKind::polynomial ? "poly:s=" + fmt(f.param) : "exp:c=" + fmt(f.param);
        if (f.block == WeightBlock::first) out += "@X";
        if (f.block == WeightBlock::second) out += "@Y";
    }
    return out;
}

double log_weight(const WeightSpec& w, std::span<const double> point) {
    if (static_cast<int>(point.size()) != w.arity) throw std::invalid_argument("weight: dimension mismatch");
    double s = 0.0;
    for (const auto& f : w.factors) s += factor_log(f, point);
    return s;
}

double evaluate_weight(const WeightSpec& w, std::span<const double> point) { return std::exp(log_weight(w, point)); }

ModerateCheck verify_moderate(const WeightSpec& w, const WeightSpec& v, const std::vector<std::vector<double>>& samples) {
    if (w.arity != v.arity) throw std::invalid_argument("verify_moderate: arity mismatch");
    const std::size_t D = static_cast<std::size_t>(w.arity);
    double worst = -std::numeric_limits<double>::infinity();
    std::vector<double> s(D);
    auto ratio_log = [&](std::span<const double> x, std::span<const double> y) {
        for (std::size_t i = 0; i < D; ++i) s[i] = x[i] + y[i];
        return log_weight(w, s) - log_weight(w, x) - log_weight(v, y);
    };
    for (const auto& x : samples) {
        if (x.size() != D) throw std::invalid_argument("verify_moderate: sample dimension mismatch");
        for (const auto& y : samples) worst = std::max(worst, ratio_log(x, y));
    }
    // Escape rays: y = t e, x in {0, -t e / 2, t e}, along coordinate and diagonal directions.
    std::vector<std::vector<double>> dirs;
    for (std::size_t i = 0; i < D; ++i) {
        std::vector<double> e(D, 0.0);
        e[i] = 1.0;
        dirs.push_back(e);
        e[i] = -1.0;
        dirs.push_back(e);
    }
    dirs.emplace_back(D, 1.0 / std::sqrt(static_cast<double>(D)));
    bool growing = false;
    std::vector<double> x(D), y(D);
    for (const auto& e : dirs) {
        for (double alpha : {0.0, -0.5, 1.0}) {
            double prev = 0.0, last = 0.0;
            for (int k = 0; k <= 12; ++k) {
                const double t = std::ldexp(1.0, k);
                for (std::size_t i = 0; i < D; ++i) {
                    y[i] = t * e[i];
                    x[i] = alpha * t * e[i];
                }
                const double r = ratio_log(x, y);
                worst = std::max(worst, r);
                prev = last;
                last = r;
            }
            if (last - prev > 1e-6) growing = true;
        }
    }
    ModerateCheck out;
    out.worst_ratio = std::exp(worst);
    out.ok = !growing && std::isfinite(out.worst_ratio);
    return out;
}

std::vector<double> product_weight_argument(ProductWeightKind kind, std::span<const double> X,
                                            std::span<const double> Y, const std::vector<double>& A) {
    const std::size_t D = X.size();
    if (Y.size() != D || D % 2 != 0) throw std::invalid_argument("product weight: dimension mismatch");
    const std::size_t d = D / 2;
    std::vector<double> out(2 * D);
    switch (kind) {
    case ProductWeightKind::weyl:
        for (std::size_t i = 0; i < D; ++i) {
            out[i] = X[i] + Y[i];
            out[D + i] = X[i] - Y[i];
        }
        break;
    case ProductWeightKind::twist:
        for (std::size_t i = 0; i < D; ++i) {
            out[i] = X[i] - Y[i];
            out[D + i] = X[i] + Y[i];
        }
        break;
    case ProductWeightKind::a_calculus: {
        if (A.size() != d * d) throw std::invalid_argument("product weight: A must be d x d");
        // T_A(X, Y) = (y + A(x - y), xi + A^T(eta - xi), eta - xi, x - y)
        for (std::size_t r = 0; r < d; ++r) {
            double ax = 0.0, at = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                ax += A[r * d + c] * (X[c] - Y[c]);
                at += A[c * d + r] * (Y[d + c] - X[d + c]);
            }
            out[r] = Y[r] + ax;
            out[d + r] = X[d + r] + at;
            out[2 * d + r] = Y[d + r] - X[d + r];
            out[3 * d + r] = X[r] - Y[r];
        }
        break;
    }
    }
    return out;
}

ProductWeightResult product_weight_condition(ProductWeightKind kind, const std::vector<WeightSpec>& weights,
                                             const std::vector<double>& A, int sample_count, std::uint64_t seed) {
    if (weights.size() < 2) throw std::invalid_argument("product weight: need omega_0 and at least one factor");
    const int arity = weights[0].arity;
    if (arity % 4 != 0) throw std::invalid_argument("product weight: weights must have arity 4d");
    for (const auto& w : weights)
        if (w.arity != arity) throw std::invalid_argument("product weight: arity mismatch");
    const std::size_t D = static_cast<std::size_t>(arity / 2);
    const std::size_t N = weights.size() - 1;

    auto log_product = [&](const std::vector<std::vector<double>>& X) {
        double s = log_weight(weights[0], product_weight_argument(kind, X[N], X[0], A));
        for (std::size_t j = 1; j <= N; ++j) s += log_weight(weights[j], product_weight_argument(kind, X[j], X[j - 1], A));
        return s;
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double lo = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> X(N + 1, std::vector<double>(D));

    // Monte-Carlo tuples on boxes of radius 1, 8 and 64.
    const double radii[3] = {1.0, 8.0, 64.0};
    for (int s = 0; s < sample_count; ++s) {
        const double R = radii[s % 3];
        for (auto& x : X)
            for (auto& v : x) v = R * unif(rng);
        lo = std::min(lo, log_product(X));
    }

    // Escape rays: one point, one endpoint pair, or an alternating spread
    // moves to infinity along a direction while the rest stays fixed.
    const int ray_dirs = 8;
    for (int r = 0; r < ray_dirs; ++r) {
        std::vector<double> e(D);
        double norm = 0.0;
        for (auto& v : e) {
            v = gauss(rng);
            norm += v * v;
        }
        norm = std::sqrt(norm);
        for (auto& v : e) v /= norm;
        std::vector<std::vector<double>> base(N + 1, std::vector<double>(D));
        for (auto& x : base)
            for (auto& v : x) v = unif(rng);
        for (int pattern = 0; pattern < static_cast<int>(N) + 4; ++pattern) {
            for (int k = 0; k <= 24; ++k) {
                const double t = std::ldexp(1.0, k);
                X = base;
                for (std::size_t j = 0; j <= N; ++j) {
                    double c = 0.0;
                    if (pattern <= static_cast<int>(N))
                        c = (static_cast<int>(j) == pattern) ? 1.0 : 0.0;
                    else if (pattern == static_cast<int>(N) + 1)
                        c = (j == N) ? 1.0 : (j == 0 ? -1.0 : 0.0);
                    else if (pattern == static_cast<int>(N) + 2)
                        c = (j % 2 == 0) ? 1.0 : -1.0;
                    else
                        c = static_cast<double>(j);
                    for (std::size_t i = 0; i < D; ++i) X[j][i] += c * t * e[i];
                }
                lo = std::min(lo, log_product(X));
            }
        }
    }

    ProductWeightResult out;
    out.log_inf = lo;
    out.inf_estimate = std::exp(lo);
    out.satisfied = lo >= std::log(kWeightConditionFloor);
    return out;
}

} // namespace weylab

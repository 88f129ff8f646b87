#include "weylab/exponent.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

namespace weylab {

double to_double(const Rational& r) { return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator()); }

std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::int64_t parse_int(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty number");
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("malformed number: " + s);
    return v;
}

Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::int64_t den = parse_int(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator: " + s);
        return Rational(parse_int(s.substr(0, slash)), den);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(parse_int(s));
    std::string ip = s.substr(0, dot);
    std::string fp = s.substr(dot + 1);
    if (fp.size() > 15 || fp.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("malformed decimal: " + s);
    bool neg = !ip.empty() && ip[0] == '-';
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
    std::int64_t whole = (ip.empty() || ip == "-" || ip == "+") ? 0 : parse_int(ip);
    std::int64_t frac = fp.empty() ? 0 : parse_int(fp);
    Rational r(std::abs(whole) * scale + frac, scale);
    return neg ? -r : r;
}

void require_same_length(int N, std::size_t n) {
    if (N < 1 || n != static_cast<std::size_t>(N + 1))
        throw std::invalid_argument("dimension mismatch: expected " + std::to_string(N + 1) + " entries, got " +
                                    std::to_string(n));
}

void require_unit_cube(const std::vector<Rational>& x) {
    for (const auto& v : x)
        if (v < 0 || v > 1) throw RejectedInput("reciprocal outside [0,1]: " + to_string(v));
}

Rational sum(const std::vector<Rational>& x) {
    Rational s(0);
    for (const auto& v : x) s += v;
    return s;
}

} // namespace

Exponent Exponent::from_reciprocal(Rational r) {
    if (r < 0) throw std::invalid_argument("negative reciprocal exponent");
    return Exponent(r);
}

Exponent Exponent::from_value(Rational p) {
    if (p <= 0) throw std::invalid_argument("exponent must be positive");
    return Exponent(1 / p);
}

Exponent Exponent::parse(std::string_view text) {
    std::string s = trim(text);
    std::string lower = s;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "inf" || lower == "infinity" || lower == "oo") return infinity();
    return from_value(parse_rational(s));
}

double Exponent::value() const {
    if (is_infinite()) return std::numeric_limits<double>::infinity();
    return static_cast<double>(recip_.denominator()) / static_cast<double>(recip_.numerator());
}

std::string Exponent::str() const {
    if (is_infinite()) return "inf";
    return to_string(1 / recip_);
}

Exponent conjugate(const Exponent& p) {
    if (p.reciprocal() >= 1) return Exponent::infinity();
    return Exponent::from_reciprocal(1 - p.reciprocal());
}

ExponentTuple::ExponentTuple(std::vector<Exponent> entries) : entries_(std::move(entries)) {
    if (entries_.size() < 2) throw std::invalid_argument("exponent tuple needs at least two entries");
}

ExponentTuple ExponentTuple::from_reciprocals(const std::vector<Rational>& x) {
    std::vector<Exponent> e;
    e.reserve(x.size());
    for (const auto& v : x) e.push_back(Exponent::from_reciprocal(v));
    return ExponentTuple(std::move(e));
}

ExponentTuple ExponentTuple::parse(std::string_view text) {
    std::vector<Exponent> e;
    std::string s(text);
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) e.push_back(Exponent::parse(item));
    if (!s.empty() && s.back() == ',') throw std::invalid_argument("trailing comma in exponent list");
    return ExponentTuple(std::move(e));
}

std::vector<Rational> ExponentTuple::reciprocals() const {
    std::vector<Rational> x;
    x.reserve(entries_.size());
    for (const auto& e : entries_) x.push_back(e.reciprocal());
    return x;
}

std::vector<Rational> ExponentTuple::conjugate_reciprocals() const {
    std::vector<Rational> x;
    x.reserve(entries_.size());
    for (const auto& e : entries_) x.push_back(conjugate(e).reciprocal());
    return x;
}

ExponentTuple ExponentTuple::conjugated() const {
    std::vector<Exponent> e;
    for (const auto& v : entries_) e.push_back(conjugate(v));
    return ExponentTuple(std::move(e));
}

std::string ExponentTuple::str() const {
    std::string out;
    for (std::size_t j = 0; j < entries_.size(); ++j) {
        if (j) out += ",";
        out += entries_[j].str();
    }
    return out;
}

Rational rn(int N, const std::vector<Rational>& x) {
    require_same_length(N, x.size());
    if (N < 2) throw std::invalid_argument("R_N needs N >= 2");
    return (sum(x) - 1) / Rational(N - 1);
}

QnValue qn(int N, const std::vector<Rational>& x, const std::vector<Rational>& y) {
    require_same_length(N, x.size());
    require_same_length(N, y.size());
    QnValue out;
    bool first = true;
    for (int j = 0; j <= N; ++j) {
        for (int k = 0; k <= N; ++k) {
            if ((j + k) % 2 == 0) continue;
            Rational m = (x[j] + y[k]) / 2;
            Rational mq = std::min(m, 1 - m);
            if (first || m < out.q0) {
                out.q0 = m;
                out.q0_argmin = {j, k};
            }
            if (first || mq < out.q) {
                out.q = mq;
                out.q_argmin = {j, k};
            }
            first = false;
        }
    }
    return out;
}

std::string to_string(Criterion c) {
    switch (c) {
    case Criterion::bilinear_base: return "bilinear-base";
    case Criterion::cotowa_2_5: return "cotowa-2.5";
    case Criterion::prop_a: return "prop-A";
    case Criterion::thm_b: return "thm-B";
    case Criterion::twist: return "twist";
    case Criterion::prop2_pattern: return "prop2-pattern";
    }
    return "?";
}

Criterion parse_criterion(std::string_view name) {
    for (auto c : all_criteria())
        if (to_string(c) == name) return c;
    throw std::invalid_argument("unknown criterion: " + std::string(name));
}

const std::vector<Criterion>& all_criteria() {
    static const std::vector<Criterion> v{Criterion::bilinear_base, Criterion::cotowa_2_5, Criterion::prop_a,
                                          Criterion::thm_b,         Criterion::twist,      Criterion::prop2_pattern};
    return v;
}

namespace {

struct MinTracker {
    Rational value;
    std::string name;
    bool set = false;
    void offer(const std::string& n, const Rational& v) {
        if (!set || v < value) {
            value = v;
            name = n;
            set = true;
        }
    }
};

} // namespace

ConditionReport check_conditions(Criterion criterion, const ExponentTuple& p, const ExponentTuple& q) {
    if (p.size() != q.size()) throw std::invalid_argument("dimension mismatch between p and q");
    const int N = p.N();
    ConditionReport rep;
    rep.criterion = criterion;

    if (criterion == Criterion::prop2_pattern) {
        if (N < 3 || N % 2 == 0) throw std::invalid_argument("prop2-pattern needs odd N >= 3");
        // q must coincide with p, and p must be one of the two endpoint patterns.
        int best = std::numeric_limits<int>::max();
        int best_variant = 0;
        const Exponent params[2] = {p[static_cast<std::size_t>(N)], p[0]};
        for (int variant = 1; variant <= 2; ++variant) {
            ExponentTuple pat = pattern_exponents(N, params[variant - 1], variant);
            int mismatches = 0;
            for (int j = 0; j <= N; ++j) {
                if (!(pat[j] == p[j])) ++mismatches;
                if (!(q[j] == p[j])) ++mismatches;
            }
            if (mismatches < best) {
                best = mismatches;
                best_variant = variant;
            }
        }
        rep.lhs = Rational(best);
        rep.rhs = Rational(0);
        rep.holds = best == 0;
        rep.detail["mismatches"] = Rational(best);
        rep.detail["variant"] = Rational(best_variant);
        return rep;
    }

    if (N < 2) throw std::invalid_argument("criterion needs N >= 2");
    const bool odd_only = criterion == Criterion::prop_a || criterion == Criterion::thm_b || criterion == Criterion::twist;
    if (odd_only && (N < 3 || N % 2 == 0)) throw std::invalid_argument(to_string(criterion) + " needs odd N >= 3");

    const auto xp = p.reciprocals();
    const auto xq = q.reciprocals();
    require_unit_cube(xp);
    require_unit_cube(xq);
    const auto xpc = p.conjugate_reciprocals();
    const auto xqc = q.conjugate_reciprocals();

    const Rational R_p = rn(N, xp);
    const Rational R_qc = rn(N, xqc);
    rep.detail["R_N(1/p)"] = R_p;
    rep.detail["R_N(1/q')"] = R_qc;

    MinTracker rhs;
    switch (criterion) {
    case Criterion::bilinear_base:
        rep.lhs = std::max(R_qc, Rational(0));
        rhs.offer("0", Rational(0));
        rhs.offer("R_N(1/p)", R_p);
        break;
    case Criterion::cotowa_2_5: {
        rep.lhs = std::max(R_qc, Rational(0));
        for (int j = 0; j <= N; ++j) {
            const std::string js = std::to_string(j);
            rhs.offer("1/p_" + js, xp[j]);
            rhs.offer("1/p'_" + js, xpc[j]);
            rhs.offer("1/q_" + js, xq[j]);
            rhs.offer("1/q'_" + js, xqc[j]);
        }
        rhs.offer("R_N(1/p)", R_p);
        rep.detail["min_j(1/p_j,1/p'_j,1/q_j,1/q'_j)"] = rhs.value;
        break;
    }
    case Criterion::prop_a:
    case Criterion::thm_b: {
        rep.lhs = std::max(R_qc, Rational(0));
        QnValue pp = qn(N, xp, xp);
        QnValue qq = qn(N, xqc, xqc);
        QnValue pq = qn(N, xp, xq);
        rep.detail["Q_N(1/p)"] = pp.q;
        rep.detail["Q_N(1/q')"] = qq.q;
        rep.detail["Q_{0,N}(1/q')"] = qq.q0;
        rep.detail["Q_N(1/p,1/q)"] = pq.q;
        rep.minimizers["Q_N(1/p)"] = pp.q_argmin;
        rep.minimizers["Q_N(1/q')"] = qq.q_argmin;
        rep.minimizers["Q_{0,N}(1/q')"] = qq.q0_argmin;
        rep.minimizers["Q_N(1/p,1/q)"] = pq.q_argmin;
        rhs.offer("Q_N(1/p)", pp.q);
        if (criterion == Criterion::prop_a)
            rhs.offer("Q_N(1/q')", qq.q);
        else
            rhs.offer("Q_{0,N}(1/q')", qq.q0);
        rhs.offer("Q_N(1/p,1/q)", pq.q);
        rhs.offer("R_N(1/p)", R_p);
        break;
    }
    case Criterion::twist: {
        const Rational R_pc = rn(N, xpc);
        const Rational R_q = rn(N, xq);
        rep.detail["R_N(1/p')"] = R_pc;
        rep.detail["R_N(1/q)"] = R_q;
        rep.lhs = std::max(R_pc, Rational(0));
        QnValue qq = qn(N, xq, xq);
        QnValue pcpc = qn(N, xpc, xpc);
        QnValue pq = qn(N, xp, xq);
        rep.detail["Q_N(1/q)"] = qq.q;
        rep.detail["Q_{0,N}(1/p')"] = pcpc.q0;
        rep.detail["Q_N(1/p,1/q)"] = pq.q;
        rep.minimizers["Q_N(1/q)"] = qq.q_argmin;
        rep.minimizers["Q_{0,N}(1/p')"] = pcpc.q0_argmin;
        rep.minimizers["Q_N(1/p,1/q)"] = pq.q_argmin;
        rhs.offer("Q_N(1/q)", qq.q);
        rhs.offer("Q_{0,N}(1/p')", pcpc.q0);
        rhs.offer("Q_N(1/p,1/q)", pq.q);
        rhs.offer("R_N(1/q)", R_q);
        break;
    }
    case Criterion::prop2_pattern: break;
    }
    rep.rhs = rhs.value;
    rep.holds = rep.lhs <= rep.rhs;
    return rep;
}

ExponentTuple pattern_exponents(int N, const Exponent& p, int variant) {
    if (N < 3 || N % 2 == 0) throw std::invalid_argument("pattern_exponents needs odd N >= 3");
    if (variant != 1 && variant != 2) throw std::invalid_argument("variant must be 1 or 2");
    const Exponent pc = conjugate(p);
    std::vector<Exponent> e(static_cast<std::size_t>(N + 1));
    if (variant == 1) {
        // max(1, p) in reciprocal form is min(1, 1/p)
        const Exponent pmax = Exponent::from_reciprocal(std::min(Rational(1), p.reciprocal()));
        for (int j = 0; j <= N; ++j) e[j] = (j % 2 == 0) ? pc : pmax;
        e[0] = p;
        e[1] = p;
        e[N] = p;
    } else {
        for (int j = 0; j <= N; ++j) e[j] = (j % 2 == 0) ? p : pc;
    }
    return ExponentTuple(std::move(e));
}

LemmaProfile lemma_profile(int N, const std::vector<Rational>& x, PairMode mode) {
    require_same_length(N, x.size());
    require_unit_cube(x);
    if (mode == PairMode::odd_pairs && (N < 3 || N % 2 == 0))
        throw std::invalid_argument("odd-pairs mode needs odd N >= 3");
    if (N < 2) throw std::invalid_argument("lemma_profile needs N >= 2");
    const Rational R = rn(N, x);
    LemmaProfile out{true, true, true};
    for (int j = 0; j <= N; ++j) {
        for (int k = 0; k <= N; ++k) {
            if (mode == PairMode::odd_pairs) {
                if ((j + k) % 2 == 0) continue;
                const Rational y = (x[j] + x[k]) / 2;
                if (R > y) out.c1 = false;
                if (y > Rational(1, 2)) out.c2 = false;
                if (R > 1 - y) out.c3 = false;
            } else {
                if (j == k) continue;
                if (x[j] + x[k] > 1) out.c2 = false;
            }
        }
        if (mode == PairMode::all_pairs) {
            if (R > x[j]) out.c1 = false;
            if (R > 1 - x[j]) out.c3 = false;
        }
    }
    return out;
}

std::string to_string(InterpolationBranch b) {
    switch (b) {
    case InterpolationBranch::theta_zero: return "theta-zero";
    case InterpolationBranch::delegated_2_5: return "delegated-2.5";
    case InterpolationBranch::endpoint_mix: return "endpoint-mix";
    case InterpolationBranch::infeasible: return "infeasible";
    }
    return "?";
}

const std::vector<Exponent>& interpolation_v_grid() {
    static const std::vector<Exponent> grid = [] {
        std::vector<Rational> vals;
        for (int k = 0; k < 64; ++k) vals.emplace_back(Rational(1) + Rational(k, 64));
        for (int k = 1; k <= 64; ++k) vals.emplace_back(Rational(64, k));
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        std::vector<Exponent> out;
        for (const auto& v : vals) out.push_back(Exponent::from_value(v));
        out.push_back(Exponent::infinity());
        return out;
    }();
    return grid;
}

namespace {

Rational range_violation(const Rational& x) {
    if (x < 0) return -x;
    if (x > 1) return x - 1;
    return Rational(0);
}

Rational abs_r(const Rational& x) { return x < 0 ? -x : x; }

// Solves the interpolation identities for r (from p) given theta < 1 and v.
std::vector<Rational> solve_side(const std::vector<Rational>& x, const Rational& theta, const Exponent& v) {
    const Rational tv = v.reciprocal();
    const Rational tvc = 1 - tv;
    std::vector<Rational> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const Rational shift = theta * ((j % 2 == 0) ? tvc : tv);
        out[j] = (x[j] - shift) / (1 - theta);
    }
    return out;
}

// Reciprocal vectors may leave [0,1] on an infeasible candidate, so they are
// carried as raw rationals and clamped only for presentation.
ExponentTuple present(const std::vector<Rational>& x) {
    std::vector<Exponent> e;
    for (const auto& v : x) e.push_back(Exponent::from_reciprocal(std::max(Rational(0), v)));
    return ExponentTuple(std::move(e));
}

Rational raw_violation(const std::vector<Rational>& xp, const std::vector<Rational>& xq, const Rational& theta,
                       const Exponent& v, const std::vector<Rational>& xr, const std::vector<Rational>& xs) {
    const Rational tv = v.reciprocal();
    const Rational tvc = 1 - tv;
    Rational worst(0);
    Rational sum_r(0), sum_sc(0);
    for (std::size_t j = 0; j < xp.size(); ++j) {
        const Rational t = (j % 2 == 0) ? tvc : tv;
        worst = std::max(worst, abs_r((1 - theta) * xr[j] + theta * t - xp[j]));
        worst = std::max(worst, abs_r((1 - theta) * xs[j] + theta * t - xq[j]));
        worst = std::max(worst, range_violation(xr[j]));
        worst = std::max(worst, range_violation(xs[j]));
        sum_r += xr[j];
        sum_sc += 1 - xs[j];
    }
    worst = std::max(worst, sum_sc - 1);
    worst = std::max(worst, 1 - sum_r);
    return worst;
}

} // namespace

Rational interpolation_residual(const ExponentTuple& p, const ExponentTuple& q, const Rational& theta,
                                const Exponent& v, const ExponentTuple& r, const ExponentTuple& s) {
    if (p.size() != q.size() || p.size() != r.size() || p.size() != s.size())
        throw std::invalid_argument("dimension mismatch in interpolation residual");
    return raw_violation(p.reciprocals(), q.reciprocals(), theta, v, r.reciprocals(), s.reciprocals());
}

InterpolationCertificate construct_interpolation(const ExponentTuple& p, const ExponentTuple& q) {
    ConditionReport pre = check_conditions(Criterion::prop_a, p, q);
    if (!pre.holds) throw RejectedInput("construct_interpolation requires the prop-A condition");

    const int N = p.N();
    const auto xp = p.reciprocals();
    const auto xq = q.reciprocals();
    InterpolationCertificate cert;
    cert.theta = 2 * std::max(rn(N, q.conjugate_reciprocals()), Rational(0));

    if (cert.theta == Rational(0)) {
        cert.v = Exponent::from_value(Rational(2));
        cert.r = p;
        cert.s = q;
        cert.residual = interpolation_residual(p, q, cert.theta, cert.v, cert.r, cert.s);
        cert.feasible = cert.residual == Rational(0);
        cert.branch = cert.feasible ? InterpolationBranch::theta_zero : InterpolationBranch::infeasible;
        return cert;
    }

    if (cert.theta == Rational(1)) {
        // r and s drop out of the identities; pick a pair satisfying the sum
        // conditions and look for the endpoint v alone.
        std::vector<Rational> xr(xp.size(), Rational(0));
        xr[0] = 1;
        std::vector<Rational> xs(xp.size(), Rational(1));
        Rational best(-1);
        for (const auto& v : interpolation_v_grid()) {
            ++cert.grid_points_tried;
            Rational viol = raw_violation(xp, xq, cert.theta, v, xr, xs);
            if (best < 0 || viol < best) {
                best = viol;
                cert.v = v;
            }
            if (viol == Rational(0)) break;
        }
        cert.r = present(xr);
        cert.s = present(xs);
        cert.residual = best;
        cert.feasible = best == Rational(0);
        cert.branch = cert.feasible ? InterpolationBranch::endpoint_mix : InterpolationBranch::infeasible;
        return cert;
    }

    auto attempt = [&](const Exponent& v, std::vector<Rational>& xr, std::vector<Rational>& xs) {
        xr = solve_side(xp, cert.theta, v);
        xs = solve_side(xq, cert.theta, v);
        return raw_violation(xp, xq, cert.theta, v, xr, xs);
    };

    Rational max_recip(0);
    for (std::size_t j = 0; j < xp.size(); ++j) max_recip = std::max({max_recip, xp[j], xq[j]});

    std::vector<Rational> xr, xs;
    if (max_recip >= cert.theta / 2) {
        // Interpolation against the Hilbert-Schmidt endpoint (v = 2).
        const Exponent two = Exponent::from_value(Rational(2));
        ++cert.grid_points_tried;
        Rational viol = attempt(two, xr, xs);
        if (viol == Rational(0)) {
            cert.v = two;
            cert.r = present(xr);
            cert.s = present(xs);
            cert.residual = viol;
            cert.feasible = true;
            cert.branch = InterpolationBranch::delegated_2_5;
            return cert;
        }
    }

    Rational best(-1);
    std::vector<Rational> best_r, best_s;
    for (const auto& v : interpolation_v_grid()) {
        ++cert.grid_points_tried;
        Rational viol = attempt(v, xr, xs);
        if (best < 0 || viol < best) {
            best = viol;
            cert.v = v;
            best_r = xr;
            best_s = xs;
        }
        if (viol == Rational(0)) break;
    }
    cert.r = present(best_r);
    cert.s = present(best_s);
    cert.residual = best;
    cert.feasible = best == Rational(0);
    cert.branch = cert.feasible ? InterpolationBranch::endpoint_mix : InterpolationBranch::infeasible;
    return cert;
}

} // namespace weylab

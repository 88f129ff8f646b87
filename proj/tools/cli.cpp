#include "cli.hpp"

#include "identity_suite.hpp"

#include "weylab/weylab.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

namespace weylab::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::uint64_t seed{0};
    std::string emit{"json"};
    std::string out;
};

struct ExponentArgs {
    int N{3};
    std::string p, q, criterion{"all"}, expect;
};

struct IdentityArgs {
    int n{32};
    int samples{5};
    std::vector<std::string> tol;
};

struct RepresentationArgs {
    int n{8};
    int N{3};
    double tol{1e-6};
};

struct RatioArgs {
    std::string p, q, weights{"unit"}, mode{"weyl"}, measure{"quadrature"}, A{"1/2"};
    int n{16};
    int count{50};
    std::optional<double> bound;
};

struct SweepArgs {
    std::vector<std::string> tuples;
    std::vector<int> grids{16, 32};
    int count{200};
    std::string mode{"weyl"}, measure{"quadrature"}, A{"1/2"};
    double drift{2.0};
};

// One named check of a report; `value` and `tolerance` are kept as JSON so
// exact rationals can stay strings.
struct Row {
    std::string name;
    bool passed{true};
    Json value;
    Json tolerance;
    double seconds{0.0};
};

struct Outcome {
    Json results = Json::object();
    std::vector<Row> checks;
    std::string csv; // replaces the check table in csv mode when set
};

int thread_count() {
    const char* env = std::getenv("WEYLAB_THREADS");
    if (!env || !*env) return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    try {
        std::size_t used = 0;
        const int t = std::stoi(env, &used);
        if (used == std::string(env).size() && t >= 1) return t;
    } catch (const std::exception&) {
    }
    throw UsageError("WEYLAB_THREADS must be a positive integer");
}

ExponentTuple tuple_arg(const std::string& text, const char* what) {
    try {
        return ExponentTuple::parse(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(what) + ": " + e.what());
    }
}

std::pair<ExponentTuple, ExponentTuple> tuples(int N, const std::string& p, const std::string& q) {
    auto P = tuple_arg(p, "--p");
    auto Q = tuple_arg(q, "--q");
    if (P.size() != Q.size())
        throw UsageError("--p and --q must have the same length (" + std::to_string(P.size()) + " vs " +
                         std::to_string(Q.size()) + ")");
    if (N >= 0 && P.N() != N)
        throw UsageError("--p and --q must have N + 1 = " + std::to_string(N + 1) + " entries, got " +
                         std::to_string(P.size()));
    return {P, Q};
}

Json rational(const Rational& r) { return to_string(r); }

Json condition_json(const ConditionReport& c) {
    Json j;
    j["criterion"] = to_string(c.criterion);
    j["holds"] = c.holds;
    j["lhs"] = rational(c.lhs);
    j["rhs"] = rational(c.rhs);
    Json detail = Json::object();
    for (const auto& [k, v] : c.detail) detail[k] = rational(v);
    j["detail"] = detail;
    Json mins = Json::object();
    for (const auto& [k, v] : c.minimizers) mins[k] = {v.first, v.second};
    j["minimizers"] = mins;
    return j;
}

Outcome cmd_exponents(const ExponentArgs& a) {
    const auto [p, q] = tuples(a.N, a.p, a.q);
    std::vector<Criterion> list;
    if (a.criterion == "all") {
        list = all_criteria();
    } else {
        try {
            list.push_back(parse_criterion(a.criterion));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    Outcome o;
    o.results["p"] = p.str();
    o.results["q"] = q.str();
    Json verdicts = Json::array();
    for (auto c : list) {
        ConditionReport r;
        try {
            r = check_conditions(c, p, q);
        } catch (const RejectedInput& e) {
            if (list.size() == 1) throw UsageError(e.what());
            verdicts.push_back({{"criterion", to_string(c)}, {"rejected", e.what()}});
            continue;
        }
        verdicts.push_back(condition_json(r));
        // a single criterion is a check; "all" only reports unless --expect is given
        if (list.size() == 1 || !a.expect.empty()) {
            Row row;
            row.name = to_string(c);
            row.value = rational(r.lhs);
            row.tolerance = rational(r.rhs);
            row.passed = a.expect.empty() ? r.holds : (r.holds == (a.expect == "true"));
            o.checks.push_back(row);
        }
    }
    o.results["verdicts"] = verdicts;
    return o;
}

Outcome cmd_interpolate(const ExponentArgs& a) {
    const auto [p, q] = tuples(a.N, a.p, a.q);
    InterpolationCertificate c;
    try {
        c = construct_interpolation(p, q);
    } catch (const RejectedInput& e) {
        throw UsageError(e.what());
    }
    Outcome o;
    Json cert;
    cert["feasible"] = c.feasible;
    cert["branch"] = to_string(c.branch);
    cert["theta"] = rational(c.theta);
    cert["v"] = c.v.str();
    cert["r"] = c.r.str();
    cert["s"] = c.s.str();
    cert["residual"] = rational(c.residual);
    cert["grid_points_tried"] = c.grid_points_tried;
    o.results["p"] = p.str();
    o.results["q"] = q.str();
    o.results["certificate"] = cert;
    Row row;
    row.name = "certificate";
    if (c.feasible) {
        const Rational again = interpolation_residual(p, q, c.theta, c.v, c.r, c.s);
        row.value = rational(again);
        row.passed = again == Rational(0);
    } else {
        row.value = rational(c.residual);
        row.passed = false;
    }
    row.tolerance = "0";
    o.checks.push_back(row);
    return o;
}

Outcome cmd_identities(const IdentityArgs& a, const Common& c, int threads) {
    IdentityOptions opt;
    opt.n = a.n;
    opt.seed = c.seed;
    opt.samples = a.samples;
    opt.threads = threads;
    for (const auto& t : a.tol) {
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw UsageError("--tol expects name=value, got " + t);
        try {
            opt.tolerance[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
        } catch (const std::exception&) {
            throw UsageError("--tol: bad value in " + t);
        }
    }
    Outcome o;
    for (const auto& k : run_identity_suite(opt)) {
        Row row;
        row.name = k.name;
        row.value = k.value;
        row.tolerance = k.tolerance;
        row.passed = k.passed();
        row.seconds = k.seconds;
        o.checks.push_back(row);
        o.results["grids"][k.name] = k.grid;
    }
    return o;
}

Outcome cmd_representation(const RepresentationArgs& a, const Common& c, int threads) {
    if (a.N < 2) throw UsageError("--N must be at least 2");
    if (!(a.tol > 0.0)) throw UsageError("--tol must be positive");
    const auto g = make_grid(1, a.n);
    EnsembleSpec e;
    e.seed = c.seed;
    e.count = a.N;
    e.center_radius = e.modulation_radius = std::min(0.75, g.L / 8.0);
    const auto symbols = ensemble_generate(e, g, threads);
    const std::vector<GridFunction> windows(static_cast<std::size_t>(a.N), standard_window(g, Measure::quadrature));
    const auto r = representation_check(symbols, windows);
    Outcome o;
    o.results["scale"] = r.scale;
    Row row;
    row.name = "representation";
    row.value = r.residual;
    row.tolerance = a.tol;
    row.passed = r.residual <= a.tol;
    o.checks.push_back(row);
    return o;
}

ProductMode mode_arg(const std::string& s) { return s == "twist" ? ProductMode::twist : ProductMode::weyl; }
Measure measure_arg(const std::string& s) { return s == "counting" ? Measure::counting : Measure::quadrature; }

MatrixA matrix_arg(const std::string& s) {
    if (s == "0") return MatrixA::kohn_nirenberg(1);
    if (s == "1/2" || s == "0.5") return MatrixA::weyl(1);
    if (s == "1") return MatrixA::identity(1);
    throw UsageError("--A must be 0, 1/2 or 1");
}

std::vector<WeightSpec> weights_arg(const std::string& text, int N) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ';');) parts.push_back(item);
    if (parts.size() == 1 && parts[0] == "unit") return {};
    if (parts.size() != static_cast<std::size_t>(N + 1))
        throw UsageError("--weights needs N + 1 = " + std::to_string(N + 1) + " ';'-separated literals");
    std::vector<WeightSpec> w;
    try {
        for (const auto& p : parts) w.push_back(WeightSpec::parse(p, 4));
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--weights: ") + e.what());
    }
    return w;
}

RatioOptions ratio_options(const std::string& mode, const std::string& measure, const std::string& A, int threads) {
    RatioOptions o;
    o.mode = mode_arg(mode);
    o.measure = measure_arg(measure);
    o.A = matrix_arg(A);
    o.threads = threads;
    return o;
}

Json report_json(const RatioReport& r) { return Json::parse(ratio_report_json(r)); }

Outcome cmd_ratio(const RatioArgs& a, const Common& c, int threads) {
    const auto [p, q] = tuples(-1, a.p, a.q);
    RatioConfig cfg{"", p, q, weights_arg(a.weights, p.N())};
    EnsembleSpec e;
    e.seed = c.seed;
    e.count = a.count;
    const auto r = norm_ratio_sweep({cfg}, e, make_grid(1, a.n), ratio_options(a.mode, a.measure, a.A, threads)).front();
    Outcome o;
    o.results["report"] = report_json(r);
    o.csv = ratio_report_csv(r);
    Row finite;
    finite.name = "finite";
    finite.value = r.nulls;
    finite.tolerance = 0;
    finite.passed = r.nulls == 0;
    o.checks.push_back(finite);
    if (a.bound) {
        Row b;
        b.name = "bound";
        b.value = r.max;
        b.tolerance = *a.bound;
        b.passed = r.max <= *a.bound;
        o.checks.push_back(b);
    }
    return o;
}

Outcome cmd_sweep(const SweepArgs& a, const Common& c, int threads) {
    if (a.tuples.empty()) throw UsageError("sweep needs at least one --tuple label|p|q[|weights]");
    if (!(a.drift >= 1.0)) throw UsageError("--drift must be at least 1");
    std::map<int, std::vector<RatioConfig>> by_N;
    std::vector<std::string> labels;
    for (const auto& t : a.tuples) {
        std::vector<std::string> f;
        std::stringstream ss(t);
        for (std::string item; std::getline(ss, item, '|');) f.push_back(item);
        if (f.size() < 3 || f.size() > 4) throw UsageError("--tuple expects label|p|q[|weights], got " + t);
        const auto [p, q] = tuples(-1, f[1], f[2]);
        by_N[p.N()].push_back(RatioConfig{f[0], p, q, weights_arg(f.size() == 4 ? f[3] : "unit", p.N())});
        labels.push_back(f[0]);
    }
    const auto opt = ratio_options(a.mode, a.measure, a.A, threads);
    EnsembleSpec e;
    e.seed = c.seed;
    e.count = a.count;
    std::map<std::string, std::vector<double>> maxima;
    Outcome o;
    Json reports = Json::array();
    std::string csv;
    for (int n : a.grids) {
        const auto g = make_grid(1, n);
        for (const auto& [N, cfgs] : by_N) {
            for (const auto& r : norm_ratio_sweep(cfgs, e, g, opt)) {
                auto j = report_json(r);
                j.erase("ratios");
                reports.push_back(j);
                maxima[r.label].push_back(r.max);
                auto rows = ratio_report_csv(r);
                csv += csv.empty() ? rows : rows.substr(rows.find("\r\n") + 2);
            }
        }
    }
    o.results["reports"] = reports;
    o.csv = csv;
    for (const auto& label : labels) {
        const auto& m = maxima[label];
        double worst = 0.0;
        for (std::size_t k = 1; k < m.size(); ++k) worst = std::max(worst, m[k - 1] > 0.0 ? m[k] / m[k - 1] : 0.0);
        Row row;
        row.name = "drift:" + label;
        row.value = worst;
        row.tolerance = a.drift;
        row.passed = worst <= a.drift;
        o.checks.push_back(row);
    }
    return o;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string scalar_text(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

std::string checks_csv(const std::vector<Row>& rows) {
    std::string s = "check,passed,value,tolerance\r\n";
    for (const auto& r : rows)
        s += csv_field(r.name) + ',' + (r.passed ? "true" : "false") + ',' + csv_field(scalar_text(r.value)) + ',' +
             csv_field(scalar_text(r.tolerance)) + "\r\n";
    return s;
}

// Turns a JSON config into flags placed before the command-line ones, so
// explicit flags win.
std::vector<std::string> config_flags(const std::string& path, std::string& command) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path);
    Json cfg;
    try {
        cfg = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw UsageError("config " + path + ": " + e.what());
    }
    if (!cfg.is_object()) throw UsageError("config must be a JSON object");
    std::vector<std::string> flags;
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        const std::string key = it.key();
        const Json& v = it.value();
        if (key == "command") {
            if (!v.is_string()) throw UsageError("config: command must be a string");
            if (command.empty()) command = v.get<std::string>();
            continue;
        }
        if (v.is_array()) {
            if (key == "p" || key == "q" || key == "weights") {
                std::string joined;
                for (const auto& x : v) joined += (joined.empty() ? "" : key == "weights" ? ";" : ",") + scalar_text(x);
                flags.insert(flags.end(), {"--" + key, joined});
            } else {
                for (const auto& x : v) flags.insert(flags.end(), {"--" + key, scalar_text(x)});
            }
        } else if (v.is_boolean()) {
            flags.insert(flags.end(), {"--" + key, v.get<bool>() ? "true" : "false"});
        } else if (v.is_null()) {
            continue;
        } else {
            flags.insert(flags.end(), {"--" + key, scalar_text(v)});
        }
    }
    return flags;
}

} // namespace

int run(const std::vector<std::string>& input, std::ostream& out, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();

    // pull --config out first; its flags go right after the subcommand
    std::vector<std::string> rest;
    std::string config_path;
    for (std::size_t i = 1; i < input.size(); ++i) {
        if (input[i] == "--config" && i + 1 < input.size()) {
            config_path = input[++i];
        } else if (input[i].rfind("--config=", 0) == 0) {
            config_path = input[i].substr(9);
        } else {
            rest.push_back(input[i]);
        }
    }
    std::string command;
    if (!rest.empty() && rest.front().rfind("-", 0) != 0) {
        command = rest.front();
        rest.erase(rest.begin());
    }
    std::vector<std::string> args{input.empty() ? std::string("weylab") : input.front()};
    try {
        std::vector<std::string> from_config;
        if (!config_path.empty()) from_config = config_flags(config_path, command);
        if (!command.empty()) args.push_back(command);
        args.insert(args.end(), from_config.begin(), from_config.end());
        args.insert(args.end(), rest.begin(), rest.end());
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    CLI::App app{"weylab: phase-space products, modulation norms and exponent conditions"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));
    app.add_option("--config", config_path, "JSON file whose keys mirror the flags");

    Common common;
    auto add_common = [&](CLI::App* s) {
        s->add_option("--seed", common.seed, "ensemble seed");
        s->add_option("--emit", common.emit, "report format")->check(CLI::IsMember({"json", "csv"}));
        s->add_option("--out", common.out, "write the report here instead of stdout");
    };
    const std::vector<std::string> criteria{"all",   "bilinear-base", "cotowa-2.5", "prop-A",
                                            "thm-B", "twist",         "prop2-pattern"};

    ExponentArgs ex;
    auto* s_exp = app.add_subcommand("exponents", "evaluate exponent conditions exactly");
    s_exp->add_option("--n", ex.N, "number of factors N (odd, >= 3)")->required();
    s_exp->add_option("--p", ex.p, "p_0,...,p_N")->required();
    s_exp->add_option("--q", ex.q, "q_0,...,q_N")->required();
    s_exp->add_option("--criterion", ex.criterion, "criterion name or all")->check(CLI::IsMember(criteria));
    s_exp->add_option("--expect", ex.expect, "expected verdict")->check(CLI::IsMember({"true", "false"}));
    add_common(s_exp);

    ExponentArgs in;
    auto* s_int = app.add_subcommand("interpolate", "construct and verify an interpolation certificate");
    s_int->add_option("--n", in.N, "number of factors N")->required();
    s_int->add_option("--p", in.p, "p_0,...,p_N")->required();
    s_int->add_option("--q", in.q, "q_0,...,q_N")->required();
    add_common(s_int);

    IdentityArgs id;
    auto* s_id = app.add_subcommand("identities", "run the transform and product identity suite");
    s_id->add_option("--grid", id.n, "grid size n");
    s_id->add_option("--samples", id.samples, "random triples per check");
    s_id->add_option("--tol", id.tol, "tolerance override name=value")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    add_common(s_id);

    RepresentationArgs rep;
    auto* s_rep = app.add_subcommand("representation", "check the STFT integral representation of a product");
    s_rep->add_option("--grid", rep.n, "grid size n");
    s_rep->add_option("--N", rep.N, "number of factors");
    s_rep->add_option("--tol", rep.tol, "relative tolerance");
    add_common(s_rep);

    const std::vector<std::string> modes{"weyl", "twist"}, measures{"quadrature", "counting"};
    RatioArgs ra;
    auto* s_rat = app.add_subcommand("ratio", "norm ratios of products over a random ensemble");
    s_rat->add_option("--p", ra.p, "p_0,...,p_N")->required();
    s_rat->add_option("--q", ra.q, "q_0,...,q_N")->required();
    s_rat->add_option("--weights", ra.weights, "unit, or N + 1 weight literals separated by ';'");
    s_rat->add_option("--grid", ra.n, "grid size n");
    s_rat->add_option("--count", ra.count, "number of sampled N-tuples");
    s_rat->add_option("--mode", ra.mode)->check(CLI::IsMember(modes));
    s_rat->add_option("--measure", ra.measure)->check(CLI::IsMember(measures));
    s_rat->add_option("--A", ra.A, "quantization 0, 1/2 or 1 (weyl mode)");
    s_rat->add_option("--bound", ra.bound, "fail when the largest ratio exceeds this");
    add_common(s_rat);

    SweepArgs sw;
    auto* s_sw = app.add_subcommand("sweep", "ratio maxima across grids with a drift check");
    s_sw->add_option("--tuple", sw.tuples, "label|p|q[|weights]")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    s_sw->add_option("--grids", sw.grids, "grid sizes, ascending")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    s_sw->add_option("--count", sw.count, "number of sampled N-tuples per grid");
    s_sw->add_option("--mode", sw.mode)->check(CLI::IsMember(modes));
    s_sw->add_option("--measure", sw.measure)->check(CLI::IsMember(measures));
    s_sw->add_option("--A", sw.A, "quantization 0, 1/2 or 1 (weyl mode)");
    s_sw->add_option("--drift", sw.drift, "largest allowed ratio of successive maxima");
    add_common(s_sw);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kPass : kUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    Outcome o;
    int threads = 1;
    try {
        threads = thread_count();
        if (name == "exponents")
            o = cmd_exponents(ex);
        else if (name == "interpolate")
            o = cmd_interpolate(in);
        else if (name == "identities")
            o = cmd_identities(id, common, threads);
        else if (name == "representation")
            o = cmd_representation(rep, common, threads);
        else if (name == "ratio")
            o = cmd_ratio(ra, common, threads);
        else
            o = cmd_sweep(sw, common, threads);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::length_error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    bool passed = true;
    for (const auto& r : o.checks) passed = passed && r.passed;

    Json report;
    report["artifact"] = "weylab";
    report["version"] = kVersion;
    report["schema"] = kSchemaVersion;
    report["command"] = name;
    Json echo = Json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        if (opt->get_name().empty() || opt->get_lnames().empty()) continue;
        const std::string key = opt->get_lnames().front();
        if (key == "help" || key == "out" || key == "emit") continue;
        if (opt->count() > 0) {
            const auto r = opt->results();
            echo[key] = r.size() == 1 ? Json(r.front()) : Json(r);
        }
    }
    report["config"] = echo;
    Json checks = Json::array();
    for (const auto& r : o.checks)
        checks.push_back({{"name", r.name}, {"passed", r.passed}, {"value", r.value}, {"tolerance", r.tolerance}});
    report["checks"] = checks;
    report["passed"] = passed;
    report["results"] = o.results;
    Json timing;
    timing["threads"] = threads;
    Json per = Json::object();
    for (const auto& r : o.checks)
        if (r.seconds > 0.0) per[r.name] = r.seconds;
    timing["checks"] = per;
    timing["total_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report["timing"] = timing;

    const std::string text = common.emit == "csv" ? (o.csv.empty() ? checks_csv(o.checks) : o.csv) : report.dump(2) + "\n";
    if (common.out.empty()) {
        out << text;
    } else {
        std::ofstream f(common.out, std::ios::binary);
        if (!f) {
            err << "error: cannot write " << common.out << "\n";
            return kUsage;
        }
        f << text;
    }
    for (const auto& r : o.checks)
        if (!r.passed)
            err << "FAILED " << r.name << " (value " << scalar_text(r.value) << ", tolerance "
                << scalar_text(r.tolerance) << ")\n";
    return passed ? kPass : kFail;
}

} // namespace weylab::cli

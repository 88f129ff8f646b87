#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace weylab {

enum class WeightKind { unit, polynomial, exponential };
enum class WeightBlock { all, first, second };

// One factor of a weight: <z>^s or exp(c |z|), where z is either the whole
// argument or its first/second half (the X or Y block of a 4d argument).
struct WeightFactor {
    WeightKind kind{WeightKind::unit};
    double param{0.0};
    WeightBlock block{WeightBlock::all};
};

// Product of factors; the empty product is the unit weight.
struct WeightSpec {
    int arity{2};
    std::vector<WeightFactor> factors;

    static WeightSpec unit(int arity);
    static WeightSpec polynomial(int arity, double s, WeightBlock block = WeightBlock::all);
    static WeightSpec exponential(int arity, double c, WeightBlock block = WeightBlock::all);

    // Literal grammar: "unit" | "poly:s=<real>" | "exp:c=<real>", optionally
    // prefixed by "split:" and suffixed by "@X" or "@Y"; factors joined by '*'.
    static WeightSpec parse(std::string_view text, int arity);

    // The submultiplicative weight v with w(x + y) <= C w(x) v(y).
    WeightSpec moderator() const;
    WeightSpec inverse() const;
    WeightSpec times(const WeightSpec& other) const;
    std::string str() const;
};

double log_weight(const WeightSpec& w, std::span<const double> point);
double evaluate_weight(const WeightSpec& w, std::span<const double> point);

struct ModerateCheck {
    bool ok{false};
    double worst_ratio{0.0};
};

// Smallest C with w(x + y) <= C w(x) v(y) over all ordered pairs of sample
// points, followed by an escape-ray probe: ok is false when the ratio keeps
// growing along a ray.
ModerateCheck verify_moderate(const WeightSpec& w, const WeightSpec& v, const std::vector<std::vector<double>>& samples);

enum class ProductWeightKind { weyl, a_calculus, twist };

struct ProductWeightResult {
    bool satisfied{false};
    double inf_estimate{0.0};
    double log_inf{0.0};
};

inline constexpr double kWeightConditionFloor = 1e-6;

// Sampled infimum over (X_0, ..., X_N) of the product condition of the chosen
// kind (weights[0] is omega_0). A is d x d row-major, used only for the
// a-calculus kind. Monte-Carlo samples plus deterministic escape rays.
ProductWeightResult product_weight_condition(ProductWeightKind kind, const std::vector<WeightSpec>& weights,
                                             const std::vector<double>& A, int sample_count, std::uint64_t seed);

// Argument of omega_j in the product condition, for X = X_j, Y = X_{j-1}.
std::vector<double> product_weight_argument(ProductWeightKind kind, std::span<const double> X,
                                            std::span<const double> Y, const std::vector<double>& A);

} // namespace weylab

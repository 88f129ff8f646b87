#pragma once

#include "weylab/exponent.hpp"
#include "weylab/norm.hpp"
#include "weylab/phase_space.hpp"
#include "weylab/stft.hpp"
#include "weylab/weight.hpp"
#include "weylab/weyl.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace weylab {

// Left fold a_1 #_A a_2 #_A ... #_A a_N.
GridFunction nfold_product(const std::vector<GridFunction>& symbols, const MatrixA& A);
// Left fold of the twisted convolution.
GridFunction nfold_twist(const std::vector<GridFunction>& symbols);

// F(X, Y) = V(X + Y, X - Y) with periodic index wrap.
STFTTensor stft_f_form(const STFTTensor& V);

// F_0(X_N, X_0) = h^{2d(N-1)} sum_{X_1..X_{N-1}} exp(2i Q) prod_j F_j(X_j, X_{j-1}),
// Q = sum_{j=1}^{N-1} sigma(X_j - X_0, X_{j+1} - X_0). The sum is evaluated as
// a chain over consecutive pairs; cost M^3 (N - 1) with M = n^{2d}.
STFTTensor stft_integral_representation(const std::vector<STFTTensor>& F);

// Upper bound on M^3 (N - 1) accepted by stft_integral_representation.
inline constexpr double kRepresentationBudget = 268435456.0;

struct RepresentationCheck {
    STFTTensor representation;
    STFTTensor direct; // F-form of the symplectic STFT of a_1 # ... # a_N with window Phi_0
    double residual{0.0};
    double scale{0.0};
};

// Phi_0 = pi^{(N-1)d} Phi_1 # ... # Phi_N.
RepresentationCheck representation_check(const std::vector<GridFunction>& symbols,
                                         const std::vector<GridFunction>& windows);

enum class EnsembleNormalization { none, unit_M2 };

struct EnsembleSpec {
    std::uint64_t seed{0};
    int count{1};
    int atoms_per_symbol{3};
    double gamma_min{0.6};
    double gamma_max{0.9};
    double center_radius{0.75};
    double modulation_radius{0.75};
    EnsembleNormalization normalization{EnsembleNormalization::none};
};

// Centered Gaussian window with gamma = 1/sqrt(2) and unit l2 norm in the
// given measure.
GridFunction standard_window(const PhaseGrid& grid, Measure measure);

// Superpositions of Gaussian atoms. Item i draws from its own generator seeded
// by (seed, i), so the output does not depend on the thread count.
std::vector<GridFunction> ensemble_generate(const EnsembleSpec& spec, const PhaseGrid& grid, int threads = 1);

enum class ProductMode { weyl, twist };

struct RatioOptions {
    ProductMode mode{ProductMode::weyl};
    Measure measure{Measure::quadrature};
    MatrixA A = MatrixA::weyl(1);
    int threads{1};
};

struct RatioConfig {
    std::string label;
    ExponentTuple p;
    ExponentTuple q;
    std::vector<WeightSpec> weights; // omega_0 .. omega_N, arity 4d
};

struct RatioReport {
    std::string label;
    ExponentTuple p;
    ExponentTuple q;
    std::vector<std::string> weights;
    int N{0};
    int n{0};
    int d{1};
    std::uint64_t seed{0};
    ProductMode mode{ProductMode::weyl};
    Measure measure{Measure::quadrature};
    std::string criterion;
    std::optional<bool> criterion_holds; // unset when the criterion does not apply
    std::vector<std::optional<double>> ratios; // null: vanishing denominator
    std::size_t nulls{0};
    double max{0.0};
    double mean{0.0};
    double median{0.0};
    double q90{0.0};
};

// Ratio of the product norm (exponents p_0', q_0', weight 1/omega_0) to the
// product of the factor norms; null when a factor norm vanishes.
std::optional<double> norm_ratio(const std::vector<GridFunction>& symbols, const RatioConfig& config,
                                 const GridFunction& window, const RatioOptions& options);

// Several configurations sharing N evaluated on one ensemble: sample s uses
// ensemble items sN .. sN + N - 1, and each symbol is analysed once.
std::vector<RatioReport> norm_ratio_sweep(const std::vector<RatioConfig>& configs, const EnsembleSpec& ensemble,
                                          const PhaseGrid& grid, const RatioOptions& options);

RatioReport norm_ratio_experiment(const ExponentTuple& p, const ExponentTuple& q,
                                  const std::vector<WeightSpec>& weights, const EnsembleSpec& ensemble,
                                  const PhaseGrid& grid, const RatioOptions& options);

std::string to_string(ProductMode m);
std::string ratio_report_json(const RatioReport& r);
// Header plus one row per sample.
std::string ratio_report_csv(const RatioReport& r);

} // namespace weylab

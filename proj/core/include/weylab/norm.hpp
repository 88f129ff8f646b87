#pragma once

#include "weylab/exponent.hpp"
#include "weylab/stft.hpp"
#include "weylab/weight.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace weylab {

// Deterministic pairwise (cascade) summation; the order of add() calls fixes
// the result bit for bit.
class PairwiseSum {
  public:
    void add(double v);
    double total() const;
    std::uint64_t count() const { return count_; }

  private:
    std::vector<double> partial_;
    std::uint64_t count_{0};
};

enum class NormOrder {
    modulation, // inner over X (exponent p), outer over Y (exponent q)
    amalgam     // inner over Y (exponent q), outer over X (exponent p)
};

enum class Measure { quadrature, counting };

struct MixedNormSpec {
    Exponent p = Exponent::from_value(Rational(2));
    Exponent q = Exponent::from_value(Rational(2));
    NormOrder order{NormOrder::modulation};
    std::optional<WeightSpec> weight; // unset = unit weight
    Measure measure{Measure::quadrature};
};

// Streaming evaluator of a mixed norm; feed X slices in increasing order.
class MixedNormAccumulator {
  public:
    MixedNormAccumulator(const MixedNormSpec& spec, int axes, int n, double x_spacing, double y_spacing);
    void add_slice(std::size_t x_flat, const cplx* slice);
    double result() const;

  private:
    double weighted_abs(std::size_t x, std::size_t y, cplx v) const;

    MixedNormSpec spec_;
    int axes_;
    int n_;
    std::size_t block_;
    double wx_, wy_;
    double x_spacing_, y_spacing_;
    bool flat_;
    std::vector<std::vector<double>> coords_x_, coords_y_;
    mutable std::vector<double> point_;
    // weights whose factors each see only X or only Y: w = table_x_[x] table_y_[y]
    bool separable_{false};
    std::vector<double> table_x_, table_y_;
    // modulation order: one accumulator per Y; amalgam order: one outer accumulator
    std::vector<PairwiseSum> per_y_;
    std::vector<double> per_y_max_;
    PairwiseSum outer_;
    double outer_max_{0.0};
};

double mixed_norm(const STFTTensor& F, const MixedNormSpec& spec);

// Plain l^p norm of |F omega| over all entries, with the quadrature factor.
double flat_norm(const STFTTensor& F, const Exponent& p, const std::optional<WeightSpec>& weight, Measure measure);

enum class ModulationFlavor { M, W, symplectic_M, symplectic_W };

// The flavor picks the STFT (ordinary or symplectic) and the order; spec.order
// is ignored.
double modulation_norm(const GridFunction& a, const GridFunction& window, const MixedNormSpec& spec,
                       ModulationFlavor flavor);

// Several norms from one streamed STFT pass.
std::vector<double> modulation_norms(const GridFunction& a, const GridFunction& window,
                                     const std::vector<MixedNormSpec>& specs, ModulationFlavor flavor);

// Norms evaluated on an already materialized tensor.
std::vector<double> tensor_norms(const STFTTensor& F, const std::vector<MixedNormSpec>& specs);

} // namespace weylab

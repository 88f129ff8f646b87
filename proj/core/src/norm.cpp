#include "weylab/norm.hpp"

#include "indexing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace weylab {

void PairwiseSum::add(double v) {
    partial_.push_back(v);
    ++count_;
    for (std::uint64_t c = count_; (c & 1u) == 0; c >>= 1) {
        const double top = partial_.back();
        partial_.pop_back();
        partial_.back() += top;
    }
}

double PairwiseSum::total() const {
    double s = 0.0;
    for (auto it = partial_.rbegin(); it != partial_.rend(); ++it) s += *it;
    return s;
}

namespace {

double power(double a, const Exponent& p) {
    const double e = p.value();
    if (e == 2.0) return a * a;
    if (e == 1.0) return a;
    return std::pow(a, e);
}

double root(double s, const Exponent& p) {
    const double e = p.value();
    if (e == 2.0) return std::sqrt(s);
    if (e == 1.0) return s;
    return std::pow(s, 1.0 / e);
}

} // namespace

MixedNormAccumulator::MixedNormAccumulator(const MixedNormSpec& spec, int axes, int n, double x_spacing,
                                           double y_spacing)
    : spec_(spec), axes_(axes), n_(n), block_(detail::ipow(static_cast<std::size_t>(n), axes)), x_spacing_(x_spacing),
      y_spacing_(y_spacing) {
    if (spec_.weight && spec_.weight->factors.empty()) spec_.weight.reset();
    if (spec_.weight && spec_.weight->arity != 2 * axes)
        throw std::invalid_argument("mixed norm: weight arity does not match the tensor index space");
    if (spec.measure == Measure::quadrature) {
        wx_ = std::pow(x_spacing, axes);
        wy_ = std::pow(y_spacing, axes);
    } else {
        wx_ = wy_ = 1.0;
    }
    flat_ = spec.p == spec.q;
    if (spec_.weight) {
        coords_x_.assign(block_, std::vector<double>(axes));
        coords_y_.assign(block_, std::vector<double>(axes));
        std::vector<int> c(axes);
        for (std::size_t i = 0; i < block_; ++i) {
            detail::decode(i, axes, n, c.data());
            for (int a = 0; a < axes; ++a) {
                coords_x_[i][a] = c[a] * x_spacing;
                coords_y_[i][a] = c[a] * y_spacing;
            }
        }
        point_.resize(2 * static_cast<std::size_t>(axes));
        separable_ = std::none_of(spec_.weight->factors.begin(), spec_.weight->factors.end(),
                                  [](const WeightFactor& f) { return f.block == WeightBlock::all; });
        if (separable_) {
            WeightSpec wx{spec_.weight->arity, {}}, wy{spec_.weight->arity, {}};
            for (const auto& f : spec_.weight->factors) (f.block == WeightBlock::first ? wx : wy).factors.push_back(f);
            table_x_.resize(block_);
            table_y_.resize(block_);
            std::vector<double> pt(point_.size(), 0.0);
            for (std::size_t i = 0; i < block_; ++i) {
                std::copy(coords_x_[i].begin(), coords_x_[i].end(), pt.begin());
                std::copy(coords_y_[i].begin(), coords_y_[i].end(), pt.begin() + axes);
                table_x_[i] = std::exp(log_weight(wx, pt));
                table_y_[i] = std::exp(log_weight(wy, pt));
            }
        }
    }
    if (!flat_ && spec.order == NormOrder::modulation) {
        if (spec.p.is_infinite())
            per_y_max_.assign(block_, 0.0);
        else
            per_y_.resize(block_);
    }
}

double MixedNormAccumulator::weighted_abs(std::size_t x, std::size_t y, cplx v) const {
    double a = std::abs(v);
    if (!spec_.weight) return a;
    if (separable_) return a * table_x_[x] * table_y_[y];
    std::copy(coords_x_[x].begin(), coords_x_[x].end(), point_.begin());
    std::copy(coords_y_[y].begin(), coords_y_[y].end(), point_.begin() + axes_);
    return a * std::exp(log_weight(*spec_.weight, point_));
}

void MixedNormAccumulator::add_slice(std::size_t x, const cplx* slice) {
    if (flat_) {
        for (std::size_t y = 0; y < block_; ++y) {
            const double a = weighted_abs(x, y, slice[y]);
            if (spec_.p.is_infinite())
                outer_max_ = std::max(outer_max_, a);
            else
                outer_.add(power(a, spec_.p));
        }
        return;
    }
    if (spec_.order == NormOrder::modulation) {
        for (std::size_t y = 0; y < block_; ++y) {
            const double a = weighted_abs(x, y, slice[y]);
            if (spec_.p.is_infinite())
                per_y_max_[y] = std::max(per_y_max_[y], a);
            else
                per_y_[y].add(power(a, spec_.p));
        }
        return;
    }
    // amalgam: inner over Y with q, outer over X with p
    double inner;
    if (spec_.q.is_infinite()) {
        inner = 0.0;
        for (std::size_t y = 0; y < block_; ++y) inner = std::max(inner, weighted_abs(x, y, slice[y]));
    } else {
        PairwiseSum s;
        for (std::size_t y = 0; y < block_; ++y) s.add(power(weighted_abs(x, y, slice[y]), spec_.q));
        inner = root(s.total() * wy_, spec_.q);
    }
    if (spec_.p.is_infinite())
        outer_max_ = std::max(outer_max_, inner);
    else
        outer_.add(power(inner, spec_.p));
}

double MixedNormAccumulator::result() const {
    if (flat_) {
        if (spec_.p.is_infinite()) return outer_max_;
        return root(outer_.total() * wx_ * wy_, spec_.p);
    }
    if (spec_.order == NormOrder::modulation) {
        PairwiseSum s;
        double mx = 0.0;
        for (std::size_t y = 0; y < block_; ++y) {
            const double inner = spec_.p.is_infinite() ? per_y_max_[y] : root(per_y_[y].total() * wx_, spec_.p);
            if (spec_.q.is_infinite())
                mx = std::max(mx, inner);
            else
                s.add(power(inner, spec_.q));
        }
        return spec_.q.is_infinite() ? mx : root(s.total() * wy_, spec_.q);
    }
    if (spec_.p.is_infinite()) return outer_max_;
    return root(outer_.total() * wx_, spec_.p);
}

std::vector<double> tensor_norms(const STFTTensor& F, const std::vector<MixedNormSpec>& specs) {
    std::vector<MixedNormAccumulator> accs;
    accs.reserve(specs.size());
    for (const auto& s : specs) accs.emplace_back(s, F.axes, F.n, F.x_spacing, F.y_spacing);
    const std::size_t M = F.block();
    if (F.samples.size() != M * M) throw std::invalid_argument("mixed norm: tensor shape mismatch");
    for (std::size_t x = 0; x < M; ++x)
        for (auto& a : accs) a.add_slice(x, F.samples.data() + x * M);
    std::vector<double> out;
    out.reserve(accs.size());
    for (const auto& a : accs) out.push_back(a.result());
    return out;
}

double mixed_norm(const STFTTensor& F, const MixedNormSpec& spec) { return tensor_norms(F, {spec})[0]; }

double flat_norm(const STFTTensor& F, const Exponent& p, const std::optional<WeightSpec>& weight, Measure measure) {
    MixedNormSpec spec;
    spec.p = p;
    spec.q = p;
    spec.weight = weight;
    spec.measure = measure;
    return mixed_norm(F, spec);
}

namespace {

StftFlavor stft_flavor(ModulationFlavor f) {
    return (f == ModulationFlavor::M || f == ModulationFlavor::W) ? StftFlavor::ordinary : StftFlavor::symplectic;
}

NormOrder order_of(ModulationFlavor f) {
    return (f == ModulationFlavor::M || f == ModulationFlavor::symplectic_M) ? NormOrder::modulation
                                                                              : NormOrder::amalgam;
}

} // namespace

std::vector<double> modulation_norms(const GridFunction& a, const GridFunction& window,
                                     const std::vector<MixedNormSpec>& specs, ModulationFlavor flavor) {
    const StftFlavor sf = stft_flavor(flavor);
    const int axes = a.axes();
    const double ysp = sf == StftFlavor::symplectic ? a.spacing : 2.0 * kPi / (a.n * a.spacing);
    std::vector<MixedNormAccumulator> accs;
    accs.reserve(specs.size());
    for (auto s : specs) {
        s.order = order_of(flavor);
        accs.emplace_back(s, axes, a.n, a.spacing, ysp);
    }
    for_each_stft_slice(a, window, sf, [&](std::size_t x, const cplx* slice) {
        for (auto& acc : accs) acc.add_slice(x, slice);
    });
    std::vector<double> out;
    out.reserve(accs.size());
    for (const auto& acc : accs) out.push_back(acc.result());
    return out;
}

double modulation_norm(const GridFunction& a, const GridFunction& window, const MixedNormSpec& spec,
                       ModulationFlavor flavor) {
    return modulation_norms(a, window, {spec}, flavor)[0];
}

} // namespace weylab

#pragma once

#include "weylab/phase_space.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace weylab {

enum class StftFlavor { ordinary, symplectic };

// Samples of V_phi f(X, Y) (ordinary) or of the symplectic STFT, indexed by
// (X, Y) in n^D x n^D with X the slow index. D is the number of axes of the
// analysed function (d for base functions, 2d for symbols).
struct STFTTensor {
    StftFlavor flavor{StftFlavor::ordinary};
    int axes{1};
    int n{16};
    double x_spacing{0.0};
    double y_spacing{0.0};
    std::vector<cplx> samples;

    std::size_t block() const;
    cplx at(std::size_t x, std::size_t y) const { return samples[x * block() + y]; }
};

// Entries beyond which a tensor is streamed instead of materialized
// (32^4, the d = 1, n = 32 symbol case).
inline constexpr std::size_t kMaxMaterializedEntries = std::size_t(1) << 20;

using SliceCallback = std::function<void(std::size_t x_flat, const cplx* slice)>;

// Calls back once per X (in increasing flat order) with the n^D slice over Y.
void for_each_stft_slice(const GridFunction& f, const GridFunction& window, StftFlavor flavor,
                         const SliceCallback& callback);

// (2 pi)^{-D/2} delta^D sum_y f(y) conj(phi(y - x)) exp(-i <y, xi>) with
// periodic window shift; frequencies on the dual grid of spacing 2 pi / (n delta).
STFTTensor stft(const GridFunction& f, const GridFunction& phi);

// pi^{-d} h^{2d} sum_Z a(Z) conj(Phi(Z - X)) exp(2i sigma(Y, Z)).
STFTTensor symplectic_stft(const GridFunction& a, const GridFunction& Phi);

// Single value of the symplectic STFT at integer grid coordinates, by direct sum.
cplx symplectic_stft_at(const GridFunction& a, const GridFunction& Phi, const std::vector<int>& X,
                        const std::vector<int>& Y);

} // namespace weylab

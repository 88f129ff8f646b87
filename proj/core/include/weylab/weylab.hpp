#pragma once

#include "weylab/exponent.hpp"
#include "weylab/multilinear.hpp"
#include "weylab/norm.hpp"
#include "weylab/phase_space.hpp"
#include "weylab/stft.hpp"
#include "weylab/weight.hpp"
#include "weylab/weyl.hpp"

namespace weylab {

inline constexpr const char* kVersion = "0.1.0";

} // namespace weylab

#pragma once

#include "bufstarv/ballot.hpp"
#include "bufstarv/banded_toeplitz.hpp"
#include "bufstarv/core.hpp"
#include "bufstarv/fluid.hpp"
#include "bufstarv/qoe.hpp"
#include "bufstarv/recursive.hpp"
#include "bufstarv/sim.hpp"
#include "bufstarv/starvation_paths.hpp"
#include "bufstarv/takacs.hpp"

namespace bufstarv {

inline constexpr const char* version = "1.0.0";

} // namespace bufstarv

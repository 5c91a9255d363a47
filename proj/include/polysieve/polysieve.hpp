#pragma once

#include "arith.hpp"
#include "boxes.hpp"
#include "bv.hpp"
#include "characters.hpp"
#include "congruence.hpp"
#include "errors.hpp"
#include "farey.hpp"
#include "largesieve.hpp"
#include "mvpoly.hpp"
#include "normform.hpp"
#include "numeric.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace polysieve {
inline constexpr const char* kVersion = "0.3.0";
}

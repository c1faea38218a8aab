#pragma once

#include "normord/birch.hpp"
#include "normord/core.hpp"
#include "normord/effective_phi.hpp"
#include "normord/factor.hpp"
#include "normord/moments.hpp"
#include "normord/multfun.hpp"
#include "normord/normal_order.hpp"
#include "normord/proof_explorer.hpp"

namespace normord {
inline constexpr const char* kVersion = "0.1.0";
}

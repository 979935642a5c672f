#pragma once

// Umbrella header.

#include "bol/atoms.hpp"
#include "bol/bergman.hpp"
#include "bol/carleson.hpp"
#include "bol/error.hpp"
#include "bol/growth.hpp"
#include "bol/halfplane.hpp"
#include "bol/lattice.hpp"
#include "bol/orlicz.hpp"
#include "bol/quadrature.hpp"

namespace bol {
inline constexpr const char* kVersion = "0.1.0";
}

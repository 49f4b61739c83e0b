#pragma once

#include "coefficients.hpp"
#include "energetics.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "harmonics.hpp"
#include "identities.hpp"
#include "integration.hpp"
#include "mollifier.hpp"
#include "multi_index.hpp"
#include "poly_io.hpp"
#include "polynomial.hpp"
#include "special_functions.hpp"

namespace harmonic_ball {
inline constexpr const char* version = "0.1.0";
}

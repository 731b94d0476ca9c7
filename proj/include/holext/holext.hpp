#pragma once

/// Convenience header pulling in the whole library.

#include "holext/bernstein.hpp"
#include "holext/capacity.hpp"
#include "holext/errors.hpp"
#include "holext/gamma_capacity.hpp"
#include "holext/json_io.hpp"
#include "holext/polynomial.hpp"
#include "holext/series_extension.hpp"
#include "holext/set_model.hpp"

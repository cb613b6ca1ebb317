#pragma once

// Umbrella header for the quadratic cardioid distribution library.

#include "qcirc/angle.hpp"
#include "qcirc/core.hpp"
#include "qcirc/error.hpp"
#include "qcirc/grid.hpp"
#include "qcirc/params.hpp"
#include "qcirc/quartic.hpp"
#include "qcirc/sampling.hpp"
#include "qcirc/shape.hpp"
#include "qcirc/spectral.hpp"

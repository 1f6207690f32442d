#pragma once

// Umbrella header: tomographic probability representation of classical and
// quantum free-particle states.

#include "tomokit/dynamics.hpp"
#include "tomokit/errors.hpp"
#include "tomokit/grid.hpp"
#include "tomokit/io.hpp"
#include "tomokit/quantumness.hpp"
#include "tomokit/states.hpp"
#include "tomokit/tomography.hpp"

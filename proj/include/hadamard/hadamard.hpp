#pragma once

// Weak-topology machinery on four Hadamard model spaces: metrics and
// geodesics, closest-point projections, elementary sets, weak-convergence
// reports, and numeric witnesses. Umbrella header.

#include "cat0.hpp"
#include "projection.hpp"
#include "properties.hpp"
#include "sampling.hpp"
#include "spaces.hpp"
#include "topology.hpp"
#include "types.hpp"

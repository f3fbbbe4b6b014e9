#pragma once

// Umbrella header.

#include "floq/analysis.hpp"
#include "floq/circuit.hpp"
#include "floq/config.hpp"
#include "floq/gates.hpp"
#include "floq/lattice.hpp"
#include "floq/linalg.hpp"
#include "floq/mps.hpp"
#include "floq/noise.hpp"
#include "floq/rng.hpp"
#include "floq/runner.hpp"
#include "floq/statevector.hpp"
#include "floq/svg.hpp"
#include "floq/trajectory.hpp"
#include "floq/version.hpp"

#pragma once

// Umbrella header.

#include "vsp/errors.hpp"
#include "vsp/exact.hpp"
#include "vsp/ga.hpp"
#include "vsp/greedy.hpp"
#include "vsp/harness.hpp"
#include "vsp/json_io.hpp"
#include "vsp/metrics.hpp"
#include "vsp/model.hpp"
#include "vsp/numeric.hpp"
#include "vsp/objective.hpp"
#include "vsp/resource_vector.hpp"
#include "vsp/rng.hpp"
#include "vsp/scenario.hpp"
#include "vsp/solve_result.hpp"

#pragma once

// Umbrella header for the whole library.

#include "gridtrust/cluster.hpp"
#include "gridtrust/core.hpp"
#include "gridtrust/demand.hpp"
#include "gridtrust/feedback.hpp"
#include "gridtrust/report.hpp"
#include "gridtrust/repository.hpp"
#include "gridtrust/rng.hpp"
#include "gridtrust/scenario.hpp"
#include "gridtrust/security.hpp"
#include "gridtrust/sim.hpp"
#include "gridtrust/trace.hpp"
#include "gridtrust/trust.hpp"
#include "gridtrust/types.hpp"
#include "gridtrust/upper_level.hpp"


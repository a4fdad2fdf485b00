#pragma once

// Umbrella header: the whole library.

#include "walkernet/capacity.hpp"
#include "walkernet/config.hpp"
#include "walkernet/core.hpp"
#include "walkernet/dataset.hpp"
#include "walkernet/experiment.hpp"
#include "walkernet/geometry.hpp"
#include "walkernet/link_budget.hpp"
#include "walkernet/metrics.hpp"
#include "walkernet/routing.hpp"
#include "walkernet/simulator.hpp"
#include "walkernet/stats.hpp"
#include "walkernet/topology.hpp"

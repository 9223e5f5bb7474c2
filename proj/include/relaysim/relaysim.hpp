#pragma once

// Umbrella header for the successive-relaying outage and DMT simulator.

#include "relaysim/channel.hpp"
#include "relaysim/complex_matrix.hpp"
#include "relaysim/csv.hpp"
#include "relaysim/dblast.hpp"
#include "relaysim/dmt_curves.hpp"
#include "relaysim/experiments.hpp"
#include "relaysim/mimo_info.hpp"
#include "relaysim/rng.hpp"

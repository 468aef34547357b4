// rydchain.hpp
// Umbrella header.

#pragma once

#include "rydchain/analytics.hpp"
#include "rydchain/dynamics.hpp"
#include "rydchain/error.hpp"
#include "rydchain/io.hpp"
#include "rydchain/lattice.hpp"
#include "rydchain/montecarlo.hpp"
#include "rydchain/protocols.hpp"
#include "rydchain/statekit.hpp"
#include "rydchain/targets.hpp"

// mwm/mwm.hpp -- umbrella header.
#pragma once

#include "mwm/auction.hpp"
#include "mwm/dynamic.hpp"
#include "mwm/generator.hpp"
#include "mwm/graph.hpp"
#include "mwm/graph_io.hpp"
#include "mwm/oracle.hpp"
#include "mwm/replay.hpp"
#include "mwm/scaling.hpp"
#include "mwm/verify.hpp"

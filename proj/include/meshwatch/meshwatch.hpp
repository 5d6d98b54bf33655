#pragma once

#include "meshwatch/aodv/node.hpp"
#include "meshwatch/aodv/packet.hpp"
#include "meshwatch/aodv/policy.hpp"
#include "meshwatch/detect/anova.hpp"
#include "meshwatch/detect/chi_square.hpp"
#include "meshwatch/detect/classify.hpp"
#include "meshwatch/detect/cluster.hpp"
#include "meshwatch/detect/similarity.hpp"
#include "meshwatch/exp/config.hpp"
#include "meshwatch/exp/csv.hpp"
#include "meshwatch/exp/scenario.hpp"
#include "meshwatch/exp/sweep.hpp"
#include "meshwatch/numerics/special_functions.hpp"
#include "meshwatch/sim/engine.hpp"
#include "meshwatch/sim/rng.hpp"
#include "meshwatch/sim/topology.hpp"
#include "meshwatch/sim/types.hpp"
#include "meshwatch/watchdog/fsm.hpp"
#include "meshwatch/watchdog/watchdog.hpp"

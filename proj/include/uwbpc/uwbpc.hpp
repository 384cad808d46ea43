#pragma once

#include "uwbpc/config.hpp"
#include "uwbpc/units.hpp"
#include "uwbpc/channel.hpp"
#include "uwbpc/gains.hpp"
#include "uwbpc/efficiency.hpp"
#include "uwbpc/nash.hpp"
#include "uwbpc/lsa.hpp"
#include "uwbpc/pareto.hpp"
#include "uwbpc/montecarlo.hpp"

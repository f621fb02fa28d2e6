#pragma once

#include "gralasso/common.hpp"
#include "gralasso/robust_stats.hpp"
#include "gralasso/data.hpp"
#include "gralasso/covariance.hpp"
#include "gralasso/regression.hpp"
#include "gralasso/simulation.hpp"

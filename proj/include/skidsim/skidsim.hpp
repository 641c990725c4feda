#pragma once

// Umbrella header for the traction-mode skid dynamics library.

#include "skidsim/config.hpp"
#include "skidsim/csv.hpp"
#include "skidsim/errors.hpp"
#include "skidsim/grip.hpp"
#include "skidsim/model.hpp"
#include "skidsim/parallel.hpp"
#include "skidsim/selftest.hpp"
#include "skidsim/simulate.hpp"
#include "skidsim/stability.hpp"
#include "skidsim/sweep.hpp"
#include "skidsim/types.hpp"

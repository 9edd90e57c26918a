#pragma once

// Umbrella header for the binar shuffle library.

#include "binar/baselines.hpp"
#include "binar/bench.hpp"
#include "binar/bits.hpp"
#include "binar/errors.hpp"
#include "binar/io.hpp"
#include "binar/quality.hpp"
#include "binar/schedule.hpp"
#include "binar/shuffle.hpp"

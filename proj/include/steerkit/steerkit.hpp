#pragma once

#include "steerkit/error.hpp"
#include "steerkit/state.hpp"
#include "steerkit/measures.hpp"
#include "steerkit/inequalities.hpp"
#include "steerkit/rng.hpp"
#include "steerkit/sampling.hpp"
#include "steerkit/optimizer.hpp"
#include "steerkit/io.hpp"
#include "steerkit/harness.hpp"

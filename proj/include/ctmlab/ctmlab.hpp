#pragma once

#include "calibrators.hpp"
#include "conformal.hpp"
#include "engines.hpp"
#include "errors.hpp"
#include "harness.hpp"
#include "model.hpp"
#include "oracles.hpp"
#include "random.hpp"
#include "trajectory.hpp"

#pragma once

#include "plap/error.hpp"
#include "plap/grid.hpp"
#include "plap/core.hpp"
#include "plap/eigen.hpp"
#include "plap/model_problems.hpp"
#include "plap/bounds.hpp"
#include "plap/monotone_iteration.hpp"
#include "plap/threshold.hpp"

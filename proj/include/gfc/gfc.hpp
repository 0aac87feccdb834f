#pragma once

#include "gfc/error.hpp"
#include "gfc/quadrature.hpp"
#include "gfc/specfun.hpp"
#include "gfc/grid_function.hpp"
#include "gfc/kernels.hpp"
#include "gfc/operators.hpp"
#include "gfc/fractional.hpp"
#include "gfc/bvp.hpp"
#include "gfc/checks.hpp"
#include "gfc/config.hpp"
#include "gfc/cli.hpp"

#pragma once

#include "sbp_time/errors.hpp"
#include "sbp_time/linalg.hpp"
#include "sbp_time/quadrature.hpp"
#include "sbp_time/sbp_operator.hpp"
#include "sbp_time/fd_operators.hpp"
#include "sbp_time/projection.hpp"
#include "sbp_time/butcher.hpp"
#include "sbp_time/order_conditions.hpp"
#include "sbp_time/ode_solver.hpp"
#include "sbp_time/serialization.hpp"

#pragma once

// Umbrella header.

#include "triom/constants.hpp"
#include "triom/errors.hpp"
#include "triom/params.hpp"
#include "triom/modes.hpp"
#include "triom/steady_state.hpp"
#include "triom/dynamics.hpp"
#include "triom/gaussian.hpp"
#include "triom/spectrum.hpp"
#include "triom/sweep.hpp"
#include "triom/selftest.hpp"

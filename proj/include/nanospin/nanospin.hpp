#pragma once

#include "nanospin/constants.hpp"
#include "nanospin/errors.hpp"
#include "nanospin/material.hpp"
#include "nanospin/greens.hpp"
#include "nanospin/quadrature.hpp"
#include "nanospin/torque.hpp"
#include "nanospin/config.hpp"
#include "nanospin/dynamics.hpp"
#include "nanospin/io.hpp"

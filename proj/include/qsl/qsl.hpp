#pragma once

// Umbrella header for the quantum speed limit library.

#include "qsl/dynamics.hpp"
#include "qsl/errors.hpp"
#include "qsl/geometry.hpp"
#include "qsl/mixed.hpp"
#include "qsl/models/bethe_lamb.hpp"
#include "qsl/models/gain_loss.hpp"
#include "qsl/numerics.hpp"

#ifndef OUTAGE_OUTAGE_HPP
#define OUTAGE_OUTAGE_HPP

// Umbrella header.

#include "outage/cgf.hpp"
#include "outage/errors.hpp"
#include "outage/gil_pelaez.hpp"
#include "outage/monte_carlo.hpp"
#include "outage/nig.hpp"
#include "outage/ppp.hpp"
#include "outage/quadrature.hpp"
#include "outage/runner.hpp"
#include "outage/saddle.hpp"
#include "outage/scenario.hpp"
#include "outage/spa.hpp"
#include "outage/special_functions.hpp"

#endif  // OUTAGE_OUTAGE_HPP

#ifndef VLNCE_VLNCE_HPP
#define VLNCE_VLNCE_HPP

#include "vlnce/config.hpp"
#include "vlnce/control.hpp"
#include "vlnce/errors.hpp"
#include "vlnce/geometry.hpp"
#include "vlnce/harness.hpp"
#include "vlnce/metrics.hpp"
#include "vlnce/perceive.hpp"
#include "vlnce/plan.hpp"
#include "vlnce/scenegen.hpp"
#include "vlnce/svg.hpp"
#include "vlnce/trajectory.hpp"
#include "vlnce/world.hpp"

#endif  // VLNCE_VLNCE_HPP

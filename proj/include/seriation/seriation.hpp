#ifndef SERIATION_SERIATION_HPP
#define SERIATION_SERIATION_HPP

#include "seriation/core.hpp"
#include "seriation/dykstra.hpp"
#include "seriation/estimators.hpp"
#include "seriation/experiment.hpp"
#include "seriation/io.hpp"
#include "seriation/metrics.hpp"
#include "seriation/shape_regression.hpp"
#include "seriation/synth.hpp"

#endif  // SERIATION_SERIATION_HPP

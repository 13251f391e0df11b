#pragma once

#include "pshlab/types.hpp"
#include "pshlab/linalg.hpp"
#include "pshlab/hessian.hpp"
#include "pshlab/grid.hpp"
#include "pshlab/family.hpp"
#include "pshlab/quadrature.hpp"
#include "pshlab/metric.hpp"
#include "pshlab/curvature.hpp"
#include "pshlab/psh_toolkit.hpp"
#include "pshlab/bergman.hpp"
#include "pshlab/corollaries.hpp"
#include "pshlab/symmetric_bundle.hpp"
#include "pshlab/config.hpp"
#include "pshlab/report.hpp"
#include "pshlab/experiments.hpp"
#include "pshlab/acceptance.hpp"

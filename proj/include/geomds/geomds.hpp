#pragma once

#include "geomds/decompose.hpp"
#include "geomds/error.hpp"
#include "geomds/geodesics.hpp"
#include "geomds/geometry.hpp"
#include "geomds/laplacian.hpp"
#include "geomds/metrics.hpp"
#include "geomds/scaling.hpp"

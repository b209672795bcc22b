#pragma once

#include "wgeom/core.hpp"
#include "wgeom/rng.hpp"
#include "wgeom/quadrature.hpp"
#include "wgeom/density.hpp"
#include "wgeom/surface.hpp"
#include "wgeom/graph_function.hpp"
#include "wgeom/measure.hpp"
#include "wgeom/graph.hpp"
#include "wgeom/calibration.hpp"
#include "wgeom/flow.hpp"
#include "wgeom/catalog.hpp"

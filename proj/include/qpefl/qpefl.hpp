#pragma once

#include "qpefl/bessel.hpp"
#include "qpefl/chebyshev.hpp"
#include "qpefl/common.hpp"
#include "qpefl/filter.hpp"
#include "qpefl/grid.hpp"
#include "qpefl/pipeline.hpp"
#include "qpefl/qetu.hpp"
#include "qpefl/response.hpp"
#include "qpefl/sigma.hpp"
#include "qpefl/spectrum.hpp"
#include "qpefl/statevector.hpp"
#include "qpefl/window.hpp"

#pragma once

#include "envlp/contour.hpp"
#include "envlp/envelope_solver.hpp"
#include "envlp/error.hpp"
#include "envlp/fourier_envelope.hpp"
#include "envlp/periodic_signal.hpp"
#include "envlp/qp_solver.hpp"
#include "envlp/shapes.hpp"
#include "envlp/sweep.hpp"

#pragma once

#include "slinv/error.hpp"
#include "slinv/harness.hpp"
#include "slinv/inverse.hpp"
#include "slinv/io.hpp"
#include "slinv/linearized.hpp"
#include "slinv/norm.hpp"
#include "slinv/ode.hpp"
#include "slinv/parallel.hpp"
#include "slinv/potential.hpp"
#include "slinv/quadrature.hpp"
#include "slinv/seqspace.hpp"
#include "slinv/spectra.hpp"

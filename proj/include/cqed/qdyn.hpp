#pragma once

// Truncated-Hilbert-space density-matrix engine.
#include "cqed/qdyn/correlation.hpp"
#include "cqed/qdyn/density.hpp"
#include "cqed/qdyn/evolve.hpp"
#include "cqed/qdyn/integrator.hpp"
#include "cqed/qdyn/steady_state.hpp"
#include "cqed/qdyn/system.hpp"

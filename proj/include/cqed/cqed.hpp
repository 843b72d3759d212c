#pragma once

#include "cqed/derive.hpp"
#include "cqed/dynamics.hpp"
#include "cqed/error.hpp"
#include "cqed/fit/lm.hpp"
#include "cqed/fit/models.hpp"
#include "cqed/io.hpp"
#include "cqed/measured.hpp"
#include "cqed/qdyn.hpp"
#include "cqed/spectra.hpp"
#include "cqed/units.hpp"

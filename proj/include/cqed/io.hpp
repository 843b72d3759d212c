#pragma once

// Plain-text file formats and run configuration.
#include "cqed/io/config.hpp"
#include "cqed/io/series_csv.hpp"
#include "cqed/io/streak.hpp"
#include "cqed/io/text.hpp"

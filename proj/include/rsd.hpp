#pragma once

#include "rsd/distributions.hpp"
#include "rsd/error.hpp"
#include "rsd/experiments/csv.hpp"
#include "rsd/experiments/monte_carlo.hpp"
#include "rsd/experiments/presets.hpp"
#include "rsd/experiments/spectra.hpp"
#include "rsd/experiments/verify.hpp"
#include "rsd/linalg.hpp"
#include "rsd/plot/svg_chart.hpp"
#include "rsd/rng.hpp"
#include "rsd/solvers.hpp"
#include "rsd/theory.hpp"

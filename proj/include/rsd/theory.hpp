#pragma once

#include "rsd/theory/inexact.hpp"
#include "rsd/theory/operators.hpp"
#include "rsd/theory/rates.hpp"
#include "rsd/theory/sampling_bounds.hpp"

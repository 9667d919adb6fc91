#pragma once

#include "rsd/linalg/conjugate.hpp"
#include "rsd/linalg/eigen.hpp"
#include "rsd/linalg/io.hpp"
#include "rsd/linalg/matrix.hpp"

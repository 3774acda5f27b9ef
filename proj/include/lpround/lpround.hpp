#pragma once

// Everything except the Eigen-based exact references in lpround/oracle.hpp.

#include "lpround/alm.hpp"
#include "lpround/conditioning.hpp"
#include "lpround/errors.hpp"
#include "lpround/generators.hpp"
#include "lpround/lp.hpp"
#include "lpround/penalty.hpp"
#include "lpround/pipeline.hpp"
#include "lpround/problems.hpp"
#include "lpround/random.hpp"
#include "lpround/rounding.hpp"
#include "lpround/scd.hpp"
#include "lpround/sparse_matrix.hpp"

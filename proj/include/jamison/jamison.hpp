#pragma once

#include "error.hpp"
#include "torus.hpp"
#include "index_sequence.hpp"
#include "parallel.hpp"
#include "sequences.hpp"
#include "symmetric_sum.hpp"
#include "fiber_map.hpp"
#include "matrix.hpp"
#include "construction.hpp"
#include "semigroup.hpp"
#include "quadrature.hpp"
#include "starnorm.hpp"
#include "io.hpp"
#include "cli.hpp"

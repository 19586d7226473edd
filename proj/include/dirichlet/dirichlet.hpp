#pragma once

#include "dirichlet/grid.hpp"
#include "dirichlet/expr.hpp"
#include "dirichlet/problem.hpp"
#include "dirichlet/discrete_op.hpp"
#include "dirichlet/solver.hpp"
#include "dirichlet/convergence.hpp"
#include "dirichlet/config.hpp"
#include "dirichlet/corpus.hpp"

#pragma once

#include "certified.hpp"
#include "numsys.hpp"
#include "zeta.hpp"
#include "euler_maclaurin.hpp"
#include "evaluator.hpp"
#include "winding.hpp"
#include "zeros.hpp"
#include "parallel.hpp"
#include "bounds.hpp"
#include "contour.hpp"
#include "quadrature.hpp"
#include "explicit.hpp"
#include "io.hpp"
#include "cli.hpp"

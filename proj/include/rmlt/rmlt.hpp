#pragma once

#include "rmlt/bounds.hpp"
#include "rmlt/builder.hpp"
#include "rmlt/constraint.hpp"
#include "rmlt/core.hpp"
#include "rmlt/error.hpp"
#include "rmlt/gf.hpp"
#include "rmlt/linalg.hpp"
#include "rmlt/oracle.hpp"
#include "rmlt/parallel.hpp"
#include "rmlt/poly.hpp"
#include "rmlt/tester.hpp"

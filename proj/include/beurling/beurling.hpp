#pragma once

#include "beurling/catalog.hpp"
#include "beurling/counting.hpp"
#include "beurling/element.hpp"
#include "beurling/enumerate.hpp"
#include "beurling/error.hpp"
#include "beurling/grid.hpp"
#include "beurling/hypotheses.hpp"
#include "beurling/kernel.hpp"
#include "beurling/prime_system.hpp"
#include "beurling/quadrature.hpp"
#include "beurling/zeta.hpp"

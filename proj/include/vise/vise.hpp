#pragma once

#include "vise/error.hpp"
#include "vise/expectations.hpp"
#include "vise/format.hpp"
#include "vise/golden_section.hpp"
#include "vise/model.hpp"
#include "vise/monte_carlo.hpp"
#include "vise/optimal_claims.hpp"
#include "vise/parallel.hpp"
#include "vise/random.hpp"
#include "vise/special_functions.hpp"
#include "vise/sweep.hpp"
#include "vise/version.hpp"

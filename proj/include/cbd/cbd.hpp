#pragma once

// Contextuality analysis of finite systems of dichotomous random variables.

#include "cbd/bayes.hpp"
#include "cbd/consistify.hpp"
#include "cbd/couplings.hpp"
#include "cbd/error.hpp"
#include "cbd/lp.hpp"
#include "cbd/outcome.hpp"
#include "cbd/pmf.hpp"
#include "cbd/rational.hpp"
#include "cbd/system.hpp"

#pragma once

#include "copson/certify.hpp"
#include "copson/errors.hpp"
#include "copson/exact.hpp"
#include "copson/interval.hpp"
#include "copson/polynomial.hpp"
#include "copson/prng.hpp"
#include "copson/quadform.hpp"
#include "copson/sequences.hpp"
#include "copson/sturm.hpp"
#include "copson/verdict.hpp"
#include "copson/weights.hpp"

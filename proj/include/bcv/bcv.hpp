#pragma once

#include "bcv/bernstein.hpp"
#include "bcv/bounds.hpp"
#include "bcv/central.hpp"
#include "bcv/dist.hpp"
#include "bcv/moduli.hpp"
#include "bcv/noncentral.hpp"
#include "bcv/numeric.hpp"
#include "bcv/random.hpp"
#include "bcv/tolerances.hpp"
#include "bcv/validation.hpp"

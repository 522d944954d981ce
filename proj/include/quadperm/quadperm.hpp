#pragma once
// Umbrella header.

#include "quadperm/curve.hpp"
#include "quadperm/gf2field.hpp"
#include "quadperm/gf2tower.hpp"
#include "quadperm/harness.hpp"
#include "quadperm/prng.hpp"
#include "quadperm/quadrinomial.hpp"

#pragma once

// Umbrella header.

#include "cache.hpp"
#include "eyegeom.hpp"
#include "formal.hpp"
#include "liegraph.hpp"
#include "montecarlo.hpp"
#include "ncseries.hpp"
#include "profile.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "scalar.hpp"
#include "transport.hpp"
#include "verify.hpp"
#include "word.hpp"
#include "zeta.hpp"

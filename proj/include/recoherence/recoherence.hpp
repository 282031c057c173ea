#pragma once

#include "recoherence/checks.hpp"
#include "recoherence/coherence.hpp"
#include "recoherence/constants.hpp"
#include "recoherence/estimates.hpp"
#include "recoherence/figures.hpp"
#include "recoherence/geometry.hpp"
#include "recoherence/io.hpp"
#include "recoherence/oracle.hpp"
#include "recoherence/photon_state.hpp"
#include "recoherence/quadrature.hpp"
#include "recoherence/rng.hpp"
#include "recoherence/special.hpp"
#include "recoherence/sweep.hpp"
#include "recoherence/version.hpp"

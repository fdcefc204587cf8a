#pragma once

// One-dimensional Schrödinger scattering for two-scale potentials:
// modulated Jost solutions, transmission/reflection coefficients, resolvent
// poles on the imaginary axis, edge-bifurcating bound states, and dispersive
// time-decay experiments against the effective potential well.

#include "scat1d/config.hpp"
#include "scat1d/errors.hpp"
#include "scat1d/experiments.hpp"
#include "scat1d/fit.hpp"
#include "scat1d/jost.hpp"
#include "scat1d/ode.hpp"
#include "scat1d/potential.hpp"
#include "scat1d/quadrature.hpp"
#include "scat1d/rootfind.hpp"
#include "scat1d/scattering.hpp"
#include "scat1d/spectrum.hpp"
#include "scat1d/timedecay.hpp"
#include "scat1d/tridiag.hpp"
#include "scat1d/version.hpp"

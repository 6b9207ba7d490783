#pragma once

// Umbrella header for the heightbounds library.

#include "arch_potential.hpp"
#include "bound_engine.hpp"
#include "core.hpp"
#include "energy_lab.hpp"
#include "integer_poly.hpp"
#include "irreducibility.hpp"
#include "modular.hpp"
#include "nonarch_robin.hpp"
#include "quadrature.hpp"
#include "roots.hpp"
#include "verify_harness.hpp"

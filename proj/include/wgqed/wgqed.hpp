#pragma once

#include "waveguide_model.hpp"
#include "self_energy.hpp"
#include "bound_states.hpp"
#include "scattering.hpp"
#include "sweep.hpp"
#include "sweep_io.hpp"
#include "verify.hpp"

#pragma once

#include "error.hpp"
#include "rational.hpp"
#include "lattice.hpp"
#include "lattice_io.hpp"
#include "linalg.hpp"
#include "krylov.hpp"
#include "singleparticle.hpp"
#include "hofstadter.hpp"
#include "fock.hpp"
#include "manybody.hpp"
#include "motional.hpp"
#include "theta.hpp"
#include "laughlin.hpp"
#include "state_io.hpp"
#include "pipeline.hpp"
#include "trapdesign.hpp"
#include "beamsynth.hpp"

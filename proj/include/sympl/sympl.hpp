#pragma once

#include "sympl/capacity.hpp"
#include "sympl/convex.hpp"
#include "sympl/core.hpp"
#include "sympl/flows.hpp"
#include "sympl/io.hpp"
#include "sympl/propagate.hpp"
#include "sympl/splitstep.hpp"
#include "sympl/types.hpp"
#include "sympl/uncertainty.hpp"
#include "sympl/wavefunction.hpp"

// Umbrella header for the tfssa library.
#ifndef TFSSA_TFSSA_HPP
#define TFSSA_TFSSA_HPP

#include "tfssa/stochastic.hpp"
#include "tfssa/objective.hpp"
#include "tfssa/optimizer.hpp"
#include "tfssa/benchfn.hpp"
#include "tfssa/dataio.hpp"
#include "tfssa/featsel.hpp"
#include "tfssa/evalstats.hpp"
#include "tfssa/experiment.hpp"

#endif  // TFSSA_TFSSA_HPP

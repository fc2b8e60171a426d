#pragma once

#include "nrmcmc/chain.hpp"
#include "nrmcmc/diagnostics.hpp"
#include "nrmcmc/harness/config.hpp"
#include "nrmcmc/harness/experiment.hpp"
#include "nrmcmc/harness/scaling.hpp"
#include "nrmcmc/harness/sweep.hpp"
#include "nrmcmc/rng.hpp"
#include "nrmcmc/samplers.hpp"
#include "nrmcmc/schedule.hpp"
#include "nrmcmc/targets.hpp"

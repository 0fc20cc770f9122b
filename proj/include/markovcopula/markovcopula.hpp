#pragma once

// Umbrella header: the full library surface in dependency order.

#include "markovcopula/version.hpp"
#include "markovcopula/matrix.hpp"
#include "markovcopula/state_space.hpp"
#include "markovcopula/rate_matrix.hpp"
#include "markovcopula/generator.hpp"
#include "markovcopula/kolmogorov.hpp"
#include "markovcopula/consistency.hpp"
#include "markovcopula/simplex.hpp"
#include "markovcopula/copula.hpp"
#include "markovcopula/rng.hpp"
#include "markovcopula/parallel.hpp"
#include "markovcopula/montecarlo.hpp"
#include "markovcopula/model_io.hpp"
#include "markovcopula/report.hpp"
#include "markovcopula/cli.hpp"

#pragma once

#include "fla/csv.hpp"
#include "fla/epistasis.hpp"
#include "fla/error.hpp"
#include "fla/evolution.hpp"
#include "fla/generators.hpp"
#include "fla/landscape.hpp"
#include "fla/navigability.hpp"
#include "fla/parallel.hpp"
#include "fla/perturbation.hpp"
#include "fla/regression.hpp"
#include "fla/report.hpp"
#include "fla/rng.hpp"
#include "fla/ruggedness.hpp"
#include "fla/sequence_space.hpp"
#include "fla/snapshot.hpp"
#include "fla/stats.hpp"
#include "fla/walks.hpp"

// Umbrella header.
#pragma once

#include "pgdot/airy.hpp"
#include "pgdot/analysis.hpp"
#include "pgdot/benchmarks.hpp"
#include "pgdot/checks.hpp"
#include "pgdot/config.hpp"
#include "pgdot/core.hpp"
#include "pgdot/datasets.hpp"
#include "pgdot/experiment.hpp"
#include "pgdot/io.hpp"
#include "pgdot/mlp.hpp"
#include "pgdot/occupation.hpp"
#include "pgdot/optimizers.hpp"
#include "pgdot/presets.hpp"
#include "pgdot/walks.hpp"

#pragma once

// Umbrella header: tick ingestion, derived series, deseasonalization,
// autocorrelation, MFDFA/MFDCCA, distribution fitting, and the synthetic
// oracles used to validate all of it.

#include "mfitt/common.hpp"
#include "mfitt/correlation.hpp"
#include "mfitt/deseason.hpp"
#include "mfitt/dist_fit.hpp"
#include "mfitt/mfdcca.hpp"
#include "mfitt/mfdfa.hpp"
#include "mfitt/rng.hpp"
#include "mfitt/series_core.hpp"
#include "mfitt/series_io.hpp"
#include "mfitt/synth.hpp"
#include "mfitt/tick_ingest.hpp"

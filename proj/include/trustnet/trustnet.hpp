#pragma once

// Trust management under uncertainty for clustered networks: uncertainty
// taxonomy and quantification (Monte Carlo + Mamdani), weighted trust
// ratings, a replicated trust ledger with coordinator election, and a
// deterministic round-based simulator over a DAG of peer-to-peer clusters.

#include "trustnet/dag.hpp"
#include "trustnet/error.hpp"
#include "trustnet/fuzzy.hpp"
#include "trustnet/ledger.hpp"
#include "trustnet/montecarlo.hpp"
#include "trustnet/report.hpp"
#include "trustnet/rng.hpp"
#include "trustnet/scenario.hpp"
#include "trustnet/sim.hpp"
#include "trustnet/trust.hpp"
#include "trustnet/uncertainty.hpp"

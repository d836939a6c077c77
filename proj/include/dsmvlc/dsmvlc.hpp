#pragma once

// Differential spatial modulation over indoor visible-light MIMO channels:
// codec, Lambertian channel model, three block detectors, flop accounting,
// and the Monte Carlo BER harness.

#include "dsmvlc/bits.hpp"
#include "dsmvlc/channel.hpp"
#include "dsmvlc/constellation.hpp"
#include "dsmvlc/detector_common.hpp"
#include "dsmvlc/dsm_codec.hpp"
#include "dsmvlc/flops.hpp"
#include "dsmvlc/genetic_detector.hpp"
#include "dsmvlc/index_table.hpp"
#include "dsmvlc/matrix.hpp"
#include "dsmvlc/ml_detector.hpp"
#include "dsmvlc/op_counter.hpp"
#include "dsmvlc/rng.hpp"
#include "dsmvlc/simulation.hpp"
#include "dsmvlc/vc_omp_detector.hpp"

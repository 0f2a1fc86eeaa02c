#pragma once

// Umbrella header.
#include "tokencore/archive.hpp"
#include "tokencore/baselines.hpp"
#include "tokencore/corpus.hpp"
#include "tokencore/corpus_io.hpp"
#include "tokencore/errors.hpp"
#include "tokencore/hnsw.hpp"
#include "tokencore/matrix.hpp"
#include "tokencore/memory_bank.hpp"
#include "tokencore/metrics.hpp"
#include "tokencore/parallel.hpp"
#include "tokencore/pooling.hpp"
#include "tokencore/random.hpp"
#include "tokencore/report.hpp"
#include "tokencore/scoring.hpp"
#include "tokencore/synth.hpp"

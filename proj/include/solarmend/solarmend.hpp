#ifndef SOLARMEND_SOLARMEND_HPP
#define SOLARMEND_SOLARMEND_HPP

#include "solarmend/tensor.hpp"
#include "solarmend/autodiff.hpp"
#include "solarmend/graph.hpp"
#include "solarmend/random.hpp"
#include "solarmend/series.hpp"
#include "solarmend/csv_io.hpp"
#include "solarmend/baselines.hpp"
#include "solarmend/data_pipeline.hpp"
#include "solarmend/parallel.hpp"
#include "solarmend/stdgae.hpp"
#include "solarmend/evaluation.hpp"
#include "solarmend/config.hpp"
#include "solarmend/pipeline.hpp"

#endif  // SOLARMEND_SOLARMEND_HPP

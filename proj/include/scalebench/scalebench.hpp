#pragma once

#include "scalebench/error.hpp"

#include "scalebench/scaling/analysis.hpp"
#include "scalebench/scaling/bootstrap.hpp"
#include "scalebench/scaling/fit.hpp"
#include "scalebench/scaling/series.hpp"

#include "scalebench/compute/arch.hpp"
#include "scalebench/compute/budget.hpp"
#include "scalebench/compute/flops.hpp"

#include "scalebench/metrics/bleu.hpp"
#include "scalebench/metrics/edit_distance.hpp"
#include "scalebench/metrics/error_rate.hpp"
#include "scalebench/metrics/normalize.hpp"
#include "scalebench/metrics/unicode.hpp"

#include "scalebench/icl/prompt.hpp"
#include "scalebench/icl/store.hpp"
#include "scalebench/icl/wav.hpp"

#include "scalebench/ingest/fixture.hpp"
#include "scalebench/ingest/manifest.hpp"
#include "scalebench/ingest/report_file.hpp"
#include "scalebench/ingest/tables.hpp"

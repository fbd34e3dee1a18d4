#pragma once

// Umbrella header: paired-bootstrap comparison toolkit.

#include "bootcmp/compare.hpp"
#include "bootcmp/coverage.hpp"
#include "bootcmp/error.hpp"
#include "bootcmp/evaluation.hpp"
#include "bootcmp/interval.hpp"
#include "bootcmp/io.hpp"
#include "bootcmp/letters.hpp"
#include "bootcmp/metrics.hpp"
#include "bootcmp/normal.hpp"
#include "bootcmp/population.hpp"
#include "bootcmp/quantile.hpp"
#include "bootcmp/report.hpp"
#include "bootcmp/resampling.hpp"
#include "bootcmp/rng.hpp"
#include "bootcmp/sigtest.hpp"
#include "bootcmp/version.hpp"

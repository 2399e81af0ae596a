#pragma once

#include "profbench/adversarial.hpp"
#include "profbench/error.hpp"
#include "profbench/ingest.hpp"
#include "profbench/nested.hpp"
#include "profbench/profile_curve.hpp"
#include "profbench/ratios.hpp"
#include "profbench/report.hpp"
#include "profbench/timing_matrix.hpp"

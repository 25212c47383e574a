#pragma once

#include <schedsim/algo/policies.hpp>
#include <schedsim/core/engine.hpp>
#include <schedsim/core/scheduler.hpp>
#include <schedsim/core/types.hpp>
#include <schedsim/exp/presets.hpp>
#include <schedsim/exp/runner.hpp>
#include <schedsim/gen/trace.hpp>
#include <schedsim/gen/workload.hpp>
#include <schedsim/metrics/csv.hpp>
#include <schedsim/metrics/metrics.hpp>

namespace schedsim {

inline constexpr const char* kVersion = "0.1.0";

} // namespace schedsim

#pragma once

#include <schedsim/algo/baselines.hpp>
#include <schedsim/algo/fsp.hpp>
#include <schedsim/algo/pri.hpp>
#include <schedsim/algo/srpt.hpp>
#include <schedsim/core/scheduler.hpp>

#include <memory>
#include <string>
#include <vector>

namespace schedsim::algo {

/// Names accepted by make_scheduler (pri:<reference> composes on top).
inline const std::vector<std::string>& policy_names() {
    static const std::vector<std::string> names = {
        "fifo", "ps",   "dps",     "las",      "srpt",    "srpte",    "srpte+ps",
        "srpte+las",    "fsp",     "fspe",     "fspe+ps", "fspe+las", "psbs",
    };
    return names;
}

/// @brief Instantiate a policy by its command-line name.
///
/// `pri:<reference>` wraps a live emulation of the named reference policy
/// (fifo, ps, dps or las) in the dominance construction.
inline std::unique_ptr<core::Scheduler>
make_scheduler(const std::string& name, core::HeapCounters* counters = nullptr) {
    if (name == "fifo") return std::make_unique<FifoScheduler>();
    if (name == "ps") return std::make_unique<PsScheduler>(false);
    if (name == "dps") return std::make_unique<PsScheduler>(true);
    if (name == "las") return std::make_unique<LasScheduler>();
    if (name == "srpt")
        return std::make_unique<SrptScheduler>(false, SrptScheduler::LateMode::None);
    if (name == "srpte")
        return std::make_unique<SrptScheduler>(true, SrptScheduler::LateMode::None);
    if (name == "srpte+ps")
        return std::make_unique<SrptScheduler>(true, SrptScheduler::LateMode::Ps);
    if (name == "srpte+las")
        return std::make_unique<SrptScheduler>(true, SrptScheduler::LateMode::Las);
    if (name == "fsp")
        return std::make_unique<FspScheduler>(false, false, LateDiscipline::Serial, counters);
    if (name == "fspe")
        return std::make_unique<FspScheduler>(true, false, LateDiscipline::Serial, counters);
    if (name == "fspe+ps")
        return std::make_unique<FspScheduler>(true, false, LateDiscipline::Ps, counters);
    if (name == "fspe+las")
        return std::make_unique<FspScheduler>(true, false, LateDiscipline::Las, counters);
    if (name == "psbs")
        return std::make_unique<FspScheduler>(true, true, LateDiscipline::Dps, counters);
    if (name.rfind("pri:", 0) == 0) {
        const std::string ref = name.substr(4);
        if (ref == "fifo") return std::make_unique<PriScheduler<FifoScheduler>>(FifoScheduler{});
        if (ref == "ps") return std::make_unique<PriScheduler<PsScheduler>>(PsScheduler{false});
        if (ref == "dps") return std::make_unique<PriScheduler<PsScheduler>>(PsScheduler{true});
        if (ref == "las") return std::make_unique<PriScheduler<LasScheduler>>(LasScheduler{});
        throw core::ValidationError("unknown pri reference policy: " + ref);
    }
    throw core::ValidationError("unknown scheduling policy: " + name);
}

} // namespace schedsim::algo

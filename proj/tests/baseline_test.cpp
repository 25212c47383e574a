#include "oracles.hpp"

#include <schedsim/algo/baselines.hpp>
#include <schedsim/algo/policies.hpp>
#include <schedsim/algo/srpt.hpp>
#include <schedsim/core/engine.hpp>
#include <schedsim/metrics/metrics.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <vector>

using namespace schedsim;
using core::Allocation;
using core::Job;

namespace {

Job make_job(core::JobId id, double arrival, double size, double est = -1.0,
             double weight = 1.0) {
    return Job{id, arrival, size, est < 0.0 ? size : est, weight};
}

// allocation snapshot right after the last event at or before `when`
class AllocationLog {
public:
    void operator()(double t, const Allocation& alloc) { log_.emplace_back(t, alloc); }

    [[nodiscard]] const Allocation& at(double when) const {
        const Allocation* best = &empty_;
        for (const auto& [t, alloc] : log_)
            if (t <= when) best = &alloc;
        return *best;
    }

private:
    std::vector<std::pair<double, Allocation>> log_;
    Allocation empty_;
};

} // namespace

// ============================================================
// FIFO
// ============================================================

TEST(Fifo, ServesInArrivalOrderWithoutPreemption) {
    const std::vector<Job> jobs{make_job(0, 0.0, 1.0), make_job(1, 0.5, 1.0)};
    auto records = oracles::run_policy(jobs, "fifo");
    EXPECT_NEAR(records[0].completion, 1.0, 1e-12);
    EXPECT_NEAR(records[1].completion, 2.0, 1e-12);
    EXPECT_NEAR(metrics::mst(records), 1.25, 1e-12);  // sojourns 1 and 1.5
}

// ============================================================
// PS / DPS allocations
// ============================================================

TEST(Ps, SharesEqually) {
    algo::PsScheduler ps(false);
    ps.on_arrival(0.0, make_job(0, 0.0, 2.0));
    EXPECT_DOUBLE_EQ(ps.current_allocation().share_of(0), 1.0);
    ps.on_arrival(0.0, make_job(1, 0.0, 2.0));
    EXPECT_DOUBLE_EQ(ps.current_allocation().share_of(0), 0.5);
    EXPECT_DOUBLE_EQ(ps.current_allocation().share_of(1), 0.5);
}

TEST(Ps, TwoEqualSimultaneousJobsFinishTogether) {
    const std::vector<Job> jobs{make_job(0, 0.0, 2.0), make_job(1, 0.0, 2.0)};
    auto records = oracles::run_policy(jobs, "ps");
    EXPECT_NEAR(records[0].completion, 4.0, 1e-9);
    EXPECT_NEAR(records[1].completion, 4.0, 1e-9);
}

TEST(Dps, SharesProportionalToWeight) {
    {
        algo::PsScheduler dps(true);
        dps.on_arrival(0.0, make_job(0, 0.0, 1.0, 1.0, 1.0));
        dps.on_arrival(0.0, make_job(1, 0.0, 1.0, 1.0, 1.0));
        EXPECT_DOUBLE_EQ(dps.current_allocation().share_of(0), 0.5);  // reduces to PS
    }
    {
        algo::PsScheduler dps(true);
        dps.on_arrival(0.0, make_job(0, 0.0, 1.0, 1.0, 2.0));
        dps.on_arrival(0.0, make_job(1, 0.0, 1.0, 1.0, 1.0));
        EXPECT_DOUBLE_EQ(dps.current_allocation().share_of(0), 2.0 / 3.0);
        EXPECT_DOUBLE_EQ(dps.current_allocation().share_of(1), 1.0 / 3.0);
    }
    {
        // class 1 vs class 2 at beta = 2: weights 1 and 1/4
        algo::PsScheduler dps(true);
        dps.on_arrival(0.0, make_job(0, 0.0, 1.0, 1.0, 1.0));
        dps.on_arrival(0.0, make_job(1, 0.0, 1.0, 1.0, 0.25));
        EXPECT_DOUBLE_EQ(dps.current_allocation().share_of(0), 0.8);
        EXPECT_DOUBLE_EQ(dps.current_allocation().share_of(1), 0.2);
    }
}

TEST(Dps, SharesSumToOneAndStayProportional) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        oracles::InstanceOptions options;
        options.weighted = true;
        const auto jobs = oracles::random_instance(seed, options);
        auto scheduler = algo::make_scheduler("dps");
        std::map<core::JobId, double> weight_of;
        for (const auto& job : jobs) weight_of[job.id] = job.weight;
        auto observer = [&](double, const Allocation& alloc) {
            if (alloc.empty()) return;
            EXPECT_NEAR(alloc.total(), 1.0, 1e-9);
            double ratio = -1.0;
            for (const auto& [id, share] : alloc.shares) {
                const double r = share / weight_of[id];
                if (ratio < 0.0) ratio = r;
                EXPECT_NEAR(r, ratio, 1e-9 * ratio);
            }
        };
        core::run_simulation(jobs, *scheduler, nullptr, observer);
    }
}

// ============================================================
// LAS
// ============================================================

TEST(Las, NewArrivalPreemptsAndCatchesUp) {
    // B runs alone to attained 5; A arrives with attained 0, is served alone
    // until it reaches B's level, then they share equally
    const std::vector<Job> jobs{make_job(0, 0.0, 10.0), make_job(1, 5.0, 10.0)};
    AllocationLog log;
    auto scheduler = algo::make_scheduler("las");
    auto records = core::run_simulation(jobs, *scheduler, nullptr, std::ref(log));
    EXPECT_DOUBLE_EQ(log.at(7.0).share_of(1), 1.0);  // A catching up
    EXPECT_DOUBLE_EQ(log.at(7.0).share_of(0), 0.0);
    EXPECT_DOUBLE_EQ(log.at(12.0).share_of(0), 0.5);  // merged at t=10
    EXPECT_DOUBLE_EQ(log.at(12.0).share_of(1), 0.5);
    EXPECT_NEAR(records[0].completion, 20.0, 1e-9);
    EXPECT_NEAR(records[1].completion, 20.0, 1e-9);
}

TEST(Las, EqualAttainedBehavesLikePs) {
    const std::vector<Job> jobs{make_job(0, 0.0, 3.0), make_job(1, 1.0, 3.0)};
    // 0-1: job0 alone (attained 1); 1-2: job1 catches up; 2-6: half shares
    auto records = oracles::run_policy(jobs, "las");
    EXPECT_NEAR(records[0].completion, 6.0, 1e-9);
    EXPECT_NEAR(records[1].completion, 6.0, 1e-9);
}

TEST(Las, NeverServesAboveMinimumAttained) {
    for (std::uint64_t seed = 20; seed < 35; ++seed) {
        const auto jobs = oracles::random_instance(seed);
        auto scheduler = algo::make_scheduler("las");
        std::map<core::JobId, double> attained;
        std::map<core::JobId, const Job*> by_id;
        for (const auto& job : jobs) by_id[job.id] = &job;
        double last_t = 0.0;
        Allocation last_alloc;
        auto observer = [&](double t, const Allocation& alloc) {
            for (const auto& [id, share] : last_alloc.shares)
                attained[id] += share * (t - last_t);
            last_t = t;
            last_alloc = alloc;
            if (alloc.empty()) return;
            // minimum attained among jobs that are arrived and incomplete
            double min_attained = std::numeric_limits<double>::infinity();
            for (const auto& [id, job] : by_id) {
                if (job->arrival > t) continue;
                const double a = attained.count(id) ? attained.at(id) : 0.0;
                if (a < job->size - core::completion_epsilon(job->size))
                    min_attained = std::min(min_attained, a);
            }
            for (const auto& [id, share] : alloc.shares) {
                if (share > 0.0)
                    EXPECT_LE(attained[id], min_attained + 1e-6) << "seed " << seed;
            }
        };
        core::run_simulation(jobs, *scheduler, nullptr, observer);
    }
}

// ============================================================
// SRPTE and the late-job pathology
// ============================================================

TEST(Srpte, UnderestimatedJobMonopolizesUntilCompletion) {
    // J4 is late from t=2 on; J5 and J6 arrive later but must wait
    const std::vector<Job> jobs{make_job(0, 0.0, 10.0, 2.0), make_job(1, 3.0, 1.0, 1.0),
                                make_job(2, 4.0, 1.0, 1.0)};
    AllocationLog log;
    auto scheduler = algo::make_scheduler("srpte");
    auto records = core::run_simulation(jobs, *scheduler, nullptr, std::ref(log));
    EXPECT_NEAR(records[0].completion, 10.0, 1e-9);
    EXPECT_NEAR(records[1].completion, 11.0, 1e-9);
    EXPECT_NEAR(records[2].completion, 12.0, 1e-9);
    for (double t : {3.5, 5.0, 9.0}) {
        EXPECT_DOUBLE_EQ(log.at(t).share_of(0), 1.0) << "t=" << t;
    }
}

TEST(Srpte, ExactSizesHandTrace) {
    const std::vector<Job> jobs{make_job(0, 0.0, 10.0), make_job(1, 3.0, 5.0),
                                make_job(2, 5.0, 2.0)};
    auto records = oracles::run_policy(jobs, "srpte");
    EXPECT_NEAR(records[0].completion, 17.0, 1e-9);
    EXPECT_NEAR(records[1].completion, 10.0, 1e-9);
    EXPECT_NEAR(records[2].completion, 7.0, 1e-9);  // size-2 job served at t=5
}

TEST(Srpte, LateJobKeepsFullAllocationUntilCompletion) {
    for (std::uint64_t seed = 40; seed < 60; ++seed) {
        oracles::InstanceOptions options;
        options.sigma = 1.5;
        const auto jobs = oracles::random_instance(seed, options);
        std::map<core::JobId, const Job*> by_id;
        for (const auto& job : jobs) by_id[job.id] = &job;
        auto scheduler = algo::make_scheduler("srpte");
        std::map<core::JobId, double> attained;
        std::map<core::JobId, double> late_since;
        double last_t = 0.0;
        Allocation last_alloc;
        auto observer = [&](double t, const Allocation& alloc) {
            for (const auto& [id, share] : last_alloc.shares) {
                attained[id] += share * (t - last_t);
                const double est_rem = by_id[id]->estimated_size - attained[id];
                if (est_rem <= 0.0 && !late_since.count(id)) late_since[id] = t;
            }
            last_t = t;
            last_alloc = alloc;
            // a late pending job must hold the entire server
            for (const auto& [id, since] : late_since) {
                if (attained[id] < by_id[id]->size - 1e-9) {
                    ASSERT_FALSE(alloc.empty()) << "seed " << seed;
                    EXPECT_EQ(alloc.shares.front().first, id) << "seed " << seed;
                    EXPECT_DOUBLE_EQ(alloc.shares.front().second, 1.0) << "seed " << seed;
                }
            }
        };
        core::run_simulation(jobs, *scheduler, nullptr, observer);
    }
}

TEST(Srpte, ZeroErrorEqualsSrpt) {
    for (std::uint64_t seed = 60; seed < 90; ++seed) {
        const auto jobs = oracles::random_instance(seed);
        const auto a = oracles::completions_of(oracles::run_policy(jobs, "srpt"));
        const auto b = oracles::completions_of(oracles::run_policy(jobs, "srpte"));
        for (const auto& [id, completion] : a)
            EXPECT_NEAR(completion, b.at(id), oracles::close_tolerance(completion))
                << "seed " << seed;
    }
}

// ============================================================
// SRPTE+PS / SRPTE+LAS hybrids
// ============================================================

TEST(SrptePs, SharesAmongLateJobsPlusBestNonLate) {
    // A late at t=1, B late at t=5; from then on A, B and C share equally
    const std::vector<Job> jobs{make_job(0, 0.0, 10.0, 1.0), make_job(1, 0.5, 10.0, 2.0),
                                make_job(2, 2.0, 5.0, 5.0)};
    AllocationLog log;
    auto scheduler = algo::make_scheduler("srpte+ps");
    auto records = core::run_simulation(jobs, *scheduler, nullptr, std::ref(log));
    const Allocation& shares = log.at(5.2);
    EXPECT_NEAR(shares.share_of(0), 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(shares.share_of(1), 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(shares.share_of(2), 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(records[0].completion, 24.0, 1e-9);
    EXPECT_NEAR(records[1].completion, 25.0, 1e-9);
    EXPECT_NEAR(records[2].completion, 20.0, 1e-9);
}

TEST(SrptePs, SingleLateJobWithNoNonLateGetsEverything) {
    const std::vector<Job> jobs{make_job(0, 0.0, 10.0, 2.0)};
    AllocationLog log;
    auto scheduler = algo::make_scheduler("srpte+ps");
    auto records = core::run_simulation(jobs, *scheduler, nullptr, std::ref(log));
    EXPECT_DOUBLE_EQ(log.at(5.0).share_of(0), 1.0);
    EXPECT_NEAR(records[0].completion, 10.0, 1e-9);
}

TEST(SrpteLas, NonLateNewcomerRunsUntilCatchUp) {
    // L turns late at t=9 with attained 9; N arrives at 9.5 with attained 0
    // and full share until it completes, still below L's level
    const std::vector<Job> jobs{make_job(0, 0.0, 20.0, 9.0), make_job(1, 9.5, 5.0, 5.0)};
    AllocationLog log;
    auto scheduler = algo::make_scheduler("srpte+las");
    auto records = core::run_simulation(jobs, *scheduler, nullptr, std::ref(log));
    for (double t : {10.0, 12.0, 14.0}) {
        EXPECT_DOUBLE_EQ(log.at(t).share_of(1), 1.0) << "t=" << t;
        EXPECT_DOUBLE_EQ(log.at(t).share_of(0), 0.0) << "t=" << t;
    }
    EXPECT_NEAR(records[1].completion, 14.5, 1e-9);
    EXPECT_NEAR(records[0].completion, 25.0, 1e-9);
}

TEST(SrpteHybrids, ZeroErrorReducesToSrpt) {
    for (std::uint64_t seed = 200; seed < 230; ++seed) {
        const auto jobs = oracles::random_instance(seed);
        const auto srpt = oracles::completions_of(oracles::run_policy(jobs, "srpt"));
        for (const char* policy : {"srpte+ps", "srpte+las"}) {
            const auto other = oracles::completions_of(oracles::run_policy(jobs, policy));
            for (const auto& [id, completion] : srpt)
                EXPECT_NEAR(completion, other.at(id), oracles::close_tolerance(completion))
                    << policy << " seed " << seed;
        }
    }
}

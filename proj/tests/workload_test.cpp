#include <schedsim/gen/rng.hpp>
#include <schedsim/gen/trace.hpp>
#include <schedsim/gen/workload.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

using namespace schedsim;
using gen::Rng;
using gen::Stream;
using gen::WorkloadSpec;

namespace {

double mean(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

double coefficient_of_variation(const std::vector<double>& v) {
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1)) / m;
}

} // namespace

// ============================================================
// size generation
// ============================================================

TEST(Sizes, ExponentialCaseHasMeanOne) {
    WorkloadSpec spec;
    spec.shape = 1.0;  // Weibull(1) = Exp
    spec.njobs = 1000000;
    Rng rng(7, Stream::Sizes);
    const auto sizes = gen::gen_sizes(spec, rng);
    EXPECT_NEAR(mean(sizes), 1.0, 0.01);
}

TEST(Sizes, HeavyTailedCaseHasMeanOne) {
    // shape 0.25: scale is 1/Gamma(5) = 1/24; the tail is heavy, so allow 5%
    WorkloadSpec spec;
    spec.shape = 0.25;
    spec.njobs = 1000000;
    Rng rng(7, Stream::Sizes);
    const auto sizes = gen::gen_sizes(spec, rng);
    EXPECT_NEAR(mean(sizes), 1.0, 0.05);
}

TEST(Sizes, LightTailedCaseHasSmallVariation) {
    WorkloadSpec spec;
    spec.shape = 4.0;
    spec.njobs = 1000000;
    Rng rng(7, Stream::Sizes);
    const auto sizes = gen::gen_sizes(spec, rng);
    EXPECT_LT(coefficient_of_variation(sizes), 0.3);
}

TEST(Sizes, RejectsBadShape) {
    WorkloadSpec spec;
    spec.shape = 0.0;
    Rng rng(7, Stream::Sizes);
    EXPECT_THROW(gen::gen_sizes(spec, rng), core::ValidationError);
}

// ============================================================
// inter-arrival generation
// ============================================================

TEST(Arrivals, ExponentialArrivalsMatchLoad) {
    WorkloadSpec spec;
    spec.timeshape = 1.0;
    spec.load = 0.9;
    spec.njobs = 1000000;
    Rng rng(9, Stream::Arrivals);
    const auto gaps = gen::gen_inter_arrivals(spec, rng);
    EXPECT_NEAR(mean(gaps), 1.0 / 0.9, 0.01);
}

TEST(Arrivals, HalfLoadDoublesTheGap) {
    WorkloadSpec spec;
    spec.load = 0.5;
    spec.njobs = 200000;
    Rng rng(9, Stream::Arrivals);
    EXPECT_NEAR(mean(gen::gen_inter_arrivals(spec, rng)), 2.0, 0.02);
}

TEST(Arrivals, BurstyTimeshapeHasHighVariation) {
    WorkloadSpec spec;
    spec.timeshape = 0.125;
    spec.njobs = 200000;
    Rng rng(9, Stream::Arrivals);
    EXPECT_GT(coefficient_of_variation(gen::gen_inter_arrivals(spec, rng)), 5.0);
}

TEST(Arrivals, RejectsBadLoad) {
    WorkloadSpec spec;
    spec.load = 1.0;
    Rng rng(9, Stream::Arrivals);
    EXPECT_THROW(gen::gen_inter_arrivals(spec, rng), core::ValidationError);
}

// ============================================================
// estimation errors
// ============================================================

TEST(Errors, ZeroSigmaIsIdentity) {
    const std::vector<double> sizes{0.5, 1.0, 42.0};
    Rng rng(3, Stream::Errors);
    const auto estimates = gen::apply_error(sizes, 0.0, rng);
    for (std::size_t i = 0; i < sizes.size(); ++i)
        EXPECT_EQ(estimates[i], sizes[i]);  // bit-exact
}

TEST(Errors, MedianRelativeErrorFactors) {
    // median of max(X, 1/X) with X log-normal: about 1.40 at sigma 0.5 and
    // 14.85 at sigma 4
    const std::size_t n = 1000000;
    for (auto [sigma, expected, tol] : {std::tuple{0.5, 1.40, 0.02 * 1.40},
                                        std::tuple{4.0, 14.85, 0.03 * 14.85}}) {
        Rng rng(11, Stream::Errors);
        std::vector<double> factors;
        factors.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = std::exp(sigma * rng.normal());
            factors.push_back(std::max(x, 1.0 / x));
        }
        std::nth_element(factors.begin(), factors.begin() + n / 2, factors.end());
        EXPECT_NEAR(factors[n / 2], expected, tol) << "sigma " << sigma;
    }
}

// ============================================================
// weights
// ============================================================

TEST(Weights, BetaZeroMeansUniform) {
    Rng rng(5, Stream::Weights);
    const auto [classes, weights] = gen::assign_weights(1000, 0.0, 5, rng);
    for (double w : weights) EXPECT_DOUBLE_EQ(w, 1.0);
    EXPECT_EQ(*std::min_element(classes.begin(), classes.end()), 1);
    EXPECT_EQ(*std::max_element(classes.begin(), classes.end()), 5);
}

TEST(Weights, FollowInversePowerOfClass) {
    Rng rng(5, Stream::Weights);
    const auto [classes, weights] = gen::assign_weights(1000, 2.0, 5, rng);
    for (std::size_t i = 0; i < classes.size(); ++i) {
        EXPECT_DOUBLE_EQ(weights[i], 1.0 / (static_cast<double>(classes[i]) *
                                            static_cast<double>(classes[i])));
    }
    Rng rng2(5, Stream::Weights);
    const auto [classes2, weights2] = gen::assign_weights(1000, 1.0, 5, rng2);
    for (std::size_t i = 0; i < classes2.size(); ++i) {
        if (classes2[i] == 2) EXPECT_DOUBLE_EQ(weights2[i], 0.5);
    }
}

// ============================================================
// full workload assembly
// ============================================================

TEST(Workload, DeterministicAndStreamSplit) {
    WorkloadSpec spec;
    spec.njobs = 2000;
    spec.seed = 123;
    const auto a = gen::make_workload(spec);
    const auto b = gen::make_workload(spec);
    ASSERT_EQ(a.jobs.size(), b.jobs.size());
    for (std::size_t i = 0; i < a.jobs.size(); ++i) {
        EXPECT_EQ(a.jobs[i].arrival, b.jobs[i].arrival);
        EXPECT_EQ(a.jobs[i].size, b.jobs[i].size);
        EXPECT_EQ(a.jobs[i].estimated_size, b.jobs[i].estimated_size);
    }
    // changing sigma must not perturb sizes or arrivals
    WorkloadSpec other = spec;
    other.sigma = 2.0;
    const auto c = gen::make_workload(other);
    for (std::size_t i = 0; i < a.jobs.size(); ++i) {
        EXPECT_EQ(a.jobs[i].size, c.jobs[i].size);
        EXPECT_EQ(a.jobs[i].arrival, c.jobs[i].arrival);
        EXPECT_NE(a.jobs[i].estimated_size, c.jobs[i].estimated_size);
    }
}

TEST(Workload, EmpiricalLoadApproachesTarget) {
    WorkloadSpec spec;
    spec.njobs = 100000;
    spec.seed = 77;
    const auto workload = gen::make_workload(spec);
    double total = 0.0;
    for (const auto& job : workload.jobs) total += job.size;
    const double empirical = total / workload.jobs.back().arrival;
    EXPECT_NEAR(empirical, spec.load, 0.1 * spec.load);
}

TEST(Workload, SizeEstimateCorrelationShrinksWithSigma) {
    // smoke version of the pooled correlation checks
    auto correlation = [](double sigma) {
        WorkloadSpec spec;
        spec.njobs = 10000;
        spec.sigma = sigma;
        double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
        double n = 0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            spec.seed = seed;
            const auto workload = gen::make_workload(spec);
            for (const auto& job : workload.jobs) {
                sx += job.size;
                sy += job.estimated_size;
                sxx += job.size * job.size;
                syy += job.estimated_size * job.estimated_size;
                sxy += job.size * job.estimated_size;
                n += 1;
            }
        }
        const double cov = sxy / n - (sx / n) * (sy / n);
        const double vx = sxx / n - (sx / n) * (sx / n);
        const double vy = syy / n - (sy / n) * (sy / n);
        return cov / std::sqrt(vx * vy);
    };
    const double high = correlation(0.5);
    const double low = correlation(2.0);
    EXPECT_GT(high, 0.75);
    EXPECT_LT(low, 0.4);
    EXPECT_GT(high, low);
}

TEST(Workload, ParetoSizesArePositiveAndHeavy) {
    WorkloadSpec spec;
    spec.size_family = gen::SizeFamily::Pareto;
    spec.pareto_alpha = 2.0;
    spec.pareto_xm = 0.5;  // classic Pareto with mean 1 at alpha 2
    spec.njobs = 100000;
    const auto workload = gen::make_workload(spec);
    double total = 0.0;
    for (const auto& job : workload.jobs) {
        ASSERT_GT(job.size, 0.0);
        total += job.size;
    }
    // arrivals are scaled by the sample mean, so the realized load is close
    // to the target even though the distribution is not normalized
    const double empirical = total / workload.jobs.back().arrival;
    EXPECT_NEAR(empirical, spec.load, 0.15 * spec.load);
}

// ============================================================
// traces
// ============================================================

TEST(Trace, ParsesCommentsCommasAndWeights) {
    std::istringstream in("# a trace\n"
                          "0.0, 9.0\n"
                          "10.0 9.0 2.5   # inline comment\n"
                          "\n");
    const auto trace = gen::parse_trace(in);
    ASSERT_EQ(trace.rows.size(), 2u);
    EXPECT_TRUE(trace.sorted_on_load);
    EXPECT_DOUBLE_EQ(trace.rows[1].weight, 2.5);
}

TEST(Trace, NormalizationMatchesTargetLoad) {
    // speed = 18 / (10 * 0.9) = 2: sizes halve
    std::istringstream in("0 9\n10 9\n");
    const auto jobs = gen::normalize_trace(gen::parse_trace(in), 0.9);
    ASSERT_EQ(jobs.size(), 2u);
    EXPECT_DOUBLE_EQ(jobs[0].size, 4.5);
    EXPECT_DOUBLE_EQ(jobs[1].size, 4.5);
    EXPECT_EQ(jobs[0].id, 0u);
}

TEST(Trace, RejectsDegenerateInputs) {
    {
        std::istringstream in("0 9\n");
        EXPECT_THROW(gen::normalize_trace(gen::parse_trace(in), 0.9),
                     core::ValidationError);
    }
    {
        std::istringstream in("");
        EXPECT_THROW(gen::parse_trace(in), core::ValidationError);
    }
    {
        std::istringstream in("0 abc\n");
        EXPECT_THROW(gen::parse_trace(in), core::ValidationError);
    }
    {
        std::istringstream in("0 -1\n1 2\n");
        EXPECT_THROW(gen::parse_trace(in), core::ValidationError);
    }
}

TEST(Trace, UnsortedRowsAreSortedAndFlagged) {
    std::istringstream in("5 1\n0 2\n");
    const auto trace = gen::parse_trace(in);
    EXPECT_FALSE(trace.sorted_on_load);
    EXPECT_DOUBLE_EQ(trace.rows[0].arrival, 0.0);
}

TEST(Trace, WriteReadRoundTripIsExact) {
    std::vector<gen::TraceRow> rows{{0.12345678901234567, 3.3, 1.0},
                                    {7.0, 0.001953125, 0.25}};
    std::ostringstream out;
    gen::write_trace(out, rows);
    std::istringstream in(out.str());
    const auto trace = gen::parse_trace(in);
    ASSERT_EQ(trace.rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(trace.rows[i].arrival, rows[i].arrival);
        EXPECT_EQ(trace.rows[i].size, rows[i].size);
        EXPECT_EQ(trace.rows[i].weight, rows[i].weight);
    }
}

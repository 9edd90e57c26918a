#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <sstream>
#include <vector>

#include "binar/quality.hpp"

using binar::displacement_metrics;
using binar::distribution_report;
using binar::lehmer_rank;
using binar::lehmer_unrank;
using binar::ordered_triple_fraction;
using binar::pairwise_balance;
using binar::report_algorithm;
using binar::rng64;
using binar::run_distribution_report;

namespace {

template <typename T>
std::span<const T> view(const std::vector<T>& v) {
    return std::span<const T>(v);
}

// brute-force oracles, O(n^2)/O(n^3)
template <typename T>
double balance_brute(const std::vector<T>& a) {
    std::uint64_t le = 0, total = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            ++total;
            if (a[i] <= a[j]) ++le;
        }
    return static_cast<double>(le) / static_cast<double>(total);
}

template <typename T>
double triples_brute(const std::vector<T>& a) {
    std::uint64_t asc = 0, total = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            for (std::size_t k = j + 1; k < a.size(); ++k) {
                ++total;
                if (a[i] < a[j] && a[j] < a[k]) ++asc;
            }
    return static_cast<double>(asc) / static_cast<double>(total);
}

}  // namespace

TEST(PairwiseBalance, SortedAnchors) {
    const std::vector<int> asc{1, 2, 3, 4};
    EXPECT_EQ(1.0, pairwise_balance(view(asc)));
    const std::vector<int> desc{4, 3, 2, 1};
    EXPECT_EQ(0.0, pairwise_balance(view(desc)));
    const std::vector<int> mixed{2, 1, 4, 3};
    EXPECT_EQ(4.0 / 6.0, pairwise_balance(view(mixed)));
}

TEST(PairwiseBalance, UndefinedBelowTwoElements) {
    const std::vector<int> one{1};
    EXPECT_THROW(pairwise_balance(view(one)), std::invalid_argument);
}

TEST(PairwiseBalance, MatchesBruteForceWithTies) {
    rng64 rng(11);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 2 + rng.next() % 40;
        std::vector<std::uint32_t> a(n);
        for (auto& v : a) v = static_cast<std::uint32_t>(rng.next() % 10);  // many ties
        EXPECT_DOUBLE_EQ(balance_brute(a), pairwise_balance(view(a)));
    }
}

TEST(PairwiseBalance, ReverseComplementForDistinct) {
    rng64 rng(13);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 2 + rng.next() % 60;
        std::vector<std::uint64_t> a(n);
        for (std::size_t i = 0; i < n; ++i) a[i] = (rng.next() << 8) + i;  // distinct
        std::vector<std::uint64_t> r(a.rbegin(), a.rend());
        EXPECT_NEAR(1.0, pairwise_balance(view(a)) + pairwise_balance(view(r)), 1e-12);
    }
}

TEST(OrderedTriples, Anchors) {
    const std::vector<int> asc{1, 2, 3};
    EXPECT_EQ(1.0, ordered_triple_fraction(view(asc)));
    const std::vector<int> desc{3, 2, 1};
    EXPECT_EQ(0.0, ordered_triple_fraction(view(desc)));
    const std::vector<int> two{1, 2};
    EXPECT_THROW(ordered_triple_fraction(view(two)), std::invalid_argument);
}

TEST(OrderedTriples, MatchesBruteForce) {
    rng64 rng(17);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 3 + rng.next() % 40;
        std::vector<std::uint32_t> a(n);
        for (auto& v : a) v = static_cast<std::uint32_t>(rng.next() % 15);
        EXPECT_DOUBLE_EQ(triples_brute(a), ordered_triple_fraction(view(a)));
    }
}

TEST(OrderedTriples, UniformShuffleMeanIsOneSixth) {
    // Monte Carlo with the Fisher-Yates oracle; exchangeability forces 1/6
    double total = 0.0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        std::vector<int> p(10);
        std::iota(p.begin(), p.end(), 1);
        rng64 rng(11 + static_cast<std::uint64_t>(t));
        binar::fisher_yates(std::span<int>(p), rng);
        total += ordered_triple_fraction(view(p));
    }
    EXPECT_NEAR(1.0 / 6.0, total / trials, 0.01);
}

TEST(Displacement, IdentityAndReversal) {
    const std::vector<int> orig{1, 2, 3, 4};
    const auto id = displacement_metrics(view(orig), view(orig));
    EXPECT_EQ(4u, id.fixed_points);
    EXPECT_EQ(0.0, id.mean_displacement);

    const std::vector<int> rev{4, 3, 2, 1};
    const auto d = displacement_metrics(view(orig), view(rev));
    EXPECT_EQ(0u, d.fixed_points);
    EXPECT_EQ(2.0, d.mean_displacement);
}

TEST(Displacement, RejectsNonPermutationsAndDuplicates) {
    const std::vector<int> orig{1, 2, 3};
    const std::vector<int> other{1, 2, 4};
    EXPECT_THROW(displacement_metrics(view(orig), view(other)), std::invalid_argument);
    const std::vector<int> shorter{1, 2};
    EXPECT_THROW(displacement_metrics(view(orig), view(shorter)), std::invalid_argument);
    const std::vector<int> dupes{1, 2, 2};
    EXPECT_THROW(displacement_metrics(view(dupes), view(dupes)), std::invalid_argument);
}

TEST(Displacement, UniformShuffleExpectsOneFixedPoint) {
    std::uint64_t fixed = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        std::vector<int> p(100);
        std::iota(p.begin(), p.end(), 0);
        std::vector<int> orig = p;
        rng64 rng(13 + static_cast<std::uint64_t>(t));
        binar::fisher_yates(std::span<int>(p), rng);
        fixed += displacement_metrics(view(orig), view(p)).fixed_points;
    }
    EXPECT_NEAR(1.0, static_cast<double>(fixed) / trials, 0.1);
}

TEST(Lehmer, RankAnchors) {
    const std::vector<int> id{0, 1, 2, 3};
    EXPECT_EQ(0u, lehmer_rank(view(id)));
    const std::vector<int> rev{3, 2, 1, 0};
    EXPECT_EQ(23u, lehmer_rank(view(rev)));
}

TEST(Lehmer, RoundTripsAllPermutationsOfFour) {
    std::vector<unsigned> p{0, 1, 2, 3};
    std::sort(p.begin(), p.end());
    std::uint64_t expected_rank = 0;
    do {
        EXPECT_EQ(expected_rank, lehmer_rank(view(p)));
        EXPECT_EQ(p, lehmer_unrank(expected_rank, 4));
        ++expected_rank;
    } while (std::next_permutation(p.begin(), p.end()));
    EXPECT_EQ(24u, expected_rank);
}

TEST(Lehmer, RoundTripsRandomRanksUpToEight) {
    rng64 rng(23);
    for (unsigned n = 2; n <= 8; ++n) {
        for (int t = 0; t < 50; ++t) {
            const std::uint64_t rank = rng.next() % binar::factorial(n);
            const auto perm = lehmer_unrank(rank, n);
            EXPECT_EQ(rank, lehmer_rank(view(perm)));
        }
    }
    EXPECT_THROW(lehmer_unrank(24, 4), std::invalid_argument);
}

TEST(DistributionReport, RejectsOutOfRangeN) {
    EXPECT_THROW(run_distribution_report(report_algorithm::fisher_yates, 1, 10, 0),
                 std::invalid_argument);
    EXPECT_THROW(run_distribution_report(report_algorithm::fisher_yates, 9, 10, 0),
                 std::invalid_argument);
    EXPECT_THROW(run_distribution_report(report_algorithm::fisher_yates, 4, 0, 0),
                 std::invalid_argument);
}

TEST(DistributionReport, GoldenBinarReport) {
    // frozen from the reference implementation: n=4, 2000 trials, seed 3
    const distribution_report r =
        run_distribution_report(report_algorithm::binar_random_schedules, 4, 2000, 3);
    EXPECT_NEAR(4027.264, r.chi_square, 1e-6);
    EXPECT_EQ(261u, r.sorted_hits);
    EXPECT_EQ(278u, r.reverse_sorted_hits);
    EXPECT_NEAR(0.488833333, r.mean_pairwise_balance, 1e-6);
    EXPECT_NEAR(0.1895, r.mean_ordered_triple_fraction, 1e-6);
    EXPECT_NEAR(1.026, r.mean_fixed_points, 1e-6);
    EXPECT_NEAR(1.2605, r.mean_displacement, 1e-6);
    const std::vector<std::uint64_t> expected_hist{261, 0, 236, 0, 0, 0,   0, 224,
                                                   0,   0, 251, 0, 0, 239, 0, 0,
                                                   243, 0, 0,   0, 0, 268, 0, 278};
    EXPECT_EQ(expected_hist, r.histogram);
    std::uint64_t sum = 0;
    for (const auto c : r.histogram) sum += c;
    EXPECT_EQ(2000u, sum);
}

TEST(DistributionReport, FisherYatesCalibrationAtFive) {
    // 120 bins, 1e5 trials, seed 7; critical value is the chi-square 0.999
    // quantile at 119 dof; the exact statistic is frozen from the reference
    const distribution_report r =
        run_distribution_report(report_algorithm::fisher_yates, 5, 100000, 7);
    EXPECT_NEAR(105.3416, r.chi_square, 1e-4);
    EXPECT_LT(r.chi_square, 172.417682);
    std::uint64_t min_bin = r.histogram.front();
    for (const auto c : r.histogram) min_bin = std::min(min_bin, c);
    EXPECT_GT(min_bin, 0u);
}

TEST(DistributionReport, DeterministicPerSeed) {
    const auto a = run_distribution_report(report_algorithm::fisher_yates, 4, 500, 99);
    const auto b = run_distribution_report(report_algorithm::fisher_yates, 4, 500, 99);
    EXPECT_EQ(a.histogram, b.histogram);
    EXPECT_EQ(a.chi_square, b.chi_square);
}

TEST(DistributionReport, HistogramSumsToTrials) {
    for (unsigned n = 2; n <= 5; ++n) {
        const auto r =
            run_distribution_report(report_algorithm::binar_random_schedules, n, 300, n);
        std::uint64_t sum = 0;
        for (const auto c : r.histogram) sum += c;
        EXPECT_EQ(300u, sum);
        EXPECT_EQ(binar::factorial(n), r.histogram.size());
    }
}

TEST(RenderReports, MetricsDocument) {
    std::vector<std::uint64_t> asc(16);
    std::iota(asc.begin(), asc.end(), 0);
    const auto m = binar::analyze_permutation(view(asc), view(asc));
    std::ostringstream out;
    binar::render_metrics_report(out, asc.size(), m);
    EXPECT_EQ(
        "n: 16\n"
        "pairwise_balance: 1\n"
        "ordered_triple_fraction: 1\n"
        "fixed_points: 16\n"
        "mean_displacement: 0\n",
        out.str());
}

TEST(RenderReports, DistributionDocumentHasHistogramBlock) {
    const auto r = run_distribution_report(report_algorithm::fisher_yates, 3, 60, 5);
    std::ostringstream out;
    binar::render_distribution_report(out, r);
    const std::string text = out.str();
    EXPECT_NE(std::string::npos, text.find("n: 3\n"));
    EXPECT_NE(std::string::npos, text.find("trials: 60\n"));
    EXPECT_NE(std::string::npos, text.find("chi_square: "));
    EXPECT_NE(std::string::npos, text.find("sorted_hits: "));
    EXPECT_NE(std::string::npos, text.find("reverse_sorted_hits: "));
    EXPECT_NE(std::string::npos, text.find("pairwise_balance: "));
    EXPECT_NE(std::string::npos, text.find("ordered_triple_fraction: "));
    EXPECT_NE(std::string::npos, text.find("fixed_points: "));
    EXPECT_NE(std::string::npos, text.find("mean_displacement: "));
    EXPECT_NE(std::string::npos, text.find("histogram:\n0 "));
}

TEST(ReshuffleController, AcceptsWithinOneRoundOnWideBand) {
    std::vector<std::uint32_t> data(512);
    std::iota(data.begin(), data.end(), 0);
    binar::schedule_source source(32, 32, 7);
    const binar::reshuffle_thresholds wide{0.0, 1.0, 1.0, 4};
    const auto outcome =
        binar::reshuffle_controller(std::span<std::uint32_t>(data), source, wide);
    EXPECT_TRUE(outcome.converged);
    EXPECT_EQ(1u, outcome.rounds);
}

TEST(ReshuffleController, ImpossibleBandReportsNotConverged) {
    std::vector<std::uint32_t> data{0, 1, 2, 3};
    binar::schedule_source source(32, 32, 7);
    // band narrower than the n=4 metric granularity of 1/6
    const binar::reshuffle_thresholds impossible{0.49999, 0.50001, 1.0, 1};
    const auto outcome =
        binar::reshuffle_controller(std::span<std::uint32_t>(data), source, impossible);
    EXPECT_FALSE(outcome.converged);
    EXPECT_EQ(1u, outcome.rounds);
    std::vector<std::uint32_t> sorted = data;
    std::sort(sorted.begin(), sorted.end());
    const std::vector<std::uint32_t> expected{0, 1, 2, 3};
    EXPECT_EQ(expected, sorted);
}

TEST(ReshuffleController, ConvergesOnAscendingInputsAcrossSeeds) {
    // 50 schedule-source seeds over the ascending width-32 input
    const binar::reshuffle_thresholds th{0.4, 0.6, 0.3, 8};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        std::vector<std::uint32_t> data(10000);
        std::iota(data.begin(), data.end(), 0);
        binar::schedule_source source(32, 32, 1000 + seed);
        const auto outcome =
            binar::reshuffle_controller(std::span<std::uint32_t>(data), source, th);
        EXPECT_TRUE(outcome.converged) << "seed " << seed;
        EXPECT_LE(outcome.rounds, 8u);
        EXPECT_GE(outcome.pairwise_balance, 0.4);
        EXPECT_LE(outcome.pairwise_balance, 0.6);
    }
}

TEST(ReshuffleController, RejectsDegenerateInputs) {
    std::vector<std::uint32_t> two{0, 1};
    binar::schedule_source source(32, 32, 1);
    const binar::reshuffle_thresholds th{0.4, 0.6, 0.3, 0};
    EXPECT_THROW(binar::reshuffle_controller(std::span<std::uint32_t>(two), source, th),
                 std::invalid_argument);
    std::vector<std::uint32_t> data{0, 1, 2, 3};
    EXPECT_THROW(binar::reshuffle_controller(std::span<std::uint32_t>(data), source, th),
                 std::invalid_argument);
}

#include <gtest/gtest.h>

#include <random>

#include "support/oracles.hpp"
#include "tfssa/featsel.hpp"

using namespace tfssa;
using namespace tfssa::fs;
using tfssa::data::Dataset;

namespace {

const std::string kData = TFSSA_DATA_DIR;

std::vector<std::size_t> iota_vec(std::size_t n)
{
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return v;
}

Dataset wine()
{
    data::CsvSchema s;
    s.label_column = std::string("class");
    return data::normalize_minmax(data::load_csv(kData + "/wine.csv", s));
}

}  // namespace

TEST(Binarize, AllOnes)
{
    const auto m = binarize(std::vector<double>(6, 1.0));
    EXPECT_EQ(m.selected_count(), 6u);
}

TEST(Binarize, AllMinusOneRepairsToOneBit)
{
    const auto m = binarize(std::vector<double>(6, -1.0));
    EXPECT_EQ(m.selected_count(), 1u);
}

TEST(Binarize, HandMapping)
{
    const auto m = binarize(std::vector<double>{0.2, -0.4});
    EXPECT_EQ(m.key(), "10");
}

TEST(Binarize, RepairPicksLargest)
{
    const auto m = binarize(std::vector<double>{-0.9, -0.1, -0.5});
    EXPECT_EQ(m.key(), "010");
    EXPECT_THROW(binarize(std::vector<double>{}), std::invalid_argument);
}

TEST(Binarize, ThresholdRespected)
{
    EXPECT_EQ(binarize(std::vector<double>{0.5, 0.7, 0.61}, 0.8).key(), "011");
}

TEST(FeatureMask, BitsRoundTrip)
{
    const auto m = FeatureMask::from_bits(0b1011, 5);
    EXPECT_EQ(m.key(), "11010");
    EXPECT_EQ(m.selected(), (std::vector<std::size_t>{0, 1, 3}));
    EXPECT_EQ(FeatureMask::all(4).selected_count(), 4u);
}

TEST(Knn, SingleTrainingPoint)
{
    data::FeatureMatrix x(1, 2);
    x << 0.3, 0.4;
    const std::vector<int> y{2};
    EXPECT_EQ(knn_classify(x, y, std::vector<double>{9.0, -9.0}, 1), 2);
}

TEST(Knn, ExactMatchWins)
{
    data::FeatureMatrix x(3, 1);
    x << 0.0, 1.0, 2.0;
    const std::vector<int> y{0, 1, 0};
    EXPECT_EQ(knn_classify(x, y, std::vector<double>{1.0}, 1), 1);
}

TEST(Knn, SixPointToyAgainstBruteForce)
{
    data::FeatureMatrix x(6, 2);
    x << 0, 0, 0.1, 0.2, 0.3, 0.1, 1, 1, 0.9, 0.8, 0.7, 0.95;
    const std::vector<int> y{0, 0, 0, 1, 1, 1};
    std::vector<std::vector<double>> rows(6, std::vector<double>(2));
    for (int i = 0; i < 6; ++i) rows[i] = {x(i, 0), x(i, 1)};
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-0.2, 1.2);
    for (int trial = 0; trial < 500; ++trial) {
        const std::vector<double> q{u(gen), u(gen)};
        ASSERT_EQ(knn_classify(x, y, q, 3), oracle::brute_knn(rows, y, q, 3, iota_vec(6), {0, 1}));
    }
}

TEST(Knn, VoteTieDropsFarthest)
{
    // k = 4 splits 2-2; dropping the farthest leaves a 2-1 majority for class 1.
    data::FeatureMatrix x(4, 1);
    x << 0.1, 0.2, 0.3, 0.4;
    const std::vector<int> y{1, 0, 1, 0};
    EXPECT_EQ(knn_classify(x, y, std::vector<double>{0.0}, 4), 1);
}

TEST(Knn, RandomDatasetsMatchBruteForce)
{
    const Dataset ds = oracle::null_dataset(60, 5, 9);
    const auto rows = oracle::rows_of(ds);
    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::size_t> train, cols;
        for (std::size_t i = 1; i < 60; ++i)
            if (gen() % 3) train.push_back(i);
        for (std::size_t j = 0; j < 5; ++j)
            if (gen() % 2) cols.push_back(j);
        if (cols.empty()) cols.push_back(gen() % 5);
        const std::size_t k = 1 + 2 * (gen() % 4);
        ASSERT_EQ(knn_classify(ds.features, ds.labels, train, rows[0], cols, k),
                  oracle::brute_knn(rows, ds.labels, rows[0], k, train, cols));
    }
}

TEST(Knn, Errors)
{
    data::FeatureMatrix x(0, 2);
    EXPECT_THROW(knn_classify(x, std::vector<int>{}, std::vector<double>{0.0, 0.0}, 1), std::invalid_argument);
}

TEST(CvError, PerfectlySeparable)
{
    const Dataset ds = oracle::dominant_feature_dataset(100, 3, 1, 5);
    const auto folds = data::stratified_folds(ds, 10, 1);
    EXPECT_EQ(cv_error(ds, FeatureMask::from_bits(0b010, 3), folds, 5), 0.0);
}

TEST(CvError, PermutationNullNearHalf)
{
    const Dataset ds = oracle::null_dataset(2000, 4, 21);
    const auto folds = data::stratified_folds(ds, 10, 2);
    EXPECT_NEAR(cv_error(ds, FeatureMask::all(4), folds, 5), 0.5, 0.05);
}

TEST(CvError, MatchesBruteForceOnWine)
{
    const Dataset ds = wine();
    const auto folds = data::stratified_folds(ds, 10, 6);
    for (std::uint64_t bits : {0b1ull, 0b1000000000001ull, 0b0101010101010ull, 0x1FFFull}) {
        const auto mask = FeatureMask::from_bits(bits, 13);
        EXPECT_DOUBLE_EQ(cv_error(ds, mask, folds, 5), oracle::brute_cv_error(ds, mask.selected(), folds.fold, 10, 5));
    }
}

TEST(CvError, FoldsPartitionRows)
{
    const Dataset ds = wine();
    const auto folds = data::stratified_folds(ds, 10, 6);
    const auto out = cv_outcome(ds, FeatureMask::all(13), folds, 5);
    EXPECT_EQ(out.total, ds.rows());
    std::vector<int> seen(10, 0);
    for (auto f : folds.fold) ++seen.at(f);
    EXPECT_EQ(std::accumulate(seen.begin(), seen.end(), 0), static_cast<int>(ds.rows()));
}

TEST(CvError, SingleClassIsZero)
{
    Dataset ds = oracle::null_dataset(20, 2, 1);
    std::fill(ds.labels.begin(), ds.labels.end(), 0);
    ds.class_names = {"only"};
    const auto folds = data::stratified_folds(ds, 5, 1);
    EXPECT_EQ(cv_error(ds, FeatureMask::all(2), folds, 3), 0.0);
}

TEST(Fitness, Substitutions)
{
    EXPECT_NEAR(blend_fitness(0.1, 5, 10, 0.99, 0.01), 0.104, 1e-15);
    EXPECT_NEAR(blend_fitness(1.0, 10, 10, 0.99, 0.01), 1.0, 1e-15);
    EXPECT_NEAR(blend_fitness(0.0, 1, 100, 0.99, 0.01), 0.0001, 1e-18);
}

TEST(Fitness, PositionMatchesMaskFitness)
{
    const Dataset ds = wine();
    FsConfig cfg;
    const auto folds = data::stratified_folds(ds, 10, 3);
    const FsObjective obj(ds, cfg, folds);
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> p(13);
        for (auto& v : p) v = u(gen);
        const double f = fs_fitness(p, ds, cfg, folds);
        EXPECT_EQ(obj(p), f);
        EXPECT_GE(f, 0.0);
        EXPECT_LE(f, 1.0);
    }
}

TEST(FsObjective, CachesByMask)
{
    const Dataset ds = wine();
    const FsObjective obj(ds, FsConfig{}, data::stratified_folds(ds, 10, 1));
    std::vector<double> a(13, 0.9), b(13, 0.7);
    EXPECT_EQ(obj(a), obj(b));
    EXPECT_EQ(obj.cache_size(), 1u);
    EXPECT_EQ(obj.dim(), 13u);
    EXPECT_EQ(obj.lower()[0], -1.0);
}

TEST(FsConfig, Violations)
{
    FsConfig cfg;
    EXPECT_TRUE(cfg.violations().empty());
    cfg.lambda = 0.9;
    cfg.k_neighbors = 4;
    cfg.k_folds = 1;
    const auto v = cfg.violations();
    ASSERT_EQ(v.size(), 3u);
    EXPECT_NE(v[0].find("lambda + mu"), std::string::npos);
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(FsConfig, DefaultOptimizerSettings)
{
    const FsConfig cfg;
    EXPECT_EQ(cfg.optimizer.n_sparrows, 7u);
    EXPECT_EQ(cfg.optimizer.budget.max_iterations, 100u);
    EXPECT_EQ(cfg.k_neighbors, 5u);
    EXPECT_EQ(cfg.k_folds, 10u);
}

TEST(RunFeatureSelection, FindsDominantFeature)
{
    const Dataset ds = oracle::dominant_feature_dataset(200, 10, 3, 17);
    FsConfig cfg;
    cfg.fold_seed = 5;
    const auto folds = data::stratified_folds(ds, cfg.k_folds, *cfg.fold_seed);
    const auto optimum = oracle::exhaustive_masks(ds, cfg, folds);
    ASSERT_EQ(optimum.bits, 1ull << 3) << "oracle: the lone informative feature is the fitness optimum";
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const FsResult r = run_feature_selection(ds, cfg, seed);
        if (r.mask[3]) ++hits;
        EXPECT_GE(r.fitness, optimum.fitness);
    }
    EXPECT_GE(hits, 18);
}

TEST(RunFeatureSelection, Deterministic)
{
    const Dataset ds = wine();
    FsConfig cfg;
    cfg.optimizer.budget.max_iterations = 15;
    const FsResult a = run_feature_selection(ds, cfg, 8), b = run_feature_selection(ds, cfg, 8);
    EXPECT_EQ(a.mask, b.mask);
    EXPECT_EQ(a.record, b.record);
    EXPECT_EQ(a.fitness, b.fitness);
    EXPECT_EQ(a.accuracy, b.accuracy);
    EXPECT_EQ(a.fold_seed, b.fold_seed);
}

TEST(RunFeatureSelection, ReportedFieldsConsistent)
{
    const Dataset ds = wine();
    FsConfig cfg;
    cfg.optimizer.budget.max_iterations = 15;
    const FsResult r = run_feature_selection(ds, cfg, 2);
    EXPECT_EQ(r.n_selected, r.mask.selected_count());
    EXPECT_EQ(r.selected_names.size(), r.n_selected);
    EXPECT_EQ(r.total, ds.rows());
    EXPECT_DOUBLE_EQ(r.accuracy, static_cast<double>(r.correct) / static_cast<double>(r.total));
    EXPECT_NEAR(r.fitness, blend_fitness(1.0 - r.accuracy, r.n_selected, 13, 0.99, 0.01), 1e-12);
    EXPECT_EQ(r.fitness, r.record.best_fitness);
}

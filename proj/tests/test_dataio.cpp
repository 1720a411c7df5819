#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "support/oracles.hpp"
#include "tfssa/dataio.hpp"

using namespace tfssa::data;

namespace {

const std::string kData = TFSSA_DATA_DIR;

CsvSchema label(const std::string& name)
{
    CsvSchema s;
    s.label_column = name;
    return s;
}

bool has_op(const Dataset& ds, const std::string& op, const std::string& column = {})
{
    for (const auto& e : ds.transform_log)
        if (e.value("op", "") == op && (column.empty() || e.value("column", "") == column)) return true;
    return false;
}

}  // namespace

TEST(LoadCsv, WineShape)
{
    const Dataset ds = load_csv(kData + "/wine.csv", label("class"));
    EXPECT_EQ(ds.cols(), 13u);
    EXPECT_EQ(ds.rows(), 178u);
    EXPECT_EQ(ds.n_classes(), 3u);
    EXPECT_EQ(ds.feature_names.front(), "alcohol");
}

TEST(LoadCsv, ZooShape)
{
    const Dataset ds = load_csv(kData + "/zoo.csv", label("type"));
    EXPECT_EQ(ds.cols(), 16u);
    EXPECT_EQ(ds.rows(), 101u);
    EXPECT_EQ(ds.n_classes(), 7u);
}

TEST(LoadCsv, BreastCancerShape)
{
    const Dataset ds = load_csv(kData + "/breast_cancer_wisconsin.csv", label("class"));
    EXPECT_EQ(ds.cols(), 9u);
    EXPECT_EQ(ds.n_classes(), 2u);
    EXPECT_TRUE(ds.features.allFinite());
}

TEST(LoadCsv, MicroFixtureExact)
{
    oracle::TempDir dir("micro");
    oracle::write_text(dir / "m.csv", "a,colour,y\n1.5,red,yes\n-2,blue,no\n");
    const Dataset ds = load_csv((dir / "m.csv").string());
    FeatureMatrix want(2, 2);
    want << 1.5, 1.0, -2.0, 0.0;  // categories sorted: blue = 0, red = 1
    EXPECT_EQ(ds.features, want);
    EXPECT_EQ(ds.labels, (std::vector<int>{1, 0}));
    EXPECT_EQ(ds.class_names, (std::vector<std::string>{"no", "yes"}));
    EXPECT_TRUE(has_op(ds, "label_encode", "colour"));
}

TEST(LoadCsv, LabelByIndexAndDelimiter)
{
    oracle::TempDir dir("delim");
    oracle::write_text(dir / "s.csv", "y;a;b\n0;1;2\n1;3;4\n");
    CsvSchema s;
    s.label_column = 0L;
    s.delimiter = ';';
    const Dataset ds = load_csv((dir / "s.csv").string(), s);
    EXPECT_EQ(ds.feature_names, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(ds.features(1, 1), 4.0);
}

TEST(LoadCsv, MissingValuesImputedAndLogged)
{
    oracle::TempDir dir("miss");
    oracle::write_text(dir / "m.csv", "a,b,y\n1,x,0\n?,x,1\n5,,0\n3,z,1\n");
    const Dataset ds = load_csv((dir / "m.csv").string());
    EXPECT_EQ(ds.features(1, 0), 3.0);  // median of 1, 5, 3
    EXPECT_EQ(ds.features(2, 1), 0.0);  // mode "x"
    EXPECT_TRUE(has_op(ds, "impute_median", "a"));
    EXPECT_TRUE(has_op(ds, "impute_mode", "b"));
}

TEST(LoadCsv, QuotedFieldsWithDelimiters)
{
    oracle::TempDir dir("quote");
    oracle::write_text(dir / "q.csv", "a,name,y\n1,\"x, y\",0\n2,\"z \"\"q\"\"\",1\n");
    const Dataset ds = load_csv((dir / "q.csv").string());
    EXPECT_EQ(ds.rows(), 2u);
    EXPECT_EQ(ds.cols(), 2u);
}

TEST(LoadCsv, RaggedRowReportsLine)
{
    oracle::TempDir dir("ragged");
    oracle::write_text(dir / "r.csv", "a,b,y\n1,2,0\n3,4,1\n5,1\n");
    try {
        load_csv((dir / "r.csv").string());
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
    }
}

TEST(LoadCsv, MissingLabelReportsLine)
{
    oracle::TempDir dir("nolabel");
    oracle::write_text(dir / "l.csv", "a,y\n1,0\n2,\n3,1\n");
    try {
        load_csv((dir / "l.csv").string());
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(LoadCsv, AllMissingColumnNamed)
{
    oracle::TempDir dir("allmiss");
    oracle::write_text(dir / "a.csv", "a,ghost,y\n1,?,0\n2,NA,1\n");
    try {
        load_csv((dir / "a.csv").string());
        FAIL();
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos);
    }
}

TEST(LoadCsv, UnknownLabelColumnAndMissingFile)
{
    EXPECT_THROW(load_csv(kData + "/wine.csv", label("nope")), std::invalid_argument);
    EXPECT_THROW(load_csv(kData + "/absent.csv"), std::runtime_error);
}

TEST(LoadCsv, DropColumns)
{
    CsvSchema s = label("class");
    s.drop_columns = {"proline", "hue"};
    const Dataset ds = load_csv(kData + "/wine.csv", s);
    EXPECT_EQ(ds.cols(), 11u);
    EXPECT_EQ(std::count(ds.feature_names.begin(), ds.feature_names.end(), "hue"), 0);
}

TEST(Normalize, HandMapping)
{
    Dataset ds;
    ds.features.resize(3, 3);
    ds.features << 2, 5, 0.0, 4, 5, 0.25, 6, 5, 1.0;
    ds.labels = {0, 1, 0};
    ds.feature_names = {"a", "b", "c"};
    ds.class_names = {"p", "q"};
    const Dataset n = normalize_minmax(ds);
    EXPECT_EQ(n.features(0, 0), 0.0);
    EXPECT_EQ(n.features(1, 0), 0.5);
    EXPECT_EQ(n.features(2, 0), 1.0);
    EXPECT_EQ(n.features.col(1).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(n.features.col(2), ds.features.col(2));
    EXPECT_EQ(normalize_minmax(n).features, n.features);
}

TEST(Normalize, WineInUnitBox)
{
    const Dataset ds = normalize_minmax(load_csv(kData + "/wine.csv", label("class")));
    EXPECT_EQ(ds.features.minCoeff(), 0.0);
    EXPECT_EQ(ds.features.maxCoeff(), 1.0);
}

TEST(Covid, FixturePreprocessing)
{
    oracle::TempDir dir("covid");
    const auto path = dir / "covid.csv";
    const std::size_t n = oracle::write_covid_fixture(path, 200, 3);
    const Dataset ds = covid_preprocess(path.string());
    EXPECT_EQ(ds.rows(), n);
    EXPECT_EQ(ds.cols(), 15u);
    EXPECT_EQ(ds.feature_names, covid_feature_names());
    EXPECT_TRUE(ds.features.allFinite());
    EXPECT_TRUE(has_op(ds, "label_encode", "gender"));
    EXPECT_TRUE(has_op(ds, "date_to_day_offset", "sym_on"));
    EXPECT_TRUE(has_op(ds, "impute_median", "sym_on"));
    // Gender takes exactly two distinct codes.
    std::set<double> genders;
    for (Eigen::Index i = 0; i < ds.features.rows(); ++i) genders.insert(ds.features(i, 3));
    EXPECT_EQ(genders.size(), 2u);
}

TEST(Covid, DayOffsetsShareEpoch)
{
    oracle::TempDir dir("covid_dates");
    const auto path = dir / "c.csv";
    oracle::write_text(path,
                       "id,location,country,gender,age,sym_on,hosp_vis,vis_wuhan,from_wuhan,symptom1,symptom2,symptom3,"
                       "symptom4,symptom5,symptom6,result\n"
                       "1,Wuhan,China,male,66,1/20/2020,1/20/2020,1,0,fever,,,,,,1\n"
                       "2,Tokyo,Japan,female,30,1/18/2020,1/25/2020,0,0,cough,fever,,,,,0\n"
                       "3,Paris,France,male,41,NA,2/1/2020,0,1,,,,,,,unknown\n");
    const Dataset ds = covid_preprocess(path.string());
    ASSERT_EQ(ds.rows(), 2u);
    const auto sym = std::find(ds.feature_names.begin(), ds.feature_names.end(), "sym_on") - ds.feature_names.begin();
    const auto hosp = std::find(ds.feature_names.begin(), ds.feature_names.end(), "hosp_vis") - ds.feature_names.begin();
    EXPECT_EQ(ds.features(0, sym), ds.features(0, hosp));
    EXPECT_EQ(ds.features(1, hosp) - ds.features(1, sym), 7.0);
    EXPECT_EQ(ds.labels, (std::vector<int>{1, 0}));
}

TEST(Covid, MissingColumnNamed)
{
    oracle::TempDir dir("covid_bad");
    oracle::write_text(dir / "c.csv", "id,age,result\n1,30,1\n2,40,0\n");
    try {
        covid_preprocess((dir / "c.csv").string());
        FAIL();
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("location"), std::string::npos);
    }
}

TEST(Folds, BalancedTwoClassExact)
{
    std::vector<int> labels(100);
    for (std::size_t i = 0; i < 100; ++i) labels[i] = i < 50 ? 0 : 1;
    const auto fa = stratified_folds(labels, 10, 7);
    std::map<std::pair<std::size_t, int>, int> count;
    for (std::size_t i = 0; i < 100; ++i) ++count[{fa.fold[i], labels[i]}];
    for (std::size_t f = 0; f < 10; ++f) {
        EXPECT_EQ((count[{f, 0}]), 5);
        EXPECT_EQ((count[{f, 1}]), 5);
    }
    EXPECT_TRUE(fa.warnings.empty());
}

TEST(Folds, DeterministicPerSeed)
{
    const Dataset ds = load_csv(kData + "/wine.csv", label("class"));
    EXPECT_EQ(stratified_folds(ds, 10, 3).fold, stratified_folds(ds, 10, 3).fold);
    EXPECT_NE(stratified_folds(ds, 10, 3).fold, stratified_folds(ds, 10, 4).fold);
}

TEST(Folds, PerClassSpreadAtMostOneOnRandomInputs)
{
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 10 + gen() % 300, classes = 1 + gen() % 8, k = 2 + gen() % 11;
        std::vector<int> labels(n);
        for (auto& l : labels) l = static_cast<int>(gen() % classes);
        const auto fa = stratified_folds(labels, k, gen());
        ASSERT_EQ(fa.fold.size(), n);
        std::map<int, std::vector<int>> hist;
        std::vector<int> sizes(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            ASSERT_LT(fa.fold[i], k);
            auto& h = hist[labels[i]];
            h.resize(k, 0);
            ++h[fa.fold[i]];
            ++sizes[fa.fold[i]];
        }
        for (const auto& [cls, h] : hist)
            ASSERT_LE(*std::max_element(h.begin(), h.end()) - *std::min_element(h.begin(), h.end()), 1);
        ASSERT_LE(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()), 1);
    }
}

TEST(Folds, SmallClassWarns)
{
    const Dataset ds = load_csv(kData + "/zoo.csv", label("type"));
    const auto fa = stratified_folds(ds, 10, 1);
    EXPECT_FALSE(fa.warnings.empty());
    EXPECT_THROW(stratified_folds(ds, 1, 1), std::invalid_argument);
}

TEST(Header, ReadHeaderTrims)
{
    oracle::TempDir dir("hdr");
    oracle::write_text(dir / "h.csv", " a , b ,c\n1,2,3\n");
    EXPECT_EQ(read_header((dir / "h.csv").string()), (std::vector<std::string>{"a", "b", "c"}));
}

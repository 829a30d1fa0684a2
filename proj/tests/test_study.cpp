#include "lamvib/study.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace lamvib;
using lamvib::testing::elastic_interlayer;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

StudySettings quick_settings(std::vector<Method> methods, int elements = 16) {
  StudySettings s;
  s.elements = elements;
  s.methods = std::move(methods);
  s.threads = 2;
  return s;
}

std::filesystem::path temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("lamvib_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(GenerateMatrix, SixtyThreeCases) {
  const auto specs = generate_matrix();
  ASSERT_EQ(specs.size(), 63u);
  EXPECT_EQ(specs.front().id, "C001");
  EXPECT_EQ(specs.back().id, "C063");

  int fifty = 0;
  std::set<std::string> sections;
  for (const auto& s : specs) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f/%.2f/%.2f", s.section.h1 * 1e3,
                  s.section.h2 * 1e3, s.section.h3 * 1e3);
    sections.insert(buf);
    if (s.temperature == 50.0) {
      ++fifty;
      EXPECT_TRUE(s.material == "PVB_S" || s.material == "PVB_A");
    }
    EXPECT_DOUBLE_EQ(s.length, 1.0);
    EXPECT_DOUBLE_EQ(s.width, 0.1);
  }
  EXPECT_EQ(fifty, 18);  // 3 bcs x 3 sections x 2 materials
  EXPECT_EQ(sections.size(), 3u);
}

TEST(RunCase, ElasticSmokeCase) {
  StudySettings settings = quick_settings(
      {Method::Cnm, Method::Mse, Method::Det, Method::Eet}, 40);
  settings.database.interlayers["elastic"] = elastic_interlayer(5e6);

  CaseSpec spec;
  spec.id = "SMOKE";
  spec.bc = BoundaryCondition::SimplySupported;
  spec.material = "elastic";

  const CaseResult result = run_case(spec, settings);
  ASSERT_TRUE(result.case_failure.empty());
  for (int mode = 1; mode <= 3; ++mode) {
    const MethodCell* cnm = result.cell(Method::Cnm, mode);
    const MethodCell* mse = result.cell(Method::Mse, mode);
    const MethodCell* det = result.cell(Method::Det, mode);
    const MethodCell* eet = result.cell(Method::Eet, mode);
    for (const MethodCell* c : {cnm, mse, det, eet}) {
      ASSERT_TRUE(c && c->converged);
      EXPECT_DOUBLE_EQ(c->loss_factor, 0.0);
      EXPECT_FALSE(c->extrapolated);
    }
    // the two FE solvers coincide, as do the two closed forms
    EXPECT_NEAR(cnm->frequency_hz, mse->frequency_hz,
                1e-6 * cnm->frequency_hz);
    EXPECT_NEAR(det->frequency_hz, eet->frequency_hz,
                1e-10 * det->frequency_hz);
    // FE and closed form agree to the modelling level
    EXPECT_NEAR(cnm->frequency_hz, det->frequency_hz,
                0.02 * cnm->frequency_hz);
  }
}

TEST(RunCase, SimplySupportedDetEetIdentical) {
  const StudySettings settings = quick_settings({Method::Det, Method::Eet});
  CaseSpec spec;
  spec.bc = BoundaryCondition::SimplySupported;
  spec.material = "PVB_S";
  spec.temperature = 50.0;

  const CaseResult result = run_case(spec, settings);
  for (int mode = 1; mode <= 3; ++mode) {
    const MethodCell* det = result.cell(Method::Det, mode);
    const MethodCell* eet = result.cell(Method::Eet, mode);
    ASSERT_TRUE(det->converged && eet->converged);
    EXPECT_NEAR(det->frequency_hz, eet->frequency_hz,
                1e-10 * det->frequency_hz);
    EXPECT_NEAR(det->loss_factor, eet->loss_factor, 1e-10);
  }
}

TEST(RunCase, ExtrapolationFlag) {
  // a 100 m beam vibrates far below the validity band
  StudySettings settings = quick_settings({Method::Det});
  CaseSpec spec;
  spec.bc = BoundaryCondition::SimplySupported;
  spec.material = "PVB_M";
  spec.length = 100.0;

  const CaseResult result = run_case(spec, settings);
  const MethodCell* det = result.cell(Method::Det, 1);
  ASSERT_TRUE(det && det->converged);
  EXPECT_LT(det->frequency_hz, 1e-2);
  EXPECT_TRUE(det->extrapolated);
}

TEST(RunCase, UnknownMaterialRecordedAsFailure) {
  const StudySettings settings = quick_settings({Method::Det});
  CaseSpec spec;
  spec.material = "unknownium";
  const CaseResult result = run_case(spec, settings);
  EXPECT_FALSE(result.case_failure.empty());
  const MethodCell* det = result.cell(Method::Det, 1);
  ASSERT_TRUE(det);
  EXPECT_FALSE(det->converged);
}

TEST(Percentile, TypeSevenInterpolation) {
  const std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(percentile(v, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(percentile(v, 0.50), 2.5);
  EXPECT_DOUBLE_EQ(percentile(v, 0.75), 3.25);
  EXPECT_DOUBLE_EQ(percentile(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(percentile(v, 1.0), 4.0);
}

TEST(BoxStats, SingleElement) {
  const BoxStats b = box_stats({0.37});
  EXPECT_EQ(b.count, 1);
  EXPECT_DOUBLE_EQ(b.median, 0.37);
  EXPECT_DOUBLE_EQ(b.q25, 0.37);
  EXPECT_DOUBLE_EQ(b.q75, 0.37);
  EXPECT_TRUE(b.outliers.empty());
}

TEST(BoxStats, WhiskersAndOutliers) {
  std::vector<double> v = {1, 2, 3, 4, 5, 6, 7, 8, 100};
  const BoxStats b = box_stats(v);
  EXPECT_DOUBLE_EQ(b.median, 5.0);
  EXPECT_DOUBLE_EQ(b.q25, 3.0);
  EXPECT_DOUBLE_EQ(b.q75, 7.0);
  // fence at q75 + 1.5 iqr = 13: 100 is an outlier, whisker ends at 8
  EXPECT_DOUBLE_EQ(b.whisker_high, 8.0);
  EXPECT_DOUBLE_EQ(b.whisker_low, 1.0);
  ASSERT_EQ(b.outliers.size(), 1u);
  EXPECT_DOUBLE_EQ(b.outliers[0], 100.0);
}

TEST(Pearson, SelfAndAntiCorrelation) {
  const std::vector<double> x = {1.0, 2.5, 3.1, 7.2, 9.9};
  EXPECT_NEAR(pearson(x, x), 1.0, 1e-14);
  std::vector<double> nx;
  for (double v : x) nx.push_back(-2.0 * v + 1.0);
  EXPECT_NEAR(pearson(x, nx), -1.0, 1e-14);
  EXPECT_THROW(pearson(x, {1.0}), std::invalid_argument);
}

TEST(Summarize, CountsAndKeys) {
  StudySettings settings = quick_settings(
      {Method::Cnm, Method::Det, Method::Eet}, 12);
  std::vector<CaseSpec> specs;
  for (const char* mat : {"PVB_M", "SGP_M"}) {
    CaseSpec spec;
    spec.id = std::string("T_") + mat;
    spec.bc = BoundaryCondition::SimplySupported;
    spec.material = mat;
    specs.push_back(spec);
  }
  const auto results = run_matrix(specs, settings);
  const SummaryStats stats = summarize(results, {"bc"});

  ASSERT_TRUE(stats.error_boxes.count("det|err_f|mode1|all"));
  ASSERT_TRUE(stats.error_boxes.count("det|err_f|mode1|bc=ss"));
  EXPECT_EQ(stats.error_boxes.at("det|err_f|mode1|all").count, 2);
  ASSERT_TRUE(stats.pearson_vs_cnm.count("det|f|mode1"));
  EXPECT_NEAR(stats.pearson_vs_cnm.at("det|f|mode1"), 1.0, 1e-3);
}

TEST(Emit, DeterministicFiles) {
  StudySettings settings =
      quick_settings({Method::Cnm, Method::Det, Method::Eet}, 12);
  std::vector<CaseSpec> specs;
  {
    CaseSpec spec;
    spec.id = "C001";
    spec.bc = BoundaryCondition::SimplySupported;
    spec.material = "PVB_M";
    specs.push_back(spec);
    spec.id = "C002";
    spec.bc = BoundaryCondition::ClampedClamped;
    spec.material = "PVB_S";
    spec.temperature = 50.0;
    specs.push_back(spec);
  }

  const auto dir_a = temp_dir("emit_a");
  const auto dir_b = temp_dir("emit_b");

  const auto results_a = run_matrix(specs, settings);
  emit(results_a, summarize(results_a, settings.group_by), dir_a.string());
  const auto results_b = run_matrix(specs, settings);
  emit(results_b, summarize(results_b, settings.group_by), dir_b.string());

  for (const char* name : {"cases.csv", "summary.json", "qq_mode1.csv"}) {
    const std::string a = read_file((dir_a / name).string());
    const std::string b = read_file((dir_b / name).string());
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, b) << name;
  }

  const std::string csv = read_file((dir_a / "cases.csv").string());
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header,
            "case_id,bc,h1,h2,h3,material,temp_C,mode,method,f_hz,eta,iters,"
            "converged,err_f_vs_cnm,err_eta_vs_cnm,extrapolated_material");
  int rows = 0;
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty()) ++rows;
  }
  EXPECT_EQ(rows, 2 * 3 * 3);  // cases x modes x methods

  const std::string qq = read_file((dir_a / "qq_mode1.csv").string());
  std::istringstream qq_lines(qq);
  std::getline(qq_lines, header);
  rows = 0;
  while (std::getline(qq_lines, line)) {
    if (!line.empty()) ++rows;
  }
  EXPECT_EQ(rows, 2 * 2);  // cases x non-reference methods

  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
}

TEST(Config, LoadAndOverride) {
  const auto dir = temp_dir("config");
  const auto config_path = dir / "study.json";
  {
    std::ofstream out(config_path);
    out << R"({
      "elements": 33, "modes": 2, "tolerance": 1e-6, "max_iterations": 40,
      "methods": ["cnm", "det"], "threads": 3, "group_by": ["bc", "material"],
      "out": "outdir",
      "cases": [{"bc": "cc", "h1_mm": 12, "h2_mm": 1.0, "h3_mm": 8,
                 "material": "TPU_M", "temperature_c": 25.0,
                 "length_m": 2.0, "width_m": 0.2}]
    })";
  }
  const StudyConfig config = load_config(config_path.string());
  EXPECT_EQ(config.settings.elements, 33);
  EXPECT_EQ(config.settings.solver.modes, 2);
  EXPECT_DOUBLE_EQ(config.settings.solver.tolerance, 1e-6);
  EXPECT_EQ(config.settings.solver.max_iterations, 40);
  EXPECT_EQ(config.settings.threads, 3);
  EXPECT_EQ(config.settings.methods.size(), 2u);
  EXPECT_EQ(config.out_dir, "outdir");
  ASSERT_EQ(config.cases.size(), 1u);
  EXPECT_EQ(config.cases[0].bc, BoundaryCondition::ClampedClamped);
  EXPECT_DOUBLE_EQ(config.cases[0].section.h1, 12e-3);
  EXPECT_DOUBLE_EQ(config.cases[0].length, 2.0);
  EXPECT_DOUBLE_EQ(config.cases[0].width, 0.2);
  EXPECT_EQ(config.cases[0].material, "TPU_M");
  std::filesystem::remove_all(dir);
}

TEST(RunMatrix, DeterministicAcrossThreadCounts) {
  std::vector<CaseSpec> specs;
  CaseSpec spec;
  spec.id = "C001";
  spec.bc = BoundaryCondition::FreeFree;
  spec.material = "PVB_M";
  specs.push_back(spec);
  spec.id = "C002";
  spec.bc = BoundaryCondition::SimplySupported;
  spec.material = "SGP_M";
  specs.push_back(spec);

  StudySettings one = quick_settings({Method::Cnm, Method::Mse}, 12);
  one.threads = 1;
  StudySettings four = quick_settings({Method::Cnm, Method::Mse}, 12);
  four.threads = 4;

  const auto a = run_matrix(specs, one);
  const auto b = run_matrix(specs, four);
  for (size_t i = 0; i < specs.size(); ++i) {
    for (int mode = 1; mode <= 3; ++mode) {
      for (Method m : {Method::Cnm, Method::Mse}) {
        const MethodCell* ca = a[i].cell(m, mode);
        const MethodCell* cb = b[i].cell(m, mode);
        ASSERT_TRUE(ca && cb);
        EXPECT_EQ(ca->frequency_hz, cb->frequency_hz);
        EXPECT_EQ(ca->loss_factor, cb->loss_factor);
      }
    }
  }
}

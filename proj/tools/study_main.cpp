// Command-line front end: runs the laminated-glass modal comparison study,
// single cases, and material-database export.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lamvib/eigensolvers.hpp"
#include "lamvib/study.hpp"

namespace {

using namespace lamvib;

struct CommonOptions {
  int elements = 0;       // 0: keep config/default
  int modes = 0;
  double tolerance = 0.0;
  int max_iterations = 0;
  std::vector<std::string> methods;
  std::string materials_file;
  bool with_oracle = false;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--elements", opt.elements, "Elements per layer");
  cmd->add_option("--modes", opt.modes, "Number of elastic modes");
  cmd->add_option("--tol", opt.tolerance, "Solver tolerance");
  cmd->add_option("--max-iter", opt.max_iterations, "Iteration limit");
  cmd->add_option("--methods", opt.methods,
                  "Methods to run (cnm,mse,det,eet)")
      ->delimiter(',');
  cmd->add_option("--materials", opt.materials_file,
                  "Material database JSON (default: built-in)");
  cmd->add_flag("--oracle", opt.with_oracle,
                "Also run the dense fixed-point reference (small meshes)");
}

void apply_common(const CommonOptions& opt, StudySettings& settings) {
  if (opt.elements > 0) settings.elements = opt.elements;
  if (opt.modes > 0) settings.solver.modes = opt.modes;
  if (opt.tolerance > 0.0) settings.solver.tolerance = opt.tolerance;
  if (opt.max_iterations > 0) settings.solver.max_iterations = opt.max_iterations;
  if (!opt.methods.empty()) {
    settings.methods.clear();
    for (const auto& m : opt.methods) {
      settings.methods.push_back(method_from_string(m));
    }
  }
  if (opt.with_oracle) {
    settings.methods.push_back(Method::OracleFp);
  }
  if (!opt.materials_file.empty()) {
    std::ifstream in(opt.materials_file);
    if (!in) {
      throw std::runtime_error("cannot open materials file '" +
                               opt.materials_file + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    settings.database = MaterialDatabase::from_json(ss.str());
  }
}

CrossSection parse_section(const std::string& text, double width) {
  CrossSection s{};
  double h1 = 0.0, h2 = 0.0, h3 = 0.0;
  if (std::sscanf(text.c_str(), "%lf/%lf/%lf", &h1, &h2, &h3) != 3) {
    throw std::runtime_error("section must be 'h1/h2/h3' in mm, got '" + text +
                             "'");
  }
  s.h1 = h1 * 1e-3;
  s.h2 = h2 * 1e-3;
  s.h3 = h3 * 1e-3;
  s.b = width;
  return s;
}

void print_case(const CaseResult& result) {
  std::printf("case %s: %s %s %s @ %g C\n", result.spec.id.c_str(),
              to_string(result.spec.bc).c_str(),
              result.spec.material.c_str(),
              [&] {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%g/%g/%g mm",
                              result.spec.section.h1 * 1e3,
                              result.spec.section.h2 * 1e3,
                              result.spec.section.h3 * 1e3);
                return std::string(buf);
              }()
                  .c_str(),
              result.spec.temperature);
  if (!result.case_failure.empty()) {
    std::printf("  case failed: %s\n", result.case_failure.c_str());
    return;
  }
  std::printf("  %-8s %-4s %-14s %-12s %-6s %s\n", "method", "mode", "f [Hz]",
              "eta [-]", "iters", "status");
  for (const auto& [method, row] : result.cells) {
    for (int mode = 1; mode <= static_cast<int>(row.size()); ++mode) {
      const MethodCell& cell = row[mode - 1];
      if (cell.converged) {
        std::printf("  %-8s %-4d %-14.6f %-12.6g %-6d ok%s\n",
                    to_string(method).c_str(), mode, cell.frequency_hz,
                    cell.loss_factor, cell.iterations,
                    cell.extrapolated ? " (extrapolated)" : "");
      } else {
        std::printf("  %-8s %-4d %-14s %-12s %-6s %s\n",
                    to_string(method).c_str(), mode, "-", "-", "-",
                    cell.failure.c_str());
      }
    }
  }
}

int run_command(const std::string& config_path, const CommonOptions& common,
                const std::string& out_dir, int threads,
                const std::vector<std::string>& group_by) {
  StudyConfig config;
  if (!config_path.empty()) {
    config = load_config(config_path);
  }
  apply_common(common, config.settings);
  if (threads > 0) config.settings.threads = threads;
  if (!group_by.empty()) config.settings.group_by = group_by;
  if (!out_dir.empty()) config.out_dir = out_dir;

  std::vector<CaseSpec> cases =
      config.cases.empty() ? generate_matrix() : config.cases;

  std::printf("running %zu cases, %d elements/layer, %d modes, methods:",
              cases.size(), config.settings.elements,
              config.settings.solver.modes);
  for (Method m : config.settings.methods) {
    std::printf(" %s", to_string(m).c_str());
  }
  std::printf("\n");

  const auto results = run_matrix(cases, config.settings);
  const auto stats = summarize(results, config.settings.group_by);
  emit(results, stats, config.out_dir);

  int failures = 0;
  for (const auto& [method, count] : stats.failure_counts) failures += count;
  std::printf("wrote %s/cases.csv, summary.json, qq_mode1.csv (%d failed cells)\n",
              config.out_dir.c_str(), failures);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modal analysis of laminated glass beams: complex Newton "
               "eigensolver, modal strain energy, and effective-thickness "
               "methods"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run a batch study (default: the "
                                        "built-in 63-case matrix)");
  std::string config_path, out_dir;
  int threads = 0;
  std::vector<std::string> group_by;
  CommonOptions run_common;
  run->add_option("--config", config_path, "Study config JSON");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--threads", threads, "Worker threads (default: all cores)");
  run->add_option("--group-by", group_by,
                  "Summary grouping fields (bc,material,section,temp)")
      ->delimiter(',');
  add_common(run, run_common);

  // case
  auto* single = app.add_subcommand("case", "Run a single beam case");
  std::string bc_text = "ss", section_text = "10/0.76/10", material = "PVB_M";
  double temperature = 25.0, length = 1.0, width = 0.1;
  std::string dump_dir;
  CommonOptions case_common;
  single->add_option("--bc", bc_text, "Boundary condition (ss, ff, cc)");
  single->add_option("--section", section_text, "Thicknesses h1/h2/h3 [mm]");
  single->add_option("--material", material, "Interlayer material name");
  single->add_option("--temp", temperature, "Temperature [deg C]");
  single->add_option("--length", length, "Beam length [m]");
  single->add_option("--width", width, "Beam width [m]");
  single->add_option("--dump-matrices", dump_dir,
                     "Write constrained M/K0/Kc in coordinate-list form");
  add_common(single, case_common);

  // materials
  auto* materials = app.add_subcommand("materials",
                                       "Export the material database as JSON");
  std::string materials_out;
  materials->add_option("--out", materials_out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(run)) {
      return run_command(config_path, run_common, out_dir, threads, group_by);
    }
    if (app.got_subcommand(single)) {
      StudySettings settings;
      apply_common(case_common, settings);

      CaseSpec spec;
      spec.id = "C001";
      spec.bc = bc_from_string(bc_text);
      spec.width = width;
      spec.section = parse_section(section_text, width);
      spec.material = material;
      spec.temperature = temperature;
      spec.length = length;

      const CaseResult result = run_case(spec, settings);
      print_case(result);

      if (!dump_dir.empty()) {
        const LaminatedBeam beam = make_beam(spec, settings.database);
        const AssembledSystem sys =
            apply_bc(assemble(beam, settings.elements), beam.bc);
        std::filesystem::create_directories(dump_dir);
        for (const auto& [name, mat] :
             {std::pair<const char*, const SparseMatrixD*>{"M", &sys.mass},
              {"K0", &sys.elastic_stiffness},
              {"Kc", &sys.unit_interlayer}}) {
          std::ofstream out(dump_dir + "/" + name + ".txt");
          write_coordinate_list(*mat, out);
        }
        std::printf("wrote %s/M.txt, K0.txt, Kc.txt\n", dump_dir.c_str());
      }
      return 0;
    }
    if (app.got_subcommand(materials)) {
      StudySettings settings;
      const std::string text = settings.database.to_json();
      if (materials_out.empty()) {
        std::printf("%s\n", text.c_str());
      } else {
        std::ofstream out(materials_out);
        out << text << "\n";
        std::printf("wrote %s\n", materials_out.c_str());
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

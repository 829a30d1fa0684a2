#include "lamvib/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "lamvib/eigensolvers.hpp"
#include "lamvib/oracles.hpp"

namespace lamvib {

namespace {

constexpr double kOmegaBandLow = 2.0 * M_PI * 1e-2;
constexpr double kOmegaBandHigh = 2.0 * M_PI * 1e4;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string section_string(const CrossSection& s) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g/%g/%g", s.h1 * 1e3, s.h2 * 1e3,
                s.h3 * 1e3);
  return buf;
}

bool omega_outside_band(double frequency_hz, double loss_factor) {
  // |omega| = 2 pi f (1 + eta^2)^(1/4) from omega^2 = (2 pi f)^2 (1 + i eta)
  const double mag = 2.0 * M_PI * frequency_hz *
                     std::pow(1.0 + loss_factor * loss_factor, 0.25);
  return mag < kOmegaBandLow || mag > kOmegaBandHigh;
}

MethodCell make_failed(const std::string& reason) {
  MethodCell cell;
  cell.attempted = true;
  cell.converged = false;
  cell.failure = reason;
  return cell;
}

MethodCell make_ok(double f, double eta, int iterations, double residual) {
  MethodCell cell;
  cell.attempted = true;
  cell.converged = true;
  cell.frequency_hz = f;
  cell.loss_factor = eta;
  cell.iterations = iterations;
  cell.residual = residual;
  cell.extrapolated = omega_outside_band(f, eta);
  return cell;
}

}  // namespace

const MethodCell* CaseResult::cell(Method method, int mode) const {
  auto it = cells.find(method);
  if (it == cells.end()) return nullptr;
  if (mode < 1 || mode > static_cast<int>(it->second.size())) return nullptr;
  return &it->second[mode - 1];
}

std::vector<CaseSpec> generate_matrix() {
  const std::vector<BoundaryCondition> bcs = {
      BoundaryCondition::SimplySupported, BoundaryCondition::FreeFree,
      BoundaryCondition::ClampedClamped};
  const std::vector<std::array<double, 3>> sections_mm = {
      {10.0, 0.76, 10.0}, {15.0, 0.76, 5.0}, {10.0, 1.52, 10.0}};
  const std::vector<std::pair<std::string, double>> mat_temps = {
      {"SGP_M", 25.0}, {"TPU_M", 25.0}, {"PVB_M", 25.0}, {"PVB_S", 25.0},
      {"PVB_S", 50.0}, {"PVB_A", 25.0}, {"PVB_A", 50.0}};

  std::vector<CaseSpec> out;
  out.reserve(63);
  int index = 0;
  for (const auto& bc : bcs) {
    for (const auto& sec : sections_mm) {
      for (const auto& [mat, temp] : mat_temps) {
        CaseSpec spec;
        char id[16];
        std::snprintf(id, sizeof(id), "C%03d", ++index);
        spec.id = id;
        spec.bc = bc;
        spec.section = {sec[0] * 1e-3, sec[1] * 1e-3, sec[2] * 1e-3, 0.1};
        spec.material = mat;
        spec.temperature = temp;
        spec.length = 1.0;
        spec.width = 0.1;
        out.push_back(spec);
      }
    }
  }
  return out;
}

LaminatedBeam make_beam(const CaseSpec& spec, const MaterialDatabase& db) {
  LaminatedBeam beam;
  beam.length = spec.length;
  beam.section = spec.section;
  beam.section.b = spec.width;
  beam.glass1 = db.glass("glass");
  beam.glass3 = beam.glass1;
  beam.interlayer = db.interlayer(spec.material);
  beam.bc = spec.bc;
  beam.temperature = spec.temperature;
  return beam;
}

CaseResult run_case(const CaseSpec& spec, const StudySettings& settings) {
  CaseResult result;
  result.spec = spec;
  result.modes = settings.solver.modes;

  const bool wants_fe =
      std::count(settings.methods.begin(), settings.methods.end(),
                 Method::Cnm) ||
      std::count(settings.methods.begin(), settings.methods.end(),
                 Method::Mse) ||
      std::count(settings.methods.begin(), settings.methods.end(),
                 Method::OracleFp);

  LaminatedBeam beam;
  MaxwellChain chain;
  std::optional<AssembledSystem> constrained;
  std::vector<RealEigenpair> starts;
  try {
    beam = make_beam(spec, settings.database);
    chain = beam.interlayer.chain_at(beam.temperature);
    if (wants_fe) {
      const AssembledSystem sys = assemble(beam, settings.elements);
      constrained = apply_bc(sys, beam.bc);
      starts = real_modes(*constrained, settings.solver.modes,
                          settings.solver);
    }
  } catch (const std::exception& e) {
    result.case_failure = e.what();
    for (Method m : settings.methods) {
      result.cells[m] = std::vector<MethodCell>(
          settings.solver.modes, make_failed(result.case_failure));
    }
    return result;
  }

  for (Method method : settings.methods) {
    std::vector<MethodCell> row(settings.solver.modes);
    for (int mode = 1; mode <= settings.solver.modes; ++mode) {
      try {
        switch (method) {
          case Method::Cnm: {
            const ComplexEigenpair pair = newton_solve(
                *constrained, chain, starts[mode - 1], settings.solver);
            const FrequencyLoss fl = freq_and_loss(pair.omega_squared);
            row[mode - 1] = make_ok(fl.frequency_hz, fl.loss_factor,
                                    pair.iterations, pair.residual);
            break;
          }
          case Method::Mse: {
            const MseResult mse = mse_solve(*constrained, chain,
                                            starts[mode - 1], settings.solver);
            const double f = std::sqrt(mse.converged.omega_squared) /
                             (2.0 * M_PI);
            row[mode - 1] =
                make_ok(f, mse.loss_factor, mse.iterations, 0.0);
            break;
          }
          case Method::Det:
          case Method::Eet: {
            const ModalResult mr =
                effective_modal(beam, method, mode, settings.solver);
            row[mode - 1] = make_ok(mr.frequency_hz, mr.loss_factor,
                                    mr.iterations, mr.residual);
            break;
          }
          case Method::OracleFp: {
            const ComplexEigenpair pair = dense_fixed_point_eig(
                *constrained, chain, mode, settings.solver);
            const FrequencyLoss fl = freq_and_loss(pair.omega_squared);
            row[mode - 1] = make_ok(fl.frequency_hz, fl.loss_factor,
                                    pair.iterations, pair.residual);
            break;
          }
        }
      } catch (const std::exception& e) {
        row[mode - 1] = make_failed(e.what());
      }
    }
    result.cells[method] = std::move(row);
  }
  return result;
}

std::vector<CaseResult> run_matrix(const std::vector<CaseSpec>& specs,
                                   const StudySettings& settings) {
  std::vector<CaseResult> results(specs.size());
  std::atomic<size_t> next{0};

  int n_threads = settings.threads > 0
                      ? settings.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min<int>(n_threads,
                                        static_cast<int>(specs.size())));

  const auto worker = [&]() {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= specs.size()) break;
      results[i] = run_case(specs[i], settings);
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return results;
}

double percentile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) {
    throw std::invalid_argument("percentile of empty sample");
  }
  if (sorted.size() == 1) return sorted[0];
  const double h = p * (static_cast<double>(sorted.size()) - 1.0);
  const size_t lo = static_cast<size_t>(std::floor(h));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BoxStats box_stats(std::vector<double> values) {
  BoxStats out;
  if (values.empty()) return out;
  std::sort(values.begin(), values.end());
  out.count = static_cast<int>(values.size());
  out.q25 = percentile(values, 0.25);
  out.median = percentile(values, 0.50);
  out.q75 = percentile(values, 0.75);
  const double iqr = out.q75 - out.q25;
  const double lo_fence = out.q25 - 1.5 * iqr;
  const double hi_fence = out.q75 + 1.5 * iqr;
  out.whisker_low = out.median;
  out.whisker_high = out.median;
  bool any = false;
  for (double v : values) {
    if (v >= lo_fence && v <= hi_fence) {
      if (!any) {
        out.whisker_low = v;
        any = true;
      }
      out.whisker_high = v;
    } else {
      out.outliers.push_back(v);
    }
  }
  return out;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("pearson: need two samples of equal size >= 2");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

namespace {

std::string group_value(const CaseResult& r, const std::string& field) {
  if (field == "bc") return to_string(r.spec.bc);
  if (field == "material") return r.spec.material;
  if (field == "section") return section_string(r.spec.section);
  if (field == "temp") return format_double(r.spec.temperature);
  throw std::invalid_argument("unknown grouping field '" + field + "'");
}

}  // namespace

SummaryStats summarize(const std::vector<CaseResult>& results,
                       const std::vector<std::string>& group_by) {
  SummaryStats stats;

  std::map<std::string, std::vector<double>> box_samples;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>>
      qq_samples;

  for (const auto& r : results) {
    for (const auto& [method, row] : r.cells) {
      for (int mode = 1; mode <= static_cast<int>(row.size()); ++mode) {
        const MethodCell& cell = row[mode - 1];
        if (cell.attempted && !cell.converged) {
          stats.failure_counts[to_string(method)] += 1;
        }
        if (method == Method::Cnm) continue;
        const MethodCell* ref = r.cell(Method::Cnm, mode);
        if (!ref || !ref->converged || !cell.converged) continue;

        const double err_f =
            std::abs(cell.frequency_hz - ref->frequency_hz) /
            std::abs(ref->frequency_hz);
        const double err_eta =
            std::abs(cell.loss_factor - ref->loss_factor) /
            std::abs(ref->loss_factor);

        std::vector<std::string> groups = {"all"};
        for (const auto& field : group_by) {
          groups.push_back(field + "=" + group_value(r, field));
        }
        for (const auto& g : groups) {
          const std::string base =
              to_string(method) + "|err_f|mode" + std::to_string(mode) + "|" + g;
          box_samples[base].push_back(err_f);
          const std::string base_eta = to_string(method) + "|err_eta|mode" +
                                       std::to_string(mode) + "|" + g;
          box_samples[base_eta].push_back(err_eta);
        }

        auto& [xs_f, ys_f] =
            qq_samples[to_string(method) + "|f|mode" + std::to_string(mode)];
        xs_f.push_back(cell.frequency_hz);
        ys_f.push_back(ref->frequency_hz);
        auto& [xs_e, ys_e] =
            qq_samples[to_string(method) + "|eta|mode" + std::to_string(mode)];
        xs_e.push_back(cell.loss_factor);
        ys_e.push_back(ref->loss_factor);
      }
    }
  }

  for (const auto& [key, samples] : box_samples) {
    stats.error_boxes[key] = box_stats(samples);
  }
  for (const auto& [key, xy] : qq_samples) {
    if (xy.first.size() >= 2) {
      stats.pearson_vs_cnm[key] = pearson(xy.first, xy.second);
    }
  }
  return stats;
}

namespace {

const std::vector<Method> kCsvMethodOrder = {
    Method::Cnm, Method::Mse, Method::Det, Method::Eet, Method::OracleFp};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

void emit(const std::vector<CaseResult>& results, const SummaryStats& stats,
          const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);

  // cases.csv
  std::ostringstream csv;
  csv << "case_id,bc,h1,h2,h3,material,temp_C,mode,method,f_hz,eta,iters,"
         "converged,err_f_vs_cnm,err_eta_vs_cnm,extrapolated_material\n";
  for (const auto& r : results) {
    for (int mode = 1; mode <= r.modes; ++mode) {
      for (Method method : kCsvMethodOrder) {
        const MethodCell* cell = r.cell(method, mode);
        if (!cell || !cell->attempted) continue;
        const MethodCell* ref = r.cell(Method::Cnm, mode);
        double err_f = std::numeric_limits<double>::quiet_NaN();
        double err_eta = std::numeric_limits<double>::quiet_NaN();
        if (method == Method::Cnm && cell->converged) {
          err_f = 0.0;
          err_eta = 0.0;
        } else if (ref && ref->converged && cell->converged) {
          err_f = std::abs(cell->frequency_hz - ref->frequency_hz) /
                  std::abs(ref->frequency_hz);
          err_eta = std::abs(cell->loss_factor - ref->loss_factor) /
                    std::abs(ref->loss_factor);
        }
        csv << r.spec.id << ',' << to_string(r.spec.bc) << ','
            << format_double(r.spec.section.h1 * 1e3) << ','
            << format_double(r.spec.section.h2 * 1e3) << ','
            << format_double(r.spec.section.h3 * 1e3) << ','
            << r.spec.material << ',' << format_double(r.spec.temperature)
            << ',' << mode << ',' << to_string(method) << ','
            << format_double(cell->frequency_hz) << ','
            << format_double(cell->loss_factor) << ',' << cell->iterations
            << ',' << (cell->converged ? 1 : 0) << ',' << format_double(err_f)
            << ',' << format_double(err_eta) << ','
            << (cell->extrapolated ? 1 : 0) << '\n';
      }
    }
  }
  write_file(out_dir + "/cases.csv", csv.str());

  // summary.json
  nlohmann::json j;
  for (const auto& [key, box] : stats.error_boxes) {
    nlohmann::json jb = {{"count", box.count},      {"median", box.median},
                         {"q25", box.q25},          {"q75", box.q75},
                         {"whisker_low", box.whisker_low},
                         {"whisker_high", box.whisker_high},
                         {"outliers", box.outliers}};
    j["error_boxes"][key] = jb;
  }
  for (const auto& [key, value] : stats.pearson_vs_cnm) {
    j["pearson_vs_cnm"][key] = value;
  }
  j["failure_counts"] = stats.failure_counts;
  write_file(out_dir + "/summary.json", j.dump(2) + "\n");

  // qq_mode1.csv: per-case method-vs-reference pairs for the first mode
  std::ostringstream qq;
  qq << "case_id,bc,material,temp_C,method,f_method,f_cnm,eta_method,eta_cnm\n";
  for (const auto& r : results) {
    const MethodCell* ref = r.cell(Method::Cnm, 1);
    if (!ref || !ref->converged) continue;
    for (Method method : kCsvMethodOrder) {
      if (method == Method::Cnm) continue;
      const MethodCell* cell = r.cell(method, 1);
      if (!cell || !cell->converged) continue;
      qq << r.spec.id << ',' << to_string(r.spec.bc) << ',' << r.spec.material
         << ',' << format_double(r.spec.temperature) << ','
         << to_string(method) << ',' << format_double(cell->frequency_hz)
         << ',' << format_double(ref->frequency_hz) << ','
         << format_double(cell->loss_factor) << ','
         << format_double(ref->loss_factor) << '\n';
    }
  }
  write_file(out_dir + "/qq_mode1.csv", qq.str());
}

StudyConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  nlohmann::json j;
  in >> j;

  StudyConfig config;
  config.settings.elements = j.value("elements", 200);
  config.settings.solver.modes = j.value("modes", 3);
  config.settings.solver.tolerance = j.value("tolerance", 1e-5);
  config.settings.solver.max_iterations = j.value("max_iterations", 50);
  config.settings.threads = j.value("threads", 0);
  config.out_dir = j.value("out", std::string("results"));
  if (j.contains("group_by")) {
    config.settings.group_by =
        j.at("group_by").get<std::vector<std::string>>();
  }
  if (j.contains("methods")) {
    config.settings.methods.clear();
    for (const auto& jm : j.at("methods")) {
      config.settings.methods.push_back(
          method_from_string(jm.get<std::string>()));
    }
  }
  if (j.contains("materials_file")) {
    std::ifstream mf(j.at("materials_file").get<std::string>());
    if (!mf) {
      throw std::runtime_error("cannot open materials file");
    }
    std::stringstream ss;
    ss << mf.rdbuf();
    config.settings.database = MaterialDatabase::from_json(ss.str());
  }
  if (j.contains("cases")) {
    int index = 0;
    for (const auto& jc : j.at("cases")) {
      CaseSpec spec;
      char id[16];
      std::snprintf(id, sizeof(id), "C%03d", ++index);
      spec.id = jc.value("id", std::string(id));
      spec.bc = bc_from_string(jc.at("bc").get<std::string>());
      spec.section.h1 = jc.at("h1_mm").get<double>() * 1e-3;
      spec.section.h2 = jc.at("h2_mm").get<double>() * 1e-3;
      spec.section.h3 = jc.at("h3_mm").get<double>() * 1e-3;
      spec.length = jc.value("length_m", 1.0);
      spec.width = jc.value("width_m", 0.1);
      spec.section.b = spec.width;
      spec.material = jc.at("material").get<std::string>();
      spec.temperature = jc.value("temperature_c", kDefaultDataTemperature);
      config.cases.push_back(spec);
    }
  }
  return config;
}

}  // namespace lamvib

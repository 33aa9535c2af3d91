// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#include "caffine_cli/cli.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <Eigen/SVD>

#include "CLI11.hpp"
#include "caffine/calabi.hpp"
#include "caffine/classify.hpp"
#include "caffine/error.hpp"
#include "caffine/geometry.hpp"
#include "caffine_cli/report.hpp"

namespace caffine::cli {
namespace {

constexpr double kVerifyTol = 1e-8;
constexpr double kClassifyTol = 1e-6;
constexpr double kDecomposeTol = 1e-6;
constexpr int kVerifyGrid = 5;
constexpr int kDecomposeGrid = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidInput, "cannot read file", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Report destination: the -o file when given, otherwise `out`.
void emit(const RunConfig& cfg, std::string text, std::ostream& out) {
  if (text.empty() || text.back() != '\n') text += '\n';
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw Error(ErrorCode::kInvalidInput, "cannot write output file", cfg.output);
  f << text;
}

ImmersionChart load_chart(const RunConfig& cfg) {
  if (cfg.chart.empty()) throw Error(ErrorCode::kInvalidInput, "--chart is required", "--chart");
  try {
    return chart_from_json(read_file(cfg.chart));
  } catch (const Error& e) {
    const bool bare = e.location().empty() || e.location() == cfg.chart;
    throw Error(e.code(), e.what(), bare ? cfg.chart : cfg.chart + ": " + e.location());
  }
}

std::vector<double> resolve_point(const RunConfig& cfg, const ImmersionChart& chart) {
  if (!cfg.point) return chart.center();
  const auto& p = *cfg.point;
  if (static_cast<int>(p.size()) != chart.n) {
    throw Error(ErrorCode::kInvalidInput,
                "point has " + std::to_string(p.size()) + " coordinates, chart dimension is " +
                    std::to_string(chart.n),
                "--point");
  }
  if (!chart.contains(p)) throw Error(ErrorCode::kInvalidInput, "point outside chart domain", "--point");
  return p;
}

double tol_or(const RunConfig& cfg, double fallback) {
  const double t = cfg.tol.value_or(fallback);
  if (!(t > 0.0)) throw Error(ErrorCode::kInvalidInput, "tol must be positive", "--tol");
  return t;
}

int grid_or(const RunConfig& cfg, int fallback) {
  const int g = cfg.grid.value_or(fallback);
  if (g < 2) throw Error(ErrorCode::kInvalidInput, "grid must be at least 2", "--grid");
  return g;
}

int cmd_invariants(const RunConfig& cfg, std::ostream& out) {
  const ImmersionChart chart = load_chart(cfg);
  const auto point = resolve_point(cfg, chart);
  const CentroaffinePointData data = invariants_at(chart, point);
  Json j;
  j["chart"] = chart.name;
  j.update(invariants_json(data, check_integrability(data)));
  emit(cfg, dump17(j), out);
  return 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const ImmersionChart chart = load_chart(cfg);
  GridSpec grid;
  grid.per_axis = grid_or(cfg, kVerifyGrid);
  const double tol = tol_or(cfg, kVerifyTol);
  const VerifyReport rep = verify_parallel(chart, grid, tol, cfg.jobs);
  emit(cfg, dump17(verify_json(chart, grid, rep)), out);
  if (rep.pass) return 0;
  // nothing could be evaluated at all: numerical failure rather than a mismatch
  if (rep.worst_point.empty()) return 3;
  return 1;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  const ImmersionChart chart = load_chart(cfg);
  const auto point = resolve_point(cfg, chart);
  ClassifyConfig cc;
  cc.seed = cfg.seed;
  cc.parallel_tol = tol_or(cfg, kClassifyTol);
  const ClassificationReport rep = classify_point(chart, point, cc);
  Json j = classification_json(rep);
  j["chart"] = chart.name;
  j["point"] = vec_json(point);
  j["seed"] = cfg.seed;
  bool mismatch = false;
  if (!cfg.expect.empty()) {
    mismatch = rep.label_text != cfg.expect;
    j["expected"] = cfg.expect;
    j["match"] = !mismatch;
  }
  emit(cfg, dump17(j), out);
  return mismatch ? 1 : 0;
}

int cmd_calabi_compose(const RunConfig& cfg, std::ostream& out) {
  CalabiSpec spec;
  if (!cfg.spec.empty()) {
    const std::string base = std::filesystem::path(cfg.spec).parent_path().string();
    spec = calabi_spec_from_json(read_file(cfg.spec), base.empty() ? "." : base);
  } else {
    if (cfg.left.empty() || !cfg.lambda) {
      throw Error(ErrorCode::kInvalidInput, "either --spec or --left with --lambda is required",
                  "calabi-compose");
    }
    spec.lambda = *cfg.lambda;
    spec.left = chart_from_json(read_file(cfg.left));
    if (!cfg.right.empty()) {
      spec.right = chart_from_json(read_file(cfg.right));
    } else if (cfg.factor_point) {
      spec.point = *cfg.factor_point;
    }
  }
  emit(cfg, chart_to_json(compose(spec)), out);
  return 0;
}

// Largest singular value ratio beyond the expected rank: 0 for an exact fit.
struct SpanFit {
  int rank = 0;
  double residual = 0.0;
  Mat basis;  // orthonormal, first `rank` left singular vectors
};

SpanFit fit_span(const std::vector<Vec>& cols, int rank) {
  SpanFit fit;
  fit.rank = rank;
  if (cols.empty()) return fit;
  Mat m(cols.front().size(), static_cast<Eigen::Index>(cols.size()));
  for (size_t i = 0; i < cols.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = cols[i];
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  const Vec s = svd.singularValues();
  const Eigen::Index r = std::min<Eigen::Index>(rank, s.size());
  fit.basis = svd.matrixU().leftCols(r);
  fit.residual = (s.size() > r && s(0) > 0.0) ? s(r) / s(0) : 0.0;
  return fit;
}

int cmd_calabi_decompose(const RunConfig& cfg, std::ostream& out) {
  const ImmersionChart chart = load_chart(cfg);
  const double tol = tol_or(cfg, kDecomposeTol);
  if (cfg.u_index && (*cfg.u_index < 0 || *cfg.u_index >= chart.n)) {
    throw Error(ErrorCode::kInvalidInput, "u index out of range", "--u-index");
  }
  std::vector<std::vector<double>> points;
  if (cfg.point) {
    points.push_back(resolve_point(cfg, chart));
  } else {
    GridSpec grid;
    grid.per_axis = grid_or(cfg, kDecomposeGrid);
    points = grid_points(chart, grid);
  }
  const int axis = cfg.u_index.value_or(0);

  struct Row {
    std::optional<CalabiStructure> s;
    CalabiSplit split;
    std::string error;
  };
  std::vector<Row> rows(points.size());
  parallel_for(static_cast<int>(points.size()), cfg.jobs, [&](int i) {
    try {
      const CentroaffinePointData d = invariants_at(chart, points[i]);
      DetectOptions opt;
      opt.reference = Vec::Unit(chart.n, axis);
      rows[i].s = detect_calabi_direction(d.h, d.K, d.epsilon, opt);
      if (rows[i].s) {
        const double u = cfg.u_index ? points[i][*cfg.u_index] : 0.0;
        rows[i].split = decompose_pointwise(chart, points[i], *rows[i].s, u);
      }
    } catch (const Error& e) {
      rows[i].error = std::string(error_code_name(e.code())) + ": " + e.what();
    }
  });

  Json j;
  j["chart"] = chart.name;
  j["n"] = chart.n;
  j["tol"] = tol;
  Json pts = Json::array();
  std::vector<Vec> psi1, psi2;
  bool all_found = true;
  bool consistent = true;
  int d2 = -1, d3 = -1;
  bool point_factor = false;
  for (size_t i = 0; i < points.size(); ++i) {
    Json p;
    p["point"] = vec_json(points[i]);
    const Row& r = rows[i];
    if (!r.error.empty()) {
      p["found"] = false;
      p["message"] = r.error;
      all_found = false;
    } else if (!r.s) {
      p["found"] = false;
      all_found = false;
    } else {
      p["found"] = true;
      p["structure"] = calabi_structure_json(*r.s);
      p["psi1"] = vec_json(r.split.psi1);
      p["psi2"] = vec_json(r.split.psi2);
      if (d2 < 0) {
        d2 = r.s->d2_dim;
        d3 = r.s->d3_dim;
        point_factor = r.s->point_factor;
      } else if (d2 != r.s->d2_dim || d3 != r.s->d3_dim || point_factor != r.s->point_factor) {
        consistent = false;
      }
      psi1.push_back(r.split.psi1);
      psi2.push_back(r.split.psi2);
    }
    pts.push_back(p);
  }

  bool pass = all_found && consistent && !psi1.empty();
  Json summary;
  summary["found_all"] = all_found;
  summary["consistent"] = consistent;
  if (!psi1.empty()) {
    // psi1 spans a cone over the D2 factor, psi2 over D3 (a single ray for a point factor)
    const SpanFit f1 = fit_span(psi1, d2 + 1);
    const SpanFit f2 = fit_span(psi2, point_factor ? 1 : d3 + 1);
    summary["d2_dim"] = d2;
    summary["d3_dim"] = d3;
    summary["point_factor"] = point_factor;
    summary["psi1_rank"] = f1.rank;
    summary["psi1_fit_residual"] = f1.residual;
    summary["psi2_rank"] = f2.rank;
    summary["psi2_fit_residual"] = f2.residual;
    double separation = 0.0;
    const bool full = f1.basis.cols() + f2.basis.cols() == chart.n + 1;
    if (full) {
      Mat both(chart.n + 1, chart.n + 1);
      both << f1.basis, f2.basis;
      Eigen::JacobiSVD<Mat> svd(both);
      separation = svd.singularValues().minCoeff();
    }
    // smallest singular value of the joint basis; 0 when the spans overlap
    summary["separation"] = separation;
    const bool complementary = full && separation > tol;
    summary["complementary"] = complementary;
    pass = pass && complementary && f1.residual <= tol && f2.residual <= tol;
  }
  summary["pass"] = pass;
  j["summary"] = summary;
  j["points"] = pts;
  emit(cfg, dump17(j), out);
  return pass ? 0 : 1;
}

int cmd_catalog_list(const RunConfig& cfg, std::ostream& out) {
  Json j = Json::array();
  for (const auto& e : catalog_entries()) {
    j.push_back({{"id", e.id},
                 {"schema", e.schema},
                 {"defaults", e.defaults},
                 {"expected_label", e.expected_label},
                 {"reference", e.reference}});
  }
  emit(cfg, dump17(j), out);
  return 0;
}

int cmd_catalog_emit(const RunConfig& cfg, std::ostream& out) {
  if (cfg.catalog_id.empty()) throw Error(ErrorCode::kInvalidInput, "catalog id is required", "catalog-emit");
  emit(cfg, chart_to_json(catalog_emit(cfg.catalog_id, cfg.catalog_params)), out);
  return 0;
}

std::vector<double> parse_point(const std::string& text, const std::string& flag) {
  try {
    return parse_number_list(text);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidInput, e.what(), flag);
  }
}

int report_error(const RunConfig* cfg, const std::string& code, const std::string& message,
                 const std::string& location, int exit_code, std::ostream& out, std::ostream& err) {
  err << "caffine: " << code << ": " << message;
  if (!location.empty()) err << " (" << location << ")";
  err << "\n";
  const std::string text = dump17(error_json(code, message, location));
  if (cfg != nullptr && !cfg->output.empty()) {
    std::ofstream f(cfg->output, std::ios::binary);
    if (f) {
      f << text;
      return exit_code;
    }
  }
  out << text;
  return exit_code;
}

}  // namespace

ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  if (args.size() >= 2 && (args[0] == "catalog" || args[0] == "calabi")) {
    args[1] = args[0] + "-" + args[1];
    args.erase(args.begin());
  }

  RunConfig cfg;
  if (const char* env = std::getenv("CAFFINE_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || *end != '\0' || env[0] == '-') {
      ParseOutcome o;
      o.exit_code = report_error(nullptr, error_code_name(ErrorCode::kInvalidInput),
                                 "CAFFINE_SEED is not a non-negative integer", "CAFFINE_SEED", 2, out, err);
      return o;
    }
    cfg.seed = v;
  }

  CLI::App app{"Centroaffine hypersurfaces with parallel cubic form"};
  app.require_subcommand(1);
  std::string point_text, factor_point_text;
  std::vector<std::string> positional;

  auto add_common = [&](CLI::App* sub, bool chart, bool grid, bool point) {
    if (chart) sub->add_option("--chart", cfg.chart, "chart JSON file");
    if (grid) sub->add_option("--grid", cfg.grid, "grid points per axis");
    if (point) sub->add_option("--point", point_text, "comma separated coordinates");
    sub->add_option("--tol", cfg.tol, "tolerance");
    sub->add_option("--seed", cfg.seed, "random seed (default CAFFINE_SEED or 0)");
    sub->add_option("--jobs", cfg.jobs, "worker threads, 0 for all cores");
    sub->add_option("-o,--output", cfg.output, "output file");
  };
  add_common(app.add_subcommand("invariants", "invariants at a point"), true, false, true);
  add_common(app.add_subcommand("verify", "parallel cubic form check on a grid"), true, true, false);
  auto* cls = app.add_subcommand("classify", "pointwise classification");
  add_common(cls, true, false, true);
  cls->add_option("--expect", cfg.expect, "expected label; exit 1 on mismatch");
  auto* comp = app.add_subcommand("calabi-compose", "Calabi product chart");
  add_common(comp, false, false, false);
  comp->add_option("--spec", cfg.spec, "composition spec JSON");
  comp->add_option("--left", cfg.left, "left factor chart");
  comp->add_option("--right", cfg.right, "right factor chart");
  comp->add_option("--lambda", cfg.lambda, "exponent lambda");
  comp->add_option("--factor-point", factor_point_text, "point factor coordinates");
  auto* dec = app.add_subcommand("calabi-decompose", "recover Calabi factors");
  add_common(dec, true, true, true);
  dec->add_option("--u-index", cfg.u_index, "coordinate index of the product direction");
  add_common(app.add_subcommand("catalog-list", "list catalog entries"), false, false, false);
  auto* em = app.add_subcommand("catalog-emit", "write a catalog chart");
  add_common(em, false, false, false);
  em->add_option("args", positional, "<id> [key=value ...]");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  ParseOutcome outcome;
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return outcome;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return outcome;
  } catch (const CLI::ParseError& e) {
    outcome.exit_code = report_error(nullptr, error_code_name(ErrorCode::kInvalidInput), e.what(), "argv", 2,
                                     out, err);
    return outcome;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (!point_text.empty()) cfg.point = parse_point(point_text, "--point");
    if (!factor_point_text.empty()) cfg.factor_point = parse_point(factor_point_text, "--factor-point");
    if (!positional.empty()) {
      cfg.catalog_id = positional.front();
      for (size_t i = 1; i < positional.size(); ++i) {
        const auto eq = positional[i].find('=');
        if (eq == std::string::npos || eq == 0) {
          throw Error(ErrorCode::kInvalidInput, "expected key=value, got '" + positional[i] + "'",
                      "catalog-emit");
        }
        cfg.catalog_params[positional[i].substr(0, eq)] = positional[i].substr(eq + 1);
      }
    }
    if (cfg.jobs < 0) throw Error(ErrorCode::kInvalidInput, "jobs must be non-negative", "--jobs");
  } catch (const Error& e) {
    outcome.exit_code = report_error(&cfg, error_code_name(e.code()), e.what(), e.location(), 2, out, err);
    return outcome;
  }
  outcome.config = cfg;
  return outcome;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "invariants") return cmd_invariants(cfg, out);
    if (cfg.command == "verify") return cmd_verify(cfg, out);
    if (cfg.command == "classify") return cmd_classify(cfg, out);
    if (cfg.command == "calabi-compose") return cmd_calabi_compose(cfg, out);
    if (cfg.command == "calabi-decompose") return cmd_calabi_decompose(cfg, out);
    if (cfg.command == "catalog-list") return cmd_catalog_list(cfg, out);
    if (cfg.command == "catalog-emit") return cmd_catalog_emit(cfg, out);
    throw Error(ErrorCode::kInvalidInput, "unknown command '" + cfg.command + "'", "command");
  } catch (const Error& e) {
    return report_error(&cfg, error_code_name(e.code()), e.what(), e.location(), error_exit_code(e.code()),
                        out, err);
  } catch (const nlohmann::json::exception& e) {
    return report_error(&cfg, error_code_name(ErrorCode::kInvalidInput), e.what(), cfg.chart, 2, out, err);
  } catch (const std::exception& e) {
    return report_error(&cfg, error_code_name(ErrorCode::kNumericalFailure), e.what(), cfg.command, 3, out,
                        err);
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const ParseOutcome parsed = parse_args(argc, argv, out, err);
  if (!parsed.config) return parsed.exit_code;
  return run(*parsed.config, out, err);
}

}  // namespace caffine::cli

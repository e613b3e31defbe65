#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "mixvol/error.hpp"
#include "mixvol/field.hpp"
#include "mixvol/io.hpp"
#include "mixvol/mixed_discriminant.hpp"
#include "mixvol/mixed_volume.hpp"
#include "mixvol/oracle2d.hpp"
#include "mixvol/zero_counting.hpp"

namespace mixvol::cli {

namespace {

using io::Json;

struct Options {
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 0;
  double confidence = 0.99;
  int threads = 0;
  bool antithetic = false;
  bool verbose = false;
  int quadrature_order = 32;
  std::size_t grid = 512;
  std::size_t realizations = 1000;
  int nodes = 4096;
  int k = 1;
  bool self_check = false;
  std::string ellipsoids;
  std::string ellipsoid;
  std::string matrices;
  std::string points;
  std::string field;
  std::string region;
  std::vector<double> at;
};

McConfig mc_config(const Options& o) {
  McConfig cfg;
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.ci_level = o.confidence;
  cfg.threads = o.threads;
  cfg.antithetic = o.antithetic;
  return cfg;
}

EmpiricalConfig empirical_config(const Options& o) {
  EmpiricalConfig cfg;
  cfg.realizations = o.realizations;
  cfg.seed = o.seed;
  cfg.grid = o.grid;
  cfg.ci_level = o.confidence;
  cfg.threads = o.threads;
  cfg.self_check = o.self_check;
  return cfg;
}

// Collects input files so the report can carry their digest.
class Inputs {
 public:
  Json load(const std::string& path) {
    io::Document doc = io::read_document(path);
    contents_.push_back(std::move(doc.bytes));
    return std::move(doc.json);
  }
  std::string digest() const { return io::content_digest(contents_); }

 private:
  std::vector<std::string> contents_;
};

void add_mc_flags(CLI::App* app, Options& o) {
  app->add_option("--samples", o.samples, "Monte Carlo sample count")->capture_default_str();
  app->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  app->add_option("--confidence", o.confidence, "Confidence level of the reported interval")
      ->capture_default_str();
  app->add_option("--threads", o.threads, "Worker threads (0 = all); never changes results")
      ->capture_default_str();
  app->add_flag("--antithetic", o.antithetic, "Average each draw with its negation");
}

void put_estimate(Json& report, const MCEstimate& e) {
  report["mean"] = e.mean;
  report["std_error"] = e.std_error;
  report["n_samples"] = e.n_samples;
  report["seed"] = e.seed;
  report["ci"] = {{"level", e.ci_level},
                  {"half_width", e.ci_half_width},
                  {"lower", e.ci_lower()},
                  {"upper", e.ci_upper()}};
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

using Handler = std::function<Json(Inputs&)>;

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  Options o;
  CLI::App app{"Mixed volumes of ellipsoids and zero sets of Gaussian fields", "mixvol"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--verbose,-v", o.verbose, "Human-readable summary on stderr");

  std::string command;
  Handler handler;
  auto bind = [&](CLI::App* sub, std::string name, Handler h) {
    sub->callback([&command, &handler, name = std::move(name), h = std::move(h)] {
      command = name;
      handler = h;
    });
  };

  auto* full = app.add_subcommand("full", "V_d(E_1..E_d) of d ellipsoids");
  full->add_option("--ellipsoids", o.ellipsoids, "JSON list of d ellipsoids")->required();
  add_mc_flags(full, o);
  bind(full, "full", [&](Inputs& in) {
    const auto es = io::parse_ellipsoids(in.load(o.ellipsoids));
    Json r;
    put_estimate(r, mixed_volume_full(es, mc_config(o)));
    r["dim"] = es.front().dim();
    return r;
  });

  auto* withballs = app.add_subcommand("withballs", "V_d(E_1..E_k, B..B)");
  withballs->add_option("--ellipsoids", o.ellipsoids, "JSON list of k <= d ellipsoids")->required();
  add_mc_flags(withballs, o);
  bind(withballs, "withballs", [&](Inputs& in) {
    const auto es = io::parse_ellipsoids(in.load(o.ellipsoids));
    Json r;
    put_estimate(r, mixed_volume_with_balls(es, mc_config(o)));
    r["dim"] = es.front().dim();
    r["k"] = es.size();
    return r;
  });

  auto* intrinsic = app.add_subcommand("intrinsic", "k-th intrinsic volume of an ellipsoid");
  intrinsic->add_option("--ellipsoid", o.ellipsoid, "JSON ellipsoid")->required();
  intrinsic->add_option("--k", o.k, "Intrinsic volume index")->required();
  add_mc_flags(intrinsic, o);
  bind(intrinsic, "intrinsic", [&](Inputs& in) {
    const Ellipsoid e = io::parse_ellipsoid(in.load(o.ellipsoid));
    Json r;
    put_estimate(r, intrinsic_volume(e, o.k, mc_config(o)));
    r["k"] = o.k;
    return r;
  });

  auto* meanwidth = app.add_subcommand("meanwidth", "Mean width of an ellipsoid");
  meanwidth->add_option("--ellipsoid", o.ellipsoid, "JSON ellipsoid")->required();
  add_mc_flags(meanwidth, o);
  bind(meanwidth, "meanwidth", [&](Inputs& in) {
    const Ellipsoid e = io::parse_ellipsoid(in.load(o.ellipsoid));
    Json r;
    put_estimate(r, mean_width(e, mc_config(o)));
    return r;
  });

  auto* discriminant = app.add_subcommand("discriminant", "Exact mixed discriminant");
  discriminant->add_option("--matrices", o.matrices, "JSON list of d symmetric d x d matrices")
      ->required();
  bind(discriminant, "discriminant", [&](Inputs& in) {
    const auto ms = io::parse_matrices(in.load(o.matrices));
    return Json{{"value", mixed_discriminant(ms)}, {"dim", ms.front().rows()}};
  });

  auto* bounds = app.add_subcommand("bounds", "Two-sided mixed-discriminant bound on V_d");
  bounds->add_option("--ellipsoids", o.ellipsoids, "JSON list of d ellipsoids")->required();
  bind(bounds, "bounds", [&](Inputs& in) {
    const auto es = io::parse_ellipsoids(in.load(o.ellipsoids));
    const BarvinokBounds b = barvinok_bounds(es);
    return Json{{"lower", b.lower}, {"upper", b.upper}, {"discriminant", b.discriminant}};
  });

  auto* oracle = app.add_subcommand("oracle2d", "Deterministic planar mixed area V_2(E_1, E_2)");
  oracle->add_option("--ellipsoids", o.ellipsoids, "JSON list of two 2-D ellipsoids")->required();
  oracle->add_option("--nodes", o.nodes, "Quadrature nodes")->capture_default_str();
  bind(oracle, "oracle2d", [&](Inputs& in) {
    const auto es = io::parse_ellipsoids(in.load(o.ellipsoids));
    if (es.size() != 2) throw Error(ErrorCode::DimensionMismatch, "oracle2d takes two ellipsoids");
    return Json{{"value", mixed_area_oracle(es[0], es[1], o.nodes)},
                {"area_1", es[0].volume()},
                {"area_2", es[1].volume()},
                {"nodes", o.nodes}};
  });

  auto* sudakov = app.add_subcommand("sudakov", "E max <x, eta> over a point cloud");
  sudakov->add_option("--points", o.points, "JSON list of points")->required();
  add_mc_flags(sudakov, o);
  bind(sudakov, "sudakov", [&](Inputs& in) {
    const Matrix pts = io::parse_points(in.load(o.points));
    const SudakovWidth w = sudakov_width(pts, mc_config(o));
    Json r;
    put_estimate(r, w.expected_sup);
    r["implied_v1"] = io::to_json(w.implied_v1);
    r["n_points"] = pts.rows();
    return r;
  });

  auto* fz = app.add_subcommand("fieldzeros", "Zero sets of Gaussian random fields");
  fz->require_subcommand(1);

  auto* fz_int = fz->add_subcommand("intensity", "Zero-set intensity at a point");
  fz_int->add_option("--field", o.field, "JSON field spec")->required();
  fz_int->add_option("--at", o.at, "Evaluation point, comma separated")->delimiter(',')->required();
  add_mc_flags(fz_int, o);
  bind(fz_int, "fieldzeros intensity", [&](Inputs& in) {
    const FieldSpec spec = io::parse_field(in.load(o.field));
    const Vector t = Eigen::Map<const Vector>(o.at.data(), static_cast<Eigen::Index>(o.at.size()));
    if (t.size() != spec.dim) throw Error(ErrorCode::DimensionMismatch, "--at has the wrong dimension");
    Json r;
    put_estimate(r, zero_intensity(spec, t, mc_config(o)));
    Json covs = Json::array();
    for (const auto& c : spec.components) covs.push_back(matrix_json(gradient_covariance(c, t).entries()));
    r["gradient_covariance"] = covs;
    r["at"] = o.at;
    return r;
  });

  auto* fz_measure = fz->add_subcommand("measure", "Expected zero-set measure over a region");
  fz_measure->add_option("--field", o.field, "JSON field spec")->required();
  fz_measure->add_option("--region", o.region, "JSON region")->required();
  fz_measure->add_option("--quadrature-order", o.quadrature_order, "Gauss-Legendre order")
      ->capture_default_str();
  add_mc_flags(fz_measure, o);
  bind(fz_measure, "fieldzeros measure", [&](Inputs& in) {
    const FieldSpec spec = io::parse_field(in.load(o.field));
    const Region region = io::parse_region(in.load(o.region));
    const ZeroMeasureEstimate m = expected_zero_measure(spec, region, mc_config(o), o.quadrature_order);
    Json r;
    put_estimate(r, m.estimate);
    r["quadrature_order"] = m.quadrature_order;
    r["quadrature_delta"] = m.quadrature_delta;
    r["error_budget"] = m.error_budget;
    return r;
  });

  auto add_empirical_flags = [&](CLI::App* sub) {
    sub->add_option("--field", o.field, "JSON field spec")->required();
    sub->add_option("--region", o.region, "JSON region")->required();
    sub->add_option("--realizations", o.realizations, "Number of sampled fields")->capture_default_str();
    sub->add_option("--grid", o.grid, "Grid cells per axis")->capture_default_str();
    sub->add_flag("--self-check", o.self_check, "Recount on a doubled grid");
  };

  auto* fz_sim = fz->add_subcommand("simulate", "Empirical zero measures of sampled fields");
  add_empirical_flags(fz_sim);
  add_mc_flags(fz_sim, o);
  bind(fz_sim, "fieldzeros simulate", [&](Inputs& in) {
    const FieldSpec spec = io::parse_field(in.load(o.field));
    const Region region = io::parse_region(in.load(o.region));
    const auto values = sample_zero_measures(spec, region, empirical_config(o));
    const MCEstimate s = summarize(values, o.seed, o.confidence);
    Json r;
    put_estimate(r, s);
    r["n_realizations"] = values.size();
    r["grid"] = o.grid;
    r["values"] = values;
    return r;
  });

  auto* fz_cmp = fz->add_subcommand("compare", "Analytic expectation versus empirical mean");
  add_empirical_flags(fz_cmp);
  fz_cmp->add_option("--quadrature-order", o.quadrature_order, "Gauss-Legendre order")
      ->capture_default_str();
  add_mc_flags(fz_cmp, o);
  bind(fz_cmp, "fieldzeros compare", [&](Inputs& in) {
    const FieldSpec spec = io::parse_field(in.load(o.field));
    const Region region = io::parse_region(in.load(o.region));
    const ZeroMeasureEstimate analytic =
        expected_zero_measure(spec, region, mc_config(o), o.quadrature_order);
    const MCEstimate empirical = empirical_zero_measure(spec, region, empirical_config(o));
    const double combined = std::hypot(analytic.error_budget, empirical.std_error);
    Json r;
    r["analytic"] = io::to_json(analytic.estimate);
    r["analytic"]["quadrature_delta"] = analytic.quadrature_delta;
    r["analytic"]["error_budget"] = analytic.error_budget;
    r["empirical"] = io::to_json(empirical);
    r["empirical"]["grid"] = o.grid;
    r["z_score"] = combined > 0.0 ? (empirical.mean - analytic.estimate.mean) / combined : 0.0;
    r["seed"] = o.seed;
    r["n_samples"] = o.samples;
    r["n_realizations"] = o.realizations;
    return r;
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return 2;
  }
  if (!handler) {
    err << "no subcommand given\n";
    return 2;
  }

  try {
    Inputs inputs;
    Json report = handler(inputs);
    report["command"] = command;
    report["inputs_digest"] = inputs.digest();
    const auto elapsed = std::chrono::steady_clock::now() - started;
    report["wall_time_ms"] = std::chrono::duration<double, std::milli>(elapsed).count();
    out << report.dump() << '\n';
    if (o.verbose) {
      err << command;
      if (report.contains("mean")) {
        err << ": " << report["mean"].get<double>() << " +/- " << report["std_error"].get<double>();
      } else if (report.contains("value")) {
        err << ": " << report["value"].get<double>();
      }
      err << '\n';
    }
    return 0;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace mixvol::cli

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include <hpdwav/estimators.hpp>
#include <hpdwav/io.hpp>
#include <hpdwav/simulate.hpp>
#include <hpdwav/spectral.hpp>
#include <hpdwav/threshold.hpp>

#include "run_config.hpp"

namespace hpdwav::cli {
namespace {

using nlohmann::json;

constexpr int kUsage = 2;
constexpr int kNumerical = 3;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  auto out = open_output(path);
  out << text;
  if (!out) throw UsageError("write failed: " + path);
}

GridFile load_input_grid(const std::string& path) {
  try {
    return load_grid(path);
  } catch (const FormatError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

HpdGrid load_hpd(const std::string& path) {
  const GridFile g = load_input_grid(path);
  if (!g.hpd) throw UsageError(path + ": expected an \"hpd\" grid");
  return g.to_hpd();
}

// Options shared by the subcommands that take a config file.
struct Common {
  std::string config_path;
  std::string order;
  std::string lambda;
  std::optional<int> max_scale;
  std::optional<std::uint64_t> seed;

  RunConfig resolve() const {
    RunConfig c = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    if (!order.empty()) c.order = parse_order(order);
    if (!lambda.empty()) c.lambda = parse_lambda(lambda);
    if (max_scale) c.max_scale = max_scale;
    if (seed) c.seed = *seed;
    c.noise.seed = c.seed;
    c.spectral.order = c.order;
    c.spectral.lambda = c.lambda;
    if (c.max_scale) c.spectral.max_scale = c.max_scale;
    return c;
  }
};

void add_common(CLI::App* cmd, Common& c, bool with_threshold) {
  cmd->add_option("--config", c.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--order", c.order, "Odd prediction orders N1,N2 (default 3,3)");
  if (with_threshold) {
    cmd->add_option("--lambda", c.lambda, "Penalty: a number or \"universal\"");
    cmd->add_option("--max-scale", c.max_scale, "Finest scale that may keep coefficients")->check(CLI::NonNegativeNumber);
  }
  cmd->add_option("--seed", c.seed, "Random seed (default 0)");
}

// ---------------------------------------------------------------- transform

struct TransformArgs {
  Common common;
  std::string input, output;
  bool inverse = false, roundtrip = false;
};

int run_transform(const TransformArgs& a) {
  if (is_decomposition_file(a.input)) {
    if (a.output.empty()) throw UsageError("transform: --output is required to reconstruct a decomposition");
    WaveletDecomposition dec;
    try {
      dec = load_decomposition(a.input);
    } catch (const FormatError& e) {
      throw UsageError(a.input + ": " + e.what());
    }
    save_grid(a.output, GridFile::from(inverse_transform(dec)));
    std::cout << a.output << '\n';
    return 0;
  }
  if (a.inverse) throw UsageError("transform: --inverse needs a decomposition file as input");
  if (a.output.empty() && !a.roundtrip) throw UsageError("transform: nothing to do; pass --output or --roundtrip");

  const RunConfig c = a.common.resolve();
  const HpdGrid grid = load_hpd(a.input);
  const WaveletDecomposition dec = forward_transform(grid, c.order);
  if (a.roundtrip) std::cout << fmt::format("max_relative_error {:.3e}\n", max_relative_error(inverse_transform(dec), grid));
  if (!a.output.empty()) {
    save_decomposition(a.output, dec);
    std::cout << a.output << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- compare

int run_compare(const std::string& a_path, const std::string& b_path) {
  const HpdGrid a = load_hpd(a_path), b = load_hpd(b_path);
  if (a.n1() != b.n1() || a.n2() != b.n2() || grid_dim(a) != grid_dim(b)) throw UsageError("grids differ in shape");
  double dist = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dist = std::max(dist, riemann_distance(a.cells()[i], b.cells()[i]));
  std::cout << fmt::format("max_relative_error {:.3e}\nmax_distance {:.3e}\niise {:.6e}\n", max_relative_error(a, b), dist,
                           iise(a, b));
  return 0;
}

// ---------------------------------------------------------------- denoise

struct DenoiseArgs {
  Common common;
  std::string input, output, report, metric_dump, truth, sweep;
  std::string threshold;
  std::string variance = "nonparametric";
  double trace_variance = 0.0;
};

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + ": not a number: " + item);
    }
  }
  if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
  return out;
}

VarianceSpec parse_variance(const std::string& method, double v) {
  VarianceSpec spec;
  spec.trace_variance = v;
  if (method == "nonparametric") {
    spec.method = VarianceMethod::Nonparametric;
  } else if (method == "parametric") {
    spec.method = VarianceMethod::Parametric;
  } else if (method == "semiparametric") {
    spec.method = VarianceMethod::Semiparametric;
  } else {
    throw UsageError("--variance must be nonparametric, parametric or semiparametric");
  }
  if (spec.method != VarianceMethod::Nonparametric && !(v > 0.0)) {
    throw UsageError("--variance " + method + " needs a positive --trace-variance");
  }
  return spec;
}

void dump_metrics(const std::string& path, const WaveletDecomposition& dec, const DenoiseResult& r) {
  const TraceField tf = trace_field(dec);
  auto out = open_output(path);
  out << "scale,k1,k2,trace,normalized,kept\n";
  for (int j = 1; j <= tf.max_scale(); ++j) {
    const auto& tr = tf.traces[static_cast<std::size_t>(j)];
    const double sigma = static_cast<std::size_t>(j) < r.scale_sigma.size() ? r.scale_sigma[static_cast<std::size_t>(j)] : 1.0;
    const bool labelled = static_cast<std::size_t>(j) < r.labels.size() && r.labels[static_cast<std::size_t>(j)].size() == tr.size();
    for (int k1 = 0; k1 < tr.n1(); ++k1) {
      for (int k2 = 0; k2 < tr.n2(); ++k2) {
        const int kept = labelled ? r.labels[static_cast<std::size_t>(j)](k1, k2) : 0;
        out << fmt::format("{},{},{},{:.17g},{:.17g},{}\n", j, k1, k2, tr(k1, k2), tr(k1, k2) / sigma, kept);
      }
    }
  }
}

int run_denoise(const DenoiseArgs& a) {
  RunConfig c = a.common.resolve();
  if (!a.threshold.empty()) {
    if (a.threshold == "tree") {
      c.threshold = ThresholdKind::Tree;
    } else if (a.threshold == "linear") {
      c.threshold = ThresholdKind::Linear;
    } else {
      throw UsageError("--threshold must be tree or linear");
    }
  }
  if (a.output.empty() && a.report.empty()) throw UsageError("denoise: pass --output and/or --report");
  if (!a.sweep.empty() && a.truth.empty()) throw UsageError("denoise: --sweep needs --truth");

  const HpdGrid grid = load_hpd(a.input);
  std::optional<HpdGrid> truth;
  if (!a.truth.empty()) {
    truth = load_hpd(a.truth);
    if (truth->n1() != grid.n1() || truth->n2() != grid.n2() || grid_dim(*truth) != grid_dim(grid)) {
      throw UsageError("--truth does not match the input grid shape");
    }
  }

  const WaveletDecomposition dec = forward_transform(grid, c.order);
  json report{{"input", a.input}, {"order", {c.order.n1, c.order.n2}}, {"n1", grid.n1()}, {"n2", grid.n2()}, {"d", grid_dim(grid)}};
  HpdGrid estimate;

  if (c.threshold == ThresholdKind::Linear) {
    const int jn1 = exact_log2(grid.n1()), jn2 = exact_log2(grid.n2());
    const int j0 = c.linear_scale.value_or(linear_threshold_scale_ceil(jn1, jn2, c.order));
    estimate = inverse_transform(linear_threshold(dec, j0));
    report["threshold"] = "linear";
    report["j0"] = j0;
  } else {
    DenoiseConfig config;
    config.order = c.order;
    config.lambda = c.lambda;
    config.max_scale = c.max_scale;
    config.variance = parse_variance(a.variance, a.trace_variance);

    DenoiseResult result;
    if (!a.sweep.empty()) {
      json table = json::array();
      double best = INFINITY;
      for (double lambda : parse_list(a.sweep, "--sweep")) {
        if (lambda < 0.0) throw UsageError("--sweep: lambda must be non-negative");
        config.lambda = lambda;
        DenoiseResult r = denoise_decomposition(dec, config);
        const double e = iise(r.estimate, *truth);
        table.push_back({{"lambda", lambda}, {"iise", e}});
        if (e < best) {
          best = e;
          result = std::move(r);
        }
      }
      report["sweep"] = table;
      report["lambda_source"] = "sweep";
    } else {
      result = denoise_decomposition(dec, config);
      report["lambda_source"] = c.lambda ? "fixed" : "universal";
    }
    report["threshold"] = "tree";
    report["lambda"] = result.lambda;
    report["sigma_hat"] = result.sigma_hat;
    json scales = json::array();
    for (std::size_t j = 1; j < result.kept.size(); ++j) {
      scales.push_back({{"scale", j},
                        {"kept", result.kept[j]},
                        {"total", result.total[j]},
                        {"sigma", j < result.scale_sigma.size() ? result.scale_sigma[j] : 1.0}});
    }
    report["scales"] = scales;
    if (!a.metric_dump.empty()) dump_metrics(a.metric_dump, dec, result);
    estimate = std::move(result.estimate);
  }
  if (truth) {
    report["iise"] = iise(estimate, *truth);
    report["iise_input"] = iise(grid, *truth);
  }
  if (!a.output.empty()) {
    save_grid(a.output, GridFile::from(estimate));
    std::cout << a.output << '\n';
  }
  if (!a.report.empty()) {
    write_text(a.report, report.dump(2) + "\n");
    std::cout << a.report << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  Common common;
  std::string surface = "tvar", size = "64,64", noise, output, truth_output;
  int dim = 3;
  std::optional<double> sigma2;
  std::optional<int> dof;
};

void apply_noise_flags(RunConfig& c, const std::string& noise, std::optional<double> sigma2, std::optional<int> dof) {
  if (!noise.empty()) parse_noise_kind(noise, c);
  if (sigma2) c.noise.sigma2 = *sigma2;
  if (dof) c.noise.dof = *dof;
  if (c.noise.sigma2 < 0.0) throw UsageError("--sigma2 must be non-negative");
}

HpdGrid make_surface(const std::string& name, const std::string& size, int dim) {
  const auto [n1, n2] = parse_size(size);
  if (dim < 1) throw UsageError("--dim must be positive");
  try {
    return test_surface(SurfaceSpec{name, n1, n2, dim});
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int run_simulate(const SimulateArgs& a) {
  RunConfig c = a.common.resolve();
  apply_noise_flags(c, a.noise, a.sigma2, a.dof);
  const HpdGrid target = make_surface(a.surface, a.size, a.dim);
  const HpdGrid noisy = c.noise_enabled ? apply_noise(target, c.noise) : target;
  save_grid(a.output, GridFile::from(noisy));
  std::cout << a.output << '\n';
  if (!a.truth_output.empty()) {
    save_grid(a.truth_output, GridFile::from(target));
    std::cout << a.truth_output << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- benchmark

struct BenchmarkArgs {
  Common common;
  std::string surface = "tvar", size = "64,64", noise, output;
  std::string estimators = "wav,nn,nw";
  std::string lambdas = "universal";
  std::string widths = "1,2,3";
  std::string radii = "0.05,0.1";
  int dim = 3, reps = 10;
  std::optional<double> sigma2;
  std::optional<int> dof;
};

int run_benchmark(const BenchmarkArgs& a) {
  RunConfig c = a.common.resolve();
  apply_noise_flags(c, a.noise, a.sigma2, a.dof);
  if (a.reps < 1) throw UsageError("--reps must be positive");
  const HpdGrid target = make_surface(a.surface, a.size, a.dim);

  std::vector<std::string> names;
  {
    std::stringstream in(a.estimators);
    std::string e;
    while (std::getline(in, e, ',')) {
      if (e != "wav" && e != "nn" && e != "nw") throw UsageError("--estimators: unknown estimator " + e);
      names.push_back(e);
    }
  }
  std::vector<std::optional<double>> lambdas;
  {
    std::stringstream in(a.lambdas);
    std::string l;
    while (std::getline(in, l, ',')) lambdas.push_back(parse_lambda(l));
  }
  std::vector<int> widths;
  for (double w : parse_list(a.widths, "--widths")) {
    if (w < 0 || w != std::floor(w)) throw UsageError("--widths must be non-negative integers");
    widths.push_back(static_cast<int>(w));
  }
  const std::vector<double> radii = parse_list(a.radii, "--radii");
  for (double r : radii) {
    if (!(r > 0.0)) throw UsageError("--radii must be positive");
  }

  using Clock = std::chrono::steady_clock;
  auto out = open_output(a.output);
  out << "estimator,tuning,rep,iise,runtime_ms\n";
  auto row = [&](const std::string& est, const std::string& tuning, int rep, auto&& fn) {
    const auto t0 = Clock::now();
    const HpdGrid g = fn();
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    out << fmt::format("{},{},{},{:.10g},{:.3f}\n", est, tuning, rep, iise(g, target), ms);
  };
  for (int rep = 0; rep < a.reps; ++rep) {
    NoiseSpec noise = c.noise;
    noise.seed = c.seed + static_cast<std::uint64_t>(rep);
    const HpdGrid x = c.noise_enabled ? apply_noise(target, noise) : target;
    for (const auto& est : names) {
      if (est == "wav") {
        for (const auto& l : lambdas) {
          DenoiseConfig config;
          config.order = c.order;
          config.lambda = l;
          config.max_scale = c.max_scale;
          row(est, l ? fmt::format("lambda={:g}", *l) : "lambda=universal", rep, [&] { return wavelet_denoise(x, config).estimate; });
        }
      } else if (est == "nn") {
        for (int h : widths) row(est, fmt::format("h={}", h), rep, [&] { return intrinsic_nn(x, h); });
      } else {
        for (double r : radii) row(est, fmt::format("r={:g}", r), rep, [&] { return intrinsic_nw(x, r); });
      }
    }
  }
  if (!out) throw UsageError("write failed: " + a.output);
  std::cout << a.output << '\n';
  return 0;
}

// ---------------------------------------------------------------- spectral

struct SpectralArgs {
  Common common;
  std::string input, output;
  std::optional<int> segments, segment_length, frequencies, tapers;
  std::optional<double> nw;
};

std::string spectral_csv(const HpdGrid& f, const SpectralConfig& config) {
  const int d = grid_dim(f);
  std::string csv = "segment,u,frequency,omega";
  for (int x = 0; x < d; ++x) csv += fmt::format(",log_f{}{}", x + 1, x + 1);
  for (int x = 0; x < d; ++x) {
    for (int y = x + 1; y < d; ++y) csv += fmt::format(",coh{}{}", x + 1, y + 1);
  }
  csv += '\n';
  const std::vector<double> omega = periodogram_frequencies(config.frequencies);
  for (int m = 0; m < f.n1(); ++m) {
    for (int k = 0; k < f.n2(); ++k) {
      const ComplexMatrix& cell = f(m, k).matrix();
      csv += fmt::format("{},{:.10g},{},{:.10g}", m, (m + 0.5) / f.n1(), k, omega[static_cast<std::size_t>(k)]);
      for (int x = 0; x < d; ++x) csv += fmt::format(",{:.10g}", std::log(cell(x, x).real()));
      for (int x = 0; x < d; ++x) {
        for (int y = x + 1; y < d; ++y) csv += fmt::format(",{:.10g}", coherence(f(m, k), x, y));
      }
      csv += '\n';
    }
  }
  return csv;
}

int run_spectral(const SpectralArgs& a) {
  RunConfig c = a.common.resolve();
  SpectralConfig& sp = c.spectral;
  if (a.segments) sp.segments = *a.segments;
  if (a.segment_length) sp.segment_length = *a.segment_length;
  if (a.frequencies) sp.frequencies = *a.frequencies;
  if (a.tapers) sp.tapers = *a.tapers;
  if (a.nw) sp.nw = *a.nw;

  MultivariateSeries series;
  try {
    series = load_series_csv(a.input);
  } catch (const FormatError& e) {
    throw UsageError(a.input + ": " + e.what());
  }
  if (series.length() < sp.segments * sp.segment_length) {
    throw UsageError(fmt::format("series has {} samples; {} segments of {} need {}", series.length(), sp.segments,
                                 sp.segment_length, sp.segments * sp.segment_length));
  }
  SpectralEstimate est;
  try {
    est = estimate_tv_spectrum(series, sp);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const std::string grid_path = a.output + ".hpdg", csv_path = a.output + ".csv";
  save_grid(grid_path, GridFile::from(est.estimate));
  write_text(csv_path, spectral_csv(est.estimate, sp));
  std::cout << grid_path << '\n' << csv_path << '\n';
  return 0;
}

// ---------------------------------------------------------------- simulate-series

struct SeriesArgs {
  int length = 1 << 15, dim = 3;
  std::uint64_t seed = 0;
  std::string output;
};

int run_simulate_series(const SeriesArgs& a) {
  if (a.length < 2 || a.dim < 1) throw UsageError("--length must be at least 2 and --dim positive");
  auto out = open_output(a.output);
  write_series_csv(out, simulate_tvar(a.length, a.dim, a.seed));
  if (!out) throw UsageError("write failed: " + a.output);
  std::cout << a.output << '\n';
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"Wavelet transforms and denoising for surfaces of HPD matrices"};
  app.name("hpdwav");
  app.require_subcommand(1);
  std::function<int()> action;

  TransformArgs ta;
  auto* transform = app.add_subcommand("transform", "Forward or inverse wavelet transform");
  transform->add_option("input,-i,--input", ta.input, "Grid or decomposition file")->required();
  transform->add_option("-o,--output", ta.output, "Decomposition (forward) or grid (inverse) to write");
  transform->add_flag("--inverse", ta.inverse, "Reconstruct a grid from a decomposition file");
  transform->add_flag("--roundtrip", ta.roundtrip, "Print the max relative round-trip error");
  add_common(transform, ta.common, false);
  transform->callback([&] { action = [&] { return run_transform(ta); }; });

  std::string cmp_a, cmp_b;
  auto* compare = app.add_subcommand("compare", "Distances between two HPD grids of the same shape");
  compare->add_option("first", cmp_a, "Grid file")->required();
  compare->add_option("second", cmp_b, "Grid file")->required();
  compare->callback([&] { action = [&] { return run_compare(cmp_a, cmp_b); }; });

  DenoiseArgs da;
  auto* denoise = app.add_subcommand("denoise", "Tree-structured trace thresholding");
  denoise->add_option("input,-i,--input", da.input, "Noisy HPD grid")->required();
  denoise->add_option("-o,--output", da.output, "Denoised grid");
  denoise->add_option("--report", da.report, "JSON report");
  denoise->add_option("--threshold", da.threshold, "tree (default) or linear");
  denoise->add_option("--variance", da.variance, "nonparametric (default), parametric or semiparametric");
  denoise->add_option("--trace-variance", da.trace_variance, "Var(Tr Log e) for the (semi)parametric methods");
  denoise->add_option("--truth", da.truth, "Target grid; adds IISE to the report");
  denoise->add_option("--sweep", da.sweep, "Comma separated penalties; keeps the one with least IISE against --truth");
  denoise->add_option("--metric-dump", da.metric_dump, "CSV of per-coefficient traces and labels");
  add_common(denoise, da.common, true);
  denoise->callback([&] { action = [&] { return run_denoise(da); }; });

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Noisy test surface");
  simulate->add_option("--surface", sa.surface, "blocks, smiley, bumps or tvar");
  simulate->add_option("--size", sa.size, "n1,n2 (default 64,64)");
  simulate->add_option("--dim", sa.dim, "Matrix dimension (default 3)");
  simulate->add_option("--noise", sa.noise, "normal (default), wishart or none");
  simulate->add_option("--sigma2", sa.sigma2, "Intrinsic normal variance");
  simulate->add_option("--dof", sa.dof, "Wishart degrees of freedom");
  simulate->add_option("-o,--output", sa.output, "Noisy grid")->required();
  simulate->add_option("--truth-output", sa.truth_output, "Noise-free target grid");
  add_common(simulate, sa.common, false);
  simulate->callback([&] { action = [&] { return run_simulate(sa); }; });

  BenchmarkArgs ba;
  auto* bench = app.add_subcommand("benchmark", "IISE of several estimators over noise replications");
  bench->add_option("--surface", ba.surface, "blocks, smiley, bumps or tvar");
  bench->add_option("--size", ba.size, "n1,n2 (default 64,64)");
  bench->add_option("--dim", ba.dim, "Matrix dimension (default 3)");
  bench->add_option("--noise", ba.noise, "normal (default), wishart or none");
  bench->add_option("--sigma2", ba.sigma2, "Intrinsic normal variance");
  bench->add_option("--dof", ba.dof, "Wishart degrees of freedom");
  bench->add_option("--reps", ba.reps, "Replications (default 10)");
  bench->add_option("--estimators", ba.estimators, "Subset of wav,nn,nw");
  bench->add_option("--lambdas", ba.lambdas, "Wavelet penalties, e.g. universal,1.5,2");
  bench->add_option("--widths", ba.widths, "Nearest-neighbour half widths");
  bench->add_option("--radii", ba.radii, "Nadaraya-Watson radii");
  bench->add_option("-o,--out", ba.output, "CSV to write")->required();
  add_common(bench, ba.common, true);
  bench->callback([&] { action = [&] { return run_benchmark(ba); }; });

  SpectralArgs pa;
  auto* spectral = app.add_subcommand("spectral", "Time-varying spectral matrix estimate of a series");
  spectral->add_option("input,-i,--input", pa.input, "Series CSV, one row per time point")->required();
  spectral->add_option("-o,--out", pa.output, "Output prefix; writes PREFIX.hpdg and PREFIX.csv")->required();
  spectral->add_option("--segments", pa.segments, "Time segments L_t");
  spectral->add_option("--segment-length", pa.segment_length, "Samples per segment T_t");
  spectral->add_option("--frequencies", pa.frequencies, "Frequencies L_f");
  spectral->add_option("--nw", pa.nw, "Time-bandwidth product");
  spectral->add_option("--tapers", pa.tapers, "Number of tapers (0: the dimension)");
  add_common(spectral, pa.common, true);
  spectral->callback([&] { action = [&] { return run_spectral(pa); }; });

  SeriesArgs ra;
  auto* series = app.add_subcommand("simulate-series", "Time-varying VAR(2) series as CSV");
  series->add_option("--length", ra.length, "Samples (default 32768)");
  series->add_option("--dim", ra.dim, "Channels (default 3)");
  series->add_option("--seed", ra.seed, "Random seed (default 0)");
  series->add_option("-o,--output", ra.output, "CSV to write")->required();
  series->callback([&] { action = [&] { return run_simulate_series(ra); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }
  return action();
}

}  // namespace
}  // namespace hpdwav::cli

int main(int argc, char** argv) {
  using namespace hpdwav;
  try {
    return cli::run(argc, argv);
  } catch (const cli::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kUsage;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return cli::kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return cli::kUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return cli::kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return cli::kNumerical;
  }
}

// Command-line driver for the finite-field compressive-sensing toolkit.
//
// Verbs: field-info, build-scheme, measure, recover, sweep, saturation,
// track, noise. Exit codes: 0 success, 2 configuration/usage error,
// 3 runtime experiment failure.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ffcs/ffcs.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ffcs::InvalidArgument("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ffcs::InvalidArgument("cannot write " + path);
  out << text;
}

std::optional<std::vector<std::uint32_t>> parse_poly(const std::string& csv) {
  if (csv.empty()) return std::nullopt;
  std::vector<std::uint32_t> out;
  std::istringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
  return out;
}

void print_field_info(std::uint64_t q, std::uint32_t s, const std::string& poly_csv,
                      bool table) {
  const auto [p, k] = ffcs::factor_prime_power(q);
  const ffcs::FieldPtr base = ffcs::build_field(static_cast<std::uint32_t>(p), k,
                                                parse_poly(poly_csv));
  const ffcs::LiftSpec lift = ffcs::LiftSpec::make(base, s);
  const ffcs::FieldPtr f = lift.lifted();
  std::cout << "field GF(" << q << (s > 1 ? "^" + std::to_string(s) : "") << ")"
            << "  p=" << f->characteristic() << " degree=" << f->degree()
            << " size=" << f->size() << "\n";
  std::cout << "prim_poly =";
  for (auto c : f->prim_poly()) std::cout << ' ' << c;
  std::cout << "  (constant term first)\n";
  std::cout << "alpha = " << f->alpha() << "\n";
  if (table) {
    std::cout << "exponential -> index -> coordinates (1";
    for (std::uint32_t i = 1; i < f->degree(); ++i) std::cout << " a^" << i;
    std::cout << ")\n  zero        0  ";
    for (std::uint32_t i = 0; i < f->degree(); ++i) std::cout << ' ' << 0;
    std::cout << '\n';
    for (std::uint64_t e = 0; e < f->order(); ++e) {
      const std::uint64_t v = f->exp_at(e);
      std::cout << "  a^" << e << (e < 10 ? "        " : "       ") << v << "  ";
      for (std::uint32_t i = 0; i < f->degree(); ++i) std::cout << ' ' << f->digit(v, i);
      std::cout << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-field compressive sensing toolkit"};
  app.require_subcommand(1);

  // field-info
  auto* fi = app.add_subcommand("field-info", "describe GF(q^s) and its tables");
  std::uint64_t fi_q = 2;
  std::uint32_t fi_s = 1;
  std::string fi_poly;
  bool fi_table = false;
  fi->add_option("--q", fi_q, "base field size (prime power)")->required();
  fi->add_option("--s", fi_s, "lifting degree");
  fi->add_option("--prim-poly", fi_poly, "comma-separated base polynomial coefficients");
  fi->add_flag("--table", fi_table, "print the full exponential table");

  // build-scheme
  auto* bs = app.add_subcommand("build-scheme", "construct a sensing scheme file");
  std::uint64_t bs_q = 0;
  std::size_t bs_n = 0, bs_b = 0;
  std::uint32_t bs_s = 0;
  std::string bs_out = "scheme.ffcs";
  std::string bs_model;
  double bs_lambda = 0.0, bs_delta = 0.0, bs_margin = 0.5;
  bs->add_option("--q", bs_q, "alphabet size (prime power)")->required();
  bs->add_option("--n", bs_n, "signal dimension")->required();
  bs->add_option("--b", bs_b, "sparsity budget")->required();
  bs->add_option("--s", bs_s, "lifting degree override (raises the default)");
  bs->add_option("--out", bs_out, "output path");
  bs->add_option("--noise-model", bs_model, "optional: qsym | worstcase");
  bs->add_option("--lambda", bs_lambda, "q-ary symmetric crossover probability");
  bs->add_option("--delta", bs_delta, "worst-case corrupted fraction");
  bs->add_option("--rate-margin", bs_margin, "outer rate as a fraction of capacity");

  // measure
  auto* me = app.add_subcommand("measure", "y = A x (+ noise for noisy schemes)");
  std::string me_scheme, me_signal, me_out = "measurement.txt";
  double me_lambda = -1.0, me_delta = -1.0;
  std::uint64_t me_seed = 1;
  me->add_option("--scheme", me_scheme, "scheme file")->required();
  me->add_option("--signal", me_signal, "sparse signal file")->required();
  me->add_option("--out", me_out, "output measurement file");
  me->add_option("--lambda", me_lambda, "apply q-ary symmetric noise");
  me->add_option("--delta", me_delta, "apply worst-case noise at this fraction");
  me->add_option("--seed", me_seed, "noise seed");

  // recover
  auto* re = app.add_subcommand("recover", "sparse recovery from a measurement file");
  std::string re_scheme, re_measurement, re_out = "recovered.txt";
  re->add_option("--scheme", re_scheme, "scheme file")->required();
  re->add_option("--measurement", re_measurement, "measurement file")->required();
  re->add_option("--out", re_out, "output signal file");

  // experiments
  struct ExpArgs {
    std::string config;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
    unsigned workers = 0;
    std::string orientation;
  };
  const auto add_experiment = [&](const char* name, const char* desc) {
    auto* cmd = app.add_subcommand(name, desc);
    auto args = std::make_shared<ExpArgs>();
    cmd->add_option("--config", args->config, "experiment config file")->required();
    cmd->add_option("--seed", args->seed, "master seed override")
        ->each([args](const std::string&) { args->seed_set = true; });
    cmd->add_option("--out", args->out, "output directory override");
    cmd->add_option("--workers", args->workers, "parallel worker cap");
    cmd->add_option("--orientation", args->orientation, "rows | cols (track)");
    return std::make_pair(cmd, args);
  };
  auto [sweep_cmd, sweep_args] = add_experiment("sweep", "recovery-probability sweep");
  auto [sat_cmd, sat_args] = add_experiment("saturation", "measurement-saturation table");
  auto [track_cmd, track_args] = add_experiment("track", "time-series tracking");
  auto [noise_cmd, noise_args] = add_experiment("noise", "noisy-recovery suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  const auto run_exp = [&](const ExpArgs& args) {
    ffcs::ExperimentConfig cfg = ffcs::ExperimentConfig::parse_file(args.config);
    ffcs::RunOverrides ov;
    if (args.seed_set) ov.seed = args.seed;
    if (!args.out.empty()) ov.out = args.out;
    if (args.workers) ov.workers = args.workers;
    if (!args.orientation.empty()) ov.orientation = args.orientation;
    for (const auto& path : ffcs::run_experiment(std::move(cfg), ov))
      std::cout << "wrote " << path.string() << '\n';
  };

  try {
    if (fi->parsed()) {
      print_field_info(fi_q, fi_s, fi_poly, fi_table);
    } else if (bs->parsed()) {
      std::ostringstream text;
      if (bs_model.empty()) {
        ffcs::SensingScheme::build(bs_q, bs_n, bs_b, bs_s).save(text);
      } else {
        ffcs::NoiseModel model;
        if (bs_model == "qsym") {
          model = ffcs::QSymmetricNoise{bs_lambda};
        } else if (bs_model == "worstcase") {
          model = ffcs::WorstCaseNoise{bs_delta};
        } else {
          throw ffcs::ConfigError("noise model must be qsym or worstcase");
        }
        ffcs::NoisyScheme::build(bs_q, bs_n, bs_b, model, bs_margin).save(text);
      }
      write_file(bs_out, text.str());
      std::cout << "wrote " << bs_out << '\n';
    } else if (me->parsed()) {
      const std::string text = read_file(me_scheme);
      std::istringstream sin(read_file(me_signal));
      const ffcs::SparseSignal x = ffcs::load_signal(sin);
      std::ostringstream out;
      if (ffcs::is_noisy_scheme_text(text)) {
        std::istringstream ss(text);
        const ffcs::NoisyScheme scheme = ffcs::NoisyScheme::load(ss);
        ffcs::NoiseModel model = ffcs::NoNoise{};
        if (me_lambda >= 0) model = ffcs::QSymmetricNoise{me_lambda};
        if (me_delta >= 0) model = ffcs::WorstCaseNoise{me_delta};
        ffcs::save_vector(scheme.measure_noisy(x, model, me_seed), out);
      } else {
        std::istringstream ss(text);
        const ffcs::SensingScheme scheme = ffcs::SensingScheme::load(ss);
        ffcs::save_vector(scheme.measure(x), out);
      }
      write_file(me_out, out.str());
      std::cout << "wrote " << me_out << '\n';
    } else if (re->parsed()) {
      const std::string text = read_file(re_scheme);
      std::ostringstream out;
      if (ffcs::is_noisy_scheme_text(text)) {
        std::istringstream ss(text);
        const ffcs::NoisyScheme scheme = ffcs::NoisyScheme::load(ss);
        std::istringstream min(read_file(re_measurement));
        const ffcs::FieldVector y = ffcs::load_vector(min, scheme.inner().base_field());
        ffcs::save_signal(scheme.recover_noisy(y), out);
      } else {
        std::istringstream ss(text);
        const ffcs::SensingScheme scheme = ffcs::SensingScheme::load(ss);
        std::istringstream min(read_file(re_measurement));
        const ffcs::FieldVector y = ffcs::load_vector(min, scheme.base_field());
        ffcs::save_signal(scheme.recover(y), out);
      }
      write_file(re_out, out.str());
      std::cout << "wrote " << re_out << '\n';
    } else if (sweep_cmd->parsed()) {
      run_exp(*sweep_args);
    } else if (sat_cmd->parsed()) {
      run_exp(*sat_args);
    } else if (track_cmd->parsed()) {
      run_exp(*track_args);
    } else if (noise_cmd->parsed()) {
      run_exp(*noise_args);
    }
  } catch (const ffcs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ffcs::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ffcs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

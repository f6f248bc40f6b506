// Command-line front end: key rates, noise thresholds, plot-ready curve
// CSV, Monte-Carlo protocol runs, and LP verification of the chain
// monogamy bound.
//
// Exit codes: 0 success, 1 usage error, 2 numerical or verification
// failure.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nskd/correlations.hpp"
#include "nskd/keyrate.hpp"
#include "nskd/nsbox.hpp"
#include "nskd/simulator.hpp"

namespace {

// Fixed-point, locale-independent formatting so CSV output is
// byte-stable across environments.
std::string fmt(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

void print_report_row(std::ostream& out, const nskd::KeyRateReport& r,
                      int precision) {
  out << r.n << ',' << fmt(r.p, precision) << ',' << fmt(r.r_opt, precision)
      << ',' << fmt(r.i_ab, precision) << ',' << fmt(r.i_be_bound, precision)
      << ',' << fmt(r.key_rate, precision) << '\n';
}

constexpr const char* kReportHeader = "N,p,r_opt,I_AB,I_BE_bound,K";

int cmd_rates(int n, double p, bool preprocess, int precision) {
  std::fprintf(stderr, "# rates n=%d p=%.17g preprocess=%d precision=%d\n", n,
               p, preprocess ? 1 : 0, precision);
  nskd::KeyRateReport report = preprocess ? nskd::key_rate_preprocessed(n, p)
                                          : nskd::key_rate_report(n, p);
  std::cout << kReportHeader << '\n';
  print_report_row(std::cout, report, precision);
  return 0;
}

int cmd_threshold(int n, bool preprocess) {
  std::fprintf(stderr, "# threshold n=%d preprocess=%d\n", n,
               preprocess ? 1 : 0);
  double p_star = nskd::threshold(n, preprocess);
  std::cout << fmt(p_star, 5) << '\n';
  return 0;
}

int cmd_curve(const std::vector<int>& n_list, double p_min, double p_max,
              double step, bool preprocess, const std::string& out_path,
              int precision) {
  if (!(step > 0.0) || p_min > p_max)
    throw std::invalid_argument("curve: need step > 0 and p-min <= p-max");
  std::fprintf(stderr,
               "# curve n-list=%zu entries p-min=%.17g p-max=%.17g "
               "step=%.17g preprocess=%d out=%s precision=%d\n",
               n_list.size(), p_min, p_max, step, preprocess ? 1 : 0,
               out_path.empty() ? "-" : out_path.c_str(), precision);

  std::vector<double> grid;
  for (int i = 0;; ++i) {
    double p = p_min + i * step;
    if (p > p_max + 1e-12) break;
    grid.push_back(std::min(p, p_max));
  }
  auto rows = nskd::curve(n_list, grid, preprocess);

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file)
      throw std::invalid_argument("curve: cannot open output file " + out_path);
    out = &file;
  }
  *out << kReportHeader << '\n';
  for (const auto& r : rows) print_report_row(*out, r, precision);
  return 0;
}

int cmd_simulate(const nskd::ProtocolConfig& config,
                 const std::string& transcript_path, int precision) {
  std::fprintf(stderr,
               "# simulate n=%d p=%.17g rounds=%" PRId64
               " q=%.17g qprime=%.17g adversarial=%d flip-r=%.17g seed=%" PRIu64
               " transcript=%s precision=%d\n",
               config.n, config.p, config.rounds, config.q, config.q_prime,
               config.adversarial ? 1 : 0, config.flip_r, config.seed,
               transcript_path.empty() ? "-" : transcript_path.c_str(),
               precision);

  nskd::RunResult result = nskd::run(config);
  if (!transcript_path.empty()) {
    std::ofstream file(transcript_path, std::ios::binary);
    if (!file)
      throw std::invalid_argument("simulate: cannot open transcript file " +
                                  transcript_path);
    nskd::write_transcript_csv(result.transcript, file);
  }

  const nskd::EstimationReport& rep = result.report;
  std::cout << "rounds,key_count,chain_est,chain_se,qber_est,qber_se,"
               "eve_info,eve_info_se,key_bits\n";
  std::cout << config.rounds << ',' << rep.key_count << ','
            << fmt(rep.chain_est, precision) << ','
            << fmt(rep.chain_se, precision) << ','
            << fmt(rep.qber_est, precision) << ','
            << fmt(rep.qber_se, precision) << ',';
  if (rep.eve_empirical_info) std::cout << fmt(*rep.eve_empirical_info, precision);
  std::cout << ',';
  if (rep.eve_empirical_se) std::cout << fmt(*rep.eve_empirical_se, precision);
  std::cout << ',' << nskd::achievable_key_length(rep, config) << '\n';
  return 0;
}

int cmd_verify_bounds(int n) {
  std::fprintf(stderr, "# verify-bounds n=%d\n", n);
  bool violated = false;
  std::cout << "beta,lp_min,analytic_bound\n";
  for (int i = 0; i <= 10; ++i) {
    double beta = i / 10.0;
    double lp_min = nskd::min_chain_given_marginal(n, beta);
    double bound = std::max(0.0, 2.0 * beta - 1.0);
    std::cout << fmt(beta, 6) << ',' << fmt(lp_min, 6) << ',' << fmt(bound, 6)
              << '\n';
    if (lp_min < bound - 1e-6) violated = true;
  }
  if (violated) {
    std::fprintf(stderr, "verify-bounds: LP minimum fell below the bound\n");
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"no-signalling key distribution toolkit"};
  app.require_subcommand(1);

  int precision = 6;
  app.add_option("--precision", precision, "CSV decimal places")
      ->capture_default_str()
      ->check(CLI::Range(1, 17));

  int n = 2;
  double p = 1.0;
  bool preprocess = false;

  auto* rates = app.add_subcommand("rates", "one key-rate report as CSV");
  rates->add_option("--n", n, "chain length")->required();
  rates->add_option("--p", p, "Werner weight")->required();
  rates->add_flag("--preprocess", preprocess, "optimize Bob's bit flip");

  auto* threshold = app.add_subcommand("threshold", "noise threshold p*");
  threshold->add_option("--n", n, "chain length")->required();
  threshold->add_flag("--preprocess", preprocess, "optimize Bob's bit flip");

  std::vector<int> n_list;
  double p_min = 0.85, p_max = 1.0, step = 0.005;
  std::string out_path;
  auto* curve = app.add_subcommand("curve", "key-rate curves as CSV");
  curve->add_option("--n-list", n_list, "chain lengths, comma separated")
      ->required()
      ->delimiter(',');
  curve->add_option("--p-min", p_min, "grid start")->capture_default_str();
  curve->add_option("--p-max", p_max, "grid end")->capture_default_str();
  curve->add_option("--step", step, "grid step")->capture_default_str();
  curve->add_flag("--preprocess", preprocess, "optimize Bob's bit flip");
  curve->add_option("--out", out_path, "output file (default: stdout)");

  nskd::ProtocolConfig config;
  std::string transcript_path;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo protocol run");
  simulate->add_option("--n", config.n, "chain length")->required();
  simulate->add_option("--p", config.p, "Werner weight")->required();
  simulate->add_option("--rounds", config.rounds, "number of rounds")->required();
  simulate->add_option("--q", config.q, "P(Alice picks x=0)")
      ->capture_default_str();
  simulate->add_option("--qprime", config.q_prime, "P(Bob picks y=0)")
      ->capture_default_str();
  simulate->add_flag("--adversarial", config.adversarial,
                     "sample from Eve's optimal attack mixture");
  simulate->add_option("--flip-r", config.flip_r, "Bob's key-bit flip probability")
      ->capture_default_str();
  simulate->add_option("--seed", config.seed, "RNG seed")->required();
  simulate->add_option("--transcript", transcript_path,
                       "write per-round transcript CSV here");

  auto* verify = app.add_subcommand("verify-bounds",
                                    "LP check of the chain monogamy bound");
  verify->add_option("--n", n, "chain length")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(rates)) return cmd_rates(n, p, preprocess, precision);
    if (app.got_subcommand(threshold)) return cmd_threshold(n, preprocess);
    if (app.got_subcommand(curve))
      return cmd_curve(n_list, p_min, p_max, step, preprocess, out_path,
                       precision);
    if (app.got_subcommand(simulate))
      return cmd_simulate(config, transcript_path, precision);
    if (app.got_subcommand(verify)) return cmd_verify_bounds(n);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}

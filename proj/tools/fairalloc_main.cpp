#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "check_suites.hpp"
#include "fairalloc/bc.hpp"
#include "fairalloc/mac.hpp"
#include "fairalloc/maxmin.hpp"
#include "result_document.hpp"

namespace {

using fairalloc::mask_t;
namespace mac = fairalloc::mac;
namespace bc = fairalloc::bc;
namespace maxmin = fairalloc::maxmin;
namespace cli = fairalloc::cli;

bool logging_enabled() {
  const char* v = std::getenv("FAIRALLOC_LOG");
  return v != nullptr && *v != '\0';
}

void log_line(const std::string& line) {
  if (logging_enabled()) std::cerr << "[fairalloc] " << line << '\n';
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  while (used < text.size() && std::isspace((unsigned char)text[used])) ++used;
  if (used != text.size())
    throw std::invalid_argument("trailing characters after number: '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.push_back("");
  return parts;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& part : split(text, ',')) out.push_back(parse_double(part));
  return out;
}

// Inline signature matrix: rows separated by ';', entries by ','.
std::vector<std::vector<double>> parse_signatures(const std::string& text) {
  std::vector<std::vector<double>> rows;
  for (const std::string& row : split(text, ';')) rows.push_back(parse_list(row));
  return rows;
}

nlohmann::json read_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open spec file: " + path);
  return nlohmann::json::parse(in);
}

maxmin::criterion parse_mac_criterion(const std::string& name) {
  if (name == "symmetric") return maxmin::criterion::symmetric;
  if (name == "maxmin" || name == "pf") return maxmin::criterion::maxmin_pf;
  if (name == "nbs") return maxmin::criterion::nbs;
  throw std::invalid_argument("unknown criterion: " + name);
}

mac::solve_mode parse_mac_mode(const std::string& name) {
  if (name == "auto") return mac::solve_mode::automatic;
  if (name == "exhaustive") return mac::solve_mode::exhaustive;
  if (name == "ordered") return mac::solve_mode::ordered;
  throw std::invalid_argument("unknown mode: " + name);
}

void emit(const nlohmann::json& doc, const std::string& format) {
  if (format == "csv")
    std::cout << cli::csv_document(doc);
  else
    std::cout << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

struct solve_mac_args {
  std::vector<double> powers;
  std::string powers_text;  // raw --powers value; strict-parsed before use
  double noise = 1.0;
  std::string signatures;
  std::string criterion = "maxmin";
  std::string disagreement;  // "" = unset; "canonical" or a comma list
  std::string mode = "auto";
  std::string format = "json";
  std::string spec_path;
  bool no_timestamp = false;
  // set by CLI11 so spec-file merging knows what was given explicitly
  bool powers_given = false, noise_given = false, signatures_given = false;
  bool criterion_given = false, disagreement_given = false, mode_given = false;
};

void merge_mac_spec(solve_mac_args& a) {
  if (a.spec_path.empty()) return;
  const nlohmann::json s = read_spec_file(a.spec_path);
  if (!a.powers_given && s.contains("powers"))
    a.powers = s.at("powers").get<std::vector<double>>();
  if (!a.noise_given && s.contains("noise")) a.noise = s.at("noise").get<double>();
  if (!a.signatures_given && s.contains("signatures")) {
    const auto rows = s.at("signatures").get<std::vector<std::vector<double>>>();
    std::string flat;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i) flat += ';';
      for (std::size_t j = 0; j < rows[i].size(); ++j) {
        if (j) flat += ',';
        flat += std::to_string(rows[i][j]);
      }
    }
    a.signatures = flat;
  }
  if (!a.criterion_given && s.contains("criterion"))
    a.criterion = s.at("criterion").get<std::string>();
  if (!a.mode_given && s.contains("mode")) a.mode = s.at("mode").get<std::string>();
  if (!a.disagreement_given && s.contains("disagreement")) {
    const nlohmann::json& d = s.at("disagreement");
    if (d.is_string()) {
      a.disagreement = d.get<std::string>();
    } else {
      std::string flat;
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (i) flat += ',';
        flat += std::to_string(d[i].get<double>());
      }
      a.disagreement = flat;
    }
  }
}

int run_solve_mac(solve_mac_args a) {
  if (!a.powers_text.empty()) a.powers = parse_list(a.powers_text);
  merge_mac_spec(a);
  if (a.powers.empty())
    throw std::invalid_argument("solve mac needs --powers (or a spec file with them)");

  mac::solve_spec spec;
  spec.objective = parse_mac_criterion(a.criterion);
  if (!a.disagreement.empty()) {
    if (spec.objective != maxmin::criterion::nbs)
      throw std::invalid_argument("--disagreement applies to the nbs criterion only");
    if (a.disagreement != "canonical") spec.disagreement = parse_list(a.disagreement);
  }
  const mac::solve_mode mode = parse_mac_mode(a.mode);

  cli::channel_echo echo;
  echo.powers = a.powers;
  echo.noise_scalar = a.noise;

  maxmin::allocation_result result;
  double sum_capacity = 0.0;
  if (a.signatures.empty()) {
    const mac::scalar_mac ch{a.powers, a.noise};
    echo.kind = "mac_scalar";
    result = mac::solve(ch, spec, mode);
    const auto f = mac::scalar_rank(ch);
    sum_capacity = f(f.universe());
  } else {
    mac::vector_mac ch;
    ch.powers = a.powers;
    ch.noise = a.noise;
    ch.signatures = parse_signatures(a.signatures);
    echo.kind = "mac_vector";
    echo.signatures = ch.signatures;
    result = mac::solve(ch, spec, mode);
    const auto f = mac::vector_rank(ch);
    sum_capacity = f(f.universe());
  }

  const std::string criterion_name =
      spec.objective == maxmin::criterion::symmetric ? "symmetric"
      : spec.objective == maxmin::criterion::nbs     ? "nbs"
                                                     : "maxmin";
  log_line("solve " + echo.kind + ": criterion=" + criterion_name +
           " mode=" + a.mode + " levels=" +
           std::to_string(result.bottleneck_chain.size()));
  emit(cli::mac_document(echo, criterion_name, a.mode, result, sum_capacity,
                         !a.no_timestamp),
       a.format);
  return 0;
}

// ---------------------------------------------------------------------------

struct solve_bc_args {
  std::vector<double> noise;
  std::string noise_text;  // raw --noise value; strict-parsed before use
  double total_power = 0.0;
  std::string criterion = "pf";
  std::string disagreement;
  std::string format = "json";
  std::string spec_path;
  bool no_timestamp = false;
  bool noise_given = false, total_power_given = false;
  bool criterion_given = false, disagreement_given = false;
};

void merge_bc_spec(solve_bc_args& a) {
  if (a.spec_path.empty()) return;
  const nlohmann::json s = read_spec_file(a.spec_path);
  if (!a.noise_given && s.contains("noise"))
    a.noise = s.at("noise").get<std::vector<double>>();
  if (!a.total_power_given && s.contains("total_power"))
    a.total_power = s.at("total_power").get<double>();
  if (!a.criterion_given && s.contains("criterion"))
    a.criterion = s.at("criterion").get<std::string>();
  if (!a.disagreement_given && s.contains("disagreement")) {
    const nlohmann::json& d = s.at("disagreement");
    std::string flat;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (i) flat += ',';
      flat += std::to_string(d[i].get<double>());
    }
    a.disagreement = flat;
  }
}

int run_solve_bc(solve_bc_args a) {
  if (!a.noise_text.empty()) a.noise = parse_list(a.noise_text);
  merge_bc_spec(a);
  if (a.noise.empty())
    throw std::invalid_argument("solve bc needs --noise (or a spec file with it)");
  if (!(a.total_power > 0.0))
    throw std::invalid_argument("solve bc needs a positive --total-power");

  const bc::bc_channel ch(a.noise, a.total_power);
  bc::bc_allocation result;
  std::string criterion_name;
  if (a.criterion == "symmetric" || a.criterion == "maxmin") {
    // The common-rate point is the max-min point of this region.
    if (!a.disagreement.empty())
      throw std::invalid_argument("--disagreement applies to the nbs criterion only");
    result = bc::symmetric_allocate(ch);
    criterion_name = "symmetric";
  } else if (a.criterion == "pf") {
    if (!a.disagreement.empty())
      throw std::invalid_argument("--disagreement applies to the nbs criterion only");
    result = bc::pf_allocate(ch);
    criterion_name = "pf";
  } else if (a.criterion == "nbs") {
    if (a.disagreement.empty() || a.disagreement == "canonical")
      throw std::invalid_argument(
          "solve bc --criterion nbs needs explicit --disagreement rates");
    result = bc::nbs_allocate(ch, parse_list(a.disagreement));
    criterion_name = "nbs";
  } else {
    throw std::invalid_argument("unknown criterion: " + a.criterion);
  }

  cli::channel_echo echo;
  echo.kind = "bc";
  echo.noise_list = a.noise;
  echo.total_power = a.total_power;
  log_line("solve bc: criterion=" + criterion_name + " iterations=" +
           std::to_string(result.iterations) + " residual=" +
           std::to_string(result.residual));
  emit(cli::bc_document(echo, criterion_name, result, bc::bc_sum_capacity(ch),
                        !a.no_timestamp),
       a.format);
  return 0;
}

// ---------------------------------------------------------------------------

int run_check(const std::string& suite, int trials, std::uint64_t seed) {
  if (!cli::is_suite(suite)) throw std::invalid_argument("unknown suite: " + suite);
  const cli::suite_outcome outcome = cli::run_suites(suite, trials, seed, std::cout);
  std::cout << "checks: " << outcome.checks << ", failures: " << outcome.failures
            << '\n';
  return outcome.failures == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------

std::vector<double> sweep_points(double from, double to, int points, bool log_scale) {
  if (points < 1) throw std::invalid_argument("sweep needs at least one point");
  if (log_scale && (!(from > 0.0) || !(to > 0.0)))
    throw std::invalid_argument("log sweeps need positive endpoints");
  std::vector<double> out;
  for (int j = 0; j < points; ++j) {
    const double t = points == 1 ? 0.0 : double(j) / (points - 1);
    out.push_back(log_scale ? from * std::pow(to / from, t)
                            : from + (to - from) * t);
  }
  return out;
}

int run_sweep_mac(std::vector<double> powers, double noise, int vary_user,
                  double from, double to, int points, bool log_scale) {
  if (powers.empty()) throw std::invalid_argument("sweep mac needs --powers");
  if (vary_user < 0 || vary_user >= (int)powers.size())
    throw std::invalid_argument("--vary-user is out of range");
  std::cout << "p_vary,c_sym,c_sum,eta_sym\n";
  std::cout << std::setprecision(12);
  for (double p : sweep_points(from, to, points, log_scale)) {
    powers[vary_user] = p;
    const mac::scalar_mac ch{powers, noise};
    const double c_sym =
        mac::solve(ch, {.objective = maxmin::criterion::symmetric}).sum_rate;
    const auto f = mac::scalar_rank(ch);
    const double c_sum = f(f.universe());
    std::cout << p << ',' << c_sym << ',' << c_sum << ',' << c_sym / c_sum << '\n';
  }
  return 0;
}

int run_sweep_bc(const std::vector<double>& noise, double from, double to,
                 int points, bool log_scale) {
  if (noise.empty()) throw std::invalid_argument("sweep bc needs --noise");
  std::cout << "total_power,c_sym,c_pf,c_sum,eta_sym,eta_pf\n";
  std::cout << std::setprecision(12);
  for (double pt : sweep_points(from, to, points, log_scale)) {
    const bc::bc_channel ch(noise, pt);
    double c_sym = 0.0, c_pf = 0.0;
    for (double r : bc::symmetric_allocate(ch).rates) c_sym += r;
    for (double r : bc::pf_allocate(ch).rates) c_pf += r;
    const double c_sum = bc::bc_sum_capacity(ch);
    std::cout << pt << ',' << c_sym << ',' << c_pf << ',' << c_sum << ','
              << c_sym / c_sum << ',' << c_pf / c_sum << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "fairalloc: symmetric, max-min, proportionally fair and bargaining "
      "operating points of multi-user Gaussian channels"};
  app.require_subcommand(1);

  // solve ---------------------------------------------------------------
  CLI::App* solve = app.add_subcommand("solve", "compute one fair operating point");
  solve->require_subcommand(1);

  solve_mac_args ma;
  CLI::App* solve_mac =
      solve->add_subcommand("mac", "multiple-access channel (scalar or vector inputs)");
  auto* ma_powers = solve_mac->add_option("--powers", ma.powers_text,
                                          "per-user transmit powers, comma separated");
  auto* ma_noise = solve_mac->add_option("--noise", ma.noise, "receiver noise power");
  auto* ma_sig = solve_mac->add_option(
      "--signatures", ma.signatures,
      "unit-norm signature per user: rows split by ';', entries by ','");
  auto* ma_crit = solve_mac->add_option("--criterion", ma.criterion,
                                        "symmetric | maxmin | pf | nbs")
                      ->check(CLI::IsMember({"symmetric", "maxmin", "pf", "nbs"}));
  auto* ma_d = solve_mac->add_option(
      "--disagreement", ma.disagreement,
      "nbs only: 'canonical' or comma-separated per-user rates");
  auto* ma_mode = solve_mac->add_option("--mode", ma.mode, "auto | exhaustive | ordered")
                      ->check(CLI::IsMember({"auto", "exhaustive", "ordered"}));
  solve_mac->add_option("--format", ma.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  solve_mac->add_option("--spec", ma.spec_path, "JSON file with channel parameters");
  solve_mac->add_flag("--no-timestamp", ma.no_timestamp,
                      "omit the timestamp for byte-identical reruns");

  solve_bc_args ba;
  CLI::App* solve_bc = solve->add_subcommand("bc", "degraded broadcast channel");
  auto* ba_noise = solve_bc->add_option("--noise", ba.noise_text,
                                        "per-user noise powers, comma separated");
  auto* ba_pt = solve_bc->add_option("--total-power", ba.total_power,
                                     "transmitter power budget");
  auto* ba_crit = solve_bc->add_option("--criterion", ba.criterion,
                                       "symmetric | maxmin | pf | nbs")
                      ->check(CLI::IsMember({"symmetric", "maxmin", "pf", "nbs"}));
  auto* ba_d = solve_bc->add_option("--disagreement", ba.disagreement,
                                    "nbs only: comma-separated per-user rates");
  solve_bc->add_option("--format", ba.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  solve_bc->add_option("--spec", ba.spec_path, "JSON file with channel parameters");
  solve_bc->add_flag("--no-timestamp", ba.no_timestamp,
                     "omit the timestamp for byte-identical reruns");

  // check ---------------------------------------------------------------
  std::string suite;
  int trials = 20;
  std::uint64_t seed = 12345;
  CLI::App* check = app.add_subcommand("check", "run randomized property suites");
  check->add_option("--suite", suite, "suite name or 'all'")
      ->required()
      ->check(CLI::IsMember(fairalloc::cli::suite_names()));
  check->add_option("--trials", trials, "iterations per randomized property");
  check->add_option("--seed", seed, "random seed");

  // sweep ---------------------------------------------------------------
  CLI::App* sweep = app.add_subcommand("sweep", "trace capacities over a parameter, CSV");
  sweep->require_subcommand(1);

  std::string sm_powers;
  double sm_noise = 1.0, sm_from = 1.0, sm_to = 10.0;
  int sm_vary = 0, sm_points = 10;
  bool sm_log = false;
  CLI::App* sweep_mac = sweep->add_subcommand(
      "mac", "vary one user's power; columns p_vary,c_sym,c_sum,eta_sym");
  sweep_mac->add_option("--powers", sm_powers, "base per-user powers");
  sweep_mac->add_option("--noise", sm_noise, "receiver noise power");
  sweep_mac->add_option("--vary-user", sm_vary, "index of the user to vary");
  sweep_mac->add_option("--from", sm_from, "first power value")->required();
  sweep_mac->add_option("--to", sm_to, "last power value")->required();
  sweep_mac->add_option("--points", sm_points, "number of sweep points");
  sweep_mac->add_flag("--log", sm_log, "space the points geometrically");

  std::string sb_noise;
  double sb_from = 1.0, sb_to = 10.0;
  int sb_points = 10;
  bool sb_log = false;
  CLI::App* sweep_bc = sweep->add_subcommand(
      "bc", "vary the power budget; columns total_power,c_sym,c_pf,c_sum,eta_sym,eta_pf");
  sweep_bc->add_option("--noise", sb_noise, "per-user noise powers");
  sweep_bc->add_option("--from", sb_from, "first power budget")->required();
  sweep_bc->add_option("--to", sb_to, "last power budget")->required();
  sweep_bc->add_option("--points", sb_points, "number of sweep points");
  sweep_bc->add_flag("--log", sb_log, "space the points geometrically");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << cli::error_document("input", e.what()).dump(2) << '\n';
    return 2;
  }

  try {
    if (solve_mac->parsed()) {
      ma.powers_given = ma_powers->count() > 0;
      ma.noise_given = ma_noise->count() > 0;
      ma.signatures_given = ma_sig->count() > 0;
      ma.criterion_given = ma_crit->count() > 0;
      ma.disagreement_given = ma_d->count() > 0;
      ma.mode_given = ma_mode->count() > 0;
      return run_solve_mac(ma);
    }
    if (solve_bc->parsed()) {
      ba.noise_given = ba_noise->count() > 0;
      ba.total_power_given = ba_pt->count() > 0;
      ba.criterion_given = ba_crit->count() > 0;
      ba.disagreement_given = ba_d->count() > 0;
      return run_solve_bc(ba);
    }
    if (check->parsed()) return run_check(suite, trials, seed);
    if (sweep_mac->parsed())
      return run_sweep_mac(parse_list(sm_powers), sm_noise, sm_vary, sm_from,
                           sm_to, sm_points, sm_log);
    if (sweep_bc->parsed())
      return run_sweep_bc(parse_list(sb_noise), sb_from, sb_to, sb_points, sb_log);
    std::cerr << cli::error_document("input", "no command given").dump(2) << '\n';
    return 2;
  } catch (const fairalloc::infeasible_disagreement_error& e) {
    std::cerr << cli::error_document("solver", e.what()).dump(2) << '\n';
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << cli::error_document("input", e.what()).dump(2) << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << cli::error_document("input", e.what()).dump(2) << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << cli::error_document("solver", e.what()).dump(2) << '\n';
    return 3;
  }
}

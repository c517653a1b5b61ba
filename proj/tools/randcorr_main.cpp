#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "randcorr/io.hpp"
#include "randcorr/parallel.hpp"
#include "randcorr/rng.hpp"

namespace {

using nlohmann::json;
using namespace randcorr;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNotDetected = 3;

struct StateOpts {
  std::string file;
  std::string named;
  int n = 0;
  std::string dirs;
  double epsilon = -1.0;
  std::uint64_t state_seed = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--state", file, "state file (JSON)");
    cmd->add_option("--named", named, "named state: ghz, bell, product, haar, ghz-noise");
    cmd->add_option("--n", n, "number of parties for named states");
    cmd->add_option("--dirs", dirs, "comma-separated Bloch directions for product states, e.g. z,x,-y");
    cmd->add_option("--epsilon", epsilon, "GHZ weight for ghz-noise");
    cmd->add_option("--state-seed", state_seed, "seed for haar named states");
  }

  StateVariant resolve() const {
    if (!file.empty()) return load_state_file(file);
    if (named.empty())
      throw std::invalid_argument("either --state or --named is required");
    json j;
    j["named"] = named;
    if (named == "ghz" || named == "haar" || named == "ghz-noise") {
      if (n < 1) throw std::invalid_argument("--n is required for named state '" + named + "'");
      j["n"] = n;
    }
    if (named == "haar") j["seed"] = state_seed;
    if (named == "ghz-noise") {
      if (epsilon < 0.0) throw std::invalid_argument("--epsilon is required for ghz-noise");
      j["epsilon"] = epsilon;
    }
    if (named == "product") {
      if (dirs.empty()) throw std::invalid_argument("--dirs is required for product states");
      json d = json::array();
      for (const auto& u : parse_directions(dirs)) d.push_back(json::array({u.x(), u.y(), u.z()}));
      j["dirs"] = std::move(d);
    }
    return state_from_json(j);
  }
};

std::optional<std::int64_t> parse_shots(const std::string& k) {
  if (k == "inf" || k == "infinite") return std::nullopt;
  std::size_t pos = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(k, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("--K must be a positive integer or 'inf'");
  }
  if (pos != k.size() || v < 1)
    throw std::invalid_argument("--K must be a positive integer or 'inf'");
  return v;
}

ConfidenceLevel make_confidence(double p, bool one_sided) {
  return one_sided ? ConfidenceLevel::one_sided_level(p) : ConfidenceLevel::two_sided(p);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write to '" + out_path + "'");
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
}

int env_threads() {
  const char* env = std::getenv("RANDCORR_THREADS");
  if (!env) return 0;
  return std::atoi(env);
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> values;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    values.push_back(std::stod(token));
  }
  if (values.empty()) throw std::invalid_argument("--values list is empty");
  return values;
}

int run(int argc, char** argv) {
  CLI::App app{"correlation-tensor and random-correlation entanglement toolkit"};
  app.require_subcommand(1);
  int threads = env_threads();
  app.add_option("--threads", threads, "worker threads (0 = auto)")->capture_default_str();

  // tensor
  auto* tensor_cmd = app.add_subcommand("tensor", "write the full correlation tensor");
  StateOpts tensor_state;
  tensor_state.attach(tensor_cmd);
  std::string tensor_out, tensor_format = "json";
  tensor_cmd->add_option("--out", tensor_out, "output path (default stdout)");
  tensor_cmd->add_option("--format", tensor_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  // randcorr
  auto* rc_cmd = app.add_subcommand("randcorr", "exact and Monte Carlo random correlations");
  StateOpts rc_state;
  rc_state.attach(rc_cmd);
  std::int64_t rc_m = 0;
  std::uint64_t rc_seed = 0;
  std::string rc_out;
  rc_cmd->add_option("--M", rc_m, "Monte Carlo settings count (omit for exact only)");
  rc_cmd->add_option("--seed", rc_seed, "Monte Carlo seed");
  rc_cmd->add_option("--out", rc_out, "output path (default stdout)");

  // witness
  auto* wit_cmd = app.add_subcommand("witness", "simulate an experiment and decide entanglement");
  StateOpts wit_state;
  wit_state.attach(wit_cmd);
  std::int64_t wit_m = 1;
  std::string wit_k = "inf";
  double wit_conf = 0.954;
  bool wit_one_sided = false;
  std::string wit_bound = "pure";
  std::uint64_t wit_seed = 0;
  std::string wit_out;
  wit_cmd->add_option("--M", wit_m, "number of random settings")->capture_default_str();
  wit_cmd->add_option("--K", wit_k, "shots per setting or 'inf'")->capture_default_str();
  wit_cmd->add_option("--confidence", wit_conf, "confidence probability")->capture_default_str();
  wit_cmd->add_flag("--one-sided", wit_one_sided, "use the one-sided normal multiplier");
  wit_cmd->add_option("--bound", wit_bound, "pure or separable")
      ->check(CLI::IsMember({"pure", "separable"}));
  wit_cmd->add_option("--seed", wit_seed, "experiment seed");
  wit_cmd->add_option("--out", wit_out, "output path (default stdout)");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "finite-statistics experiment records");
  StateOpts sim_state;
  sim_state.attach(sim_cmd);
  std::int64_t sim_m = 1;
  std::string sim_k = "inf";
  std::uint64_t sim_seed = 0;
  std::string sim_out, sim_format = "json";
  sim_cmd->add_option("--M", sim_m, "number of random settings")->capture_default_str();
  sim_cmd->add_option("--K", sim_k, "shots per setting or 'inf'")->capture_default_str();
  sim_cmd->add_option("--seed", sim_seed, "experiment seed");
  sim_cmd->add_option("--out", sim_out, "output path (default stdout)");
  sim_cmd->add_option("--format", sim_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  // spectrum
  auto* spec_cmd = app.add_subcommand("spectrum", "two-copy operator spectrum");
  int spec_n = 1;
  std::string spec_out;
  spec_cmd->add_option("--n", spec_n, "number of parties (1..3)")->required();
  spec_cmd->add_option("--out", spec_out, "output path (default stdout)");

  // detectprob
  auto* det_cmd = app.add_subcommand("detectprob", "single-setting detection probability");
  StateOpts det_state;
  det_state.attach(det_cmd);
  double det_conf = 0.954;
  std::int64_t det_samples = 100000;
  std::uint64_t det_seed = 0;
  bool det_one_sided = false;
  std::string det_out;
  det_cmd->add_option("--confidence", det_conf, "confidence probability")->capture_default_str();
  det_cmd->add_flag("--one-sided", det_one_sided, "use the one-sided normal multiplier");
  det_cmd->add_option("--samples", det_samples, "number of setting samples")->capture_default_str();
  det_cmd->add_option("--seed", det_seed, "sampling seed");
  det_cmd->add_option("--out", det_out, "output path (default stdout)");

  // eightphoton
  auto* ep_cmd = app.add_subcommand("eightphoton", "single-setting GHZ_8 success rate at finite K");
  std::int64_t ep_k = 1000;
  double ep_conf = 0.954;
  bool ep_one_sided = false;
  std::int64_t ep_reps = 10000;
  std::uint64_t ep_seed = 0;
  std::string ep_out;
  ep_cmd->add_option("--K", ep_k, "shots per setting")->capture_default_str();
  ep_cmd->add_option("--confidence", ep_conf, "confidence probability")->capture_default_str();
  ep_cmd->add_flag("--one-sided", ep_one_sided, "use the one-sided normal multiplier");
  ep_cmd->add_option("--reps", ep_reps, "number of repetitions")->capture_default_str();
  ep_cmd->add_option("--seed", ep_seed, "seed");
  ep_cmd->add_option("--out", ep_out, "output path (default stdout)");

  // quditcheck
  auto* qd_cmd = app.add_subcommand("quditcheck", "brute-force qudit bound verification");
  int qd_n = 2, qd_d = 3, qd_states = 200;
  std::uint64_t qd_seed = 0;
  std::string qd_out;
  qd_cmd->add_option("--n", qd_n, "number of parties")->capture_default_str();
  qd_cmd->add_option("--d", qd_d, "local dimension")->capture_default_str();
  qd_cmd->add_option("--states", qd_states, "states per family")->capture_default_str();
  qd_cmd->add_option("--seed", qd_seed, "seed");
  qd_cmd->add_option("--out", qd_out, "output path (default stdout)");

  // sweep
  auto* sw_cmd = app.add_subcommand("sweep", "parameter sweeps to CSV");
  StateOpts sw_state;
  sw_state.attach(sw_cmd);
  std::string sw_param, sw_values_csv, sw_mode = "witness";
  std::int64_t sw_m = 1000;
  std::string sw_k = "inf";
  double sw_conf = 0.954;
  int sw_reps = 1;
  std::int64_t sw_samples = 100000;
  std::uint64_t sw_seed = 0;
  std::string sw_out;
  sw_cmd->add_option("--param", sw_param, "swept parameter: M, K, epsilon, N")
      ->required()
      ->check(CLI::IsMember({"M", "K", "epsilon", "N"}));
  sw_cmd->add_option("--values", sw_values_csv, "comma-separated values")->required();
  sw_cmd->add_option("--mode", sw_mode, "witness or detectprob")
      ->check(CLI::IsMember({"witness", "detectprob"}));
  sw_cmd->add_option("--M", sw_m, "settings count")->capture_default_str();
  sw_cmd->add_option("--K", sw_k, "shots per setting or 'inf'")->capture_default_str();
  sw_cmd->add_option("--confidence", sw_conf, "confidence probability")->capture_default_str();
  sw_cmd->add_option("--reps", sw_reps, "repetitions per value")->capture_default_str();
  sw_cmd->add_option("--samples", sw_samples, "setting samples for detectprob mode")
      ->capture_default_str();
  sw_cmd->add_option("--seed", sw_seed, "master seed");
  sw_cmd->add_option("--out", sw_out, "output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (tensor_cmd->parsed()) {
    CorrelationTensor t = tensor_of(tensor_state.resolve());
    emit(tensor_format == "csv" ? tensor_to_csv(t) : tensor_to_json(t).dump(2), tensor_out);
    return kExitOk;
  }

  if (rc_cmd->parsed()) {
    CorrelationTensor t = tensor_of(rc_state.resolve());
    json j;
    j["schema"] = kSchemaVersion;
    j["N"] = t.num_parties;
    j["C"] = correlation_length(t);
    j["R_exact"] = random_correlations_exact(t);
    if (rc_m > 0) {
      McEstimate mc = random_correlations_mc(t, rc_m, rc_seed, threads);
      j["M"] = rc_m;
      j["seed"] = rc_seed;
      j["R_mc"] = mc.estimate;
      if (mc.std_error) j["R_mc_stderr"] = *mc.std_error;
    }
    emit(j.dump(2), rc_out);
    return kExitOk;
  }

  if (wit_cmd->parsed()) {
    StateVariant state = wit_state.resolve();
    ExperimentConfig config;
    config.num_parties = state_num_parties(state);
    config.num_settings = wit_m;
    config.shots = parse_shots(wit_k);
    config.seed = wit_seed;
    ExperimentResult result = run_experiment(config, tensor_of(state), threads);
    BoundMode mode = wit_bound == "separable" ? BoundMode::kSeparable : BoundMode::kPure;
    WitnessVerdict verdict = witness_decide(result.r_mk, config.num_parties, config.num_settings,
                                            config.shots, make_confidence(wit_conf, wit_one_sided),
                                            mode);
    json j = verdict_to_json(verdict);
    j["seed"] = wit_seed;
    emit(j.dump(2), wit_out);
    return verdict.entangled ? kExitOk : kExitNotDetected;
  }

  if (sim_cmd->parsed()) {
    StateVariant state = sim_state.resolve();
    ExperimentConfig config;
    config.num_parties = state_num_parties(state);
    config.num_settings = sim_m;
    config.shots = parse_shots(sim_k);
    config.seed = sim_seed;
    ExperimentResult result = run_experiment(config, tensor_of(state), threads);
    emit(sim_format == "csv" ? experiment_to_csv(result) : experiment_to_json(result).dump(2),
         sim_out);
    return kExitOk;
  }

  if (spec_cmd->parsed()) {
    TwoCopySpectrum spectrum = two_copy_operator_spectrum(spec_n);
    json j;
    j["schema"] = kSchemaVersion;
    j["N"] = spec_n;
    j["full"] = spectrum.full;
    j["symmetric_subspace"] = spectrum.symmetric;
    emit(j.dump(2), spec_out);
    return kExitOk;
  }

  if (det_cmd->parsed()) {
    StateVariant state = det_state.resolve();
    const auto* psi = std::get_if<PureState>(&state);
    if (!psi) throw std::invalid_argument("detectprob requires a pure state");
    ConfidenceLevel confidence = make_confidence(det_conf, det_one_sided);
    double prob = detection_probability(*psi, confidence, det_samples, det_seed, threads);
    SingleSettingThreshold thr = single_setting_threshold(psi->num_parties(), confidence);
    json j;
    j["schema"] = kSchemaVersion;
    j["N"] = psi->num_parties();
    j["confidence"] = confidence.p;
    j["threshold_c"] = thr.c;
    j["delta_N"] = thr.delta_n;
    j["samples"] = det_samples;
    j["seed"] = det_seed;
    j["detection_probability"] = prob;
    emit(j.dump(2), det_out);
    return kExitOk;
  }

  if (ep_cmd->parsed()) {
    ConfidenceLevel confidence = make_confidence(ep_conf, ep_one_sided);
    double rate = eight_photon_success_rate(ep_k, confidence, ep_reps, ep_seed, threads);
    json j;
    j["schema"] = kSchemaVersion;
    j["K"] = ep_k;
    j["confidence"] = confidence.p;
    j["one_sided"] = confidence.one_sided;
    j["repetitions"] = ep_reps;
    j["seed"] = ep_seed;
    j["success_rate"] = rate;
    emit(j.dump(2), ep_out);
    return kExitOk;
  }

  if (qd_cmd->parsed()) {
    QuditBoundReport report = qudit_bound_check(qd_n, qd_d, qd_states, qd_seed);
    emit(qudit_report_to_json(report).dump(2), qd_out);
    return kExitOk;
  }

  if (sw_cmd->parsed()) {
    std::vector<double> values = parse_values(sw_values_csv);
    std::string csv;
    if (sw_mode == "detectprob")
      csv = "param,value,rep,N,confidence,samples,detect_prob\n";
    else
      csv = "param,value,rep,N,M,K,confidence,R_hat,threshold,entangled\n";
    ConfidenceLevel confidence = make_confidence(sw_conf, false);
    for (std::size_t vi = 0; vi < values.size(); ++vi) {
      double value = values[vi];
      for (int rep = 0; rep < sw_reps; ++rep) {
        std::uint64_t cell_seed =
            derive_key({sw_seed, stream_tag::kSweep, static_cast<std::uint64_t>(vi),
                        static_cast<std::uint64_t>(rep)});
        StateOpts cell_state = sw_state;
        std::int64_t m = sw_m;
        std::optional<std::int64_t> k = parse_shots(sw_k);
        if (sw_param == "M") m = static_cast<std::int64_t>(value);
        if (sw_param == "K") k = static_cast<std::int64_t>(value);
        if (sw_param == "epsilon") cell_state.epsilon = value;
        if (sw_param == "N") cell_state.n = static_cast<int>(value);
        StateVariant state = cell_state.resolve();
        int n = state_num_parties(state);
        if (sw_mode == "detectprob") {
          const auto* psi = std::get_if<PureState>(&state);
          if (!psi) throw std::invalid_argument("detectprob sweep requires a pure state");
          double prob = detection_probability(*psi, confidence, sw_samples, cell_seed, threads);
          csv += sw_param + ',' + format_double(value) + ',' + std::to_string(rep) + ',' +
                 std::to_string(n) + ',' + format_double(confidence.p) + ',' +
                 std::to_string(sw_samples) + ',' + format_double(prob) + '\n';
        } else {
          ExperimentConfig config{n, m, k, cell_seed};
          ExperimentResult result = run_experiment(config, tensor_of(state), threads);
          WitnessVerdict verdict =
              witness_decide(result.r_mk, n, m, k, confidence, BoundMode::kPure);
          csv += sw_param + ',' + format_double(value) + ',' + std::to_string(rep) + ',' +
                 std::to_string(n) + ',' + std::to_string(m) + ',' +
                 (k ? std::to_string(*k) : std::string("inf")) + ',' +
                 format_double(confidence.p) + ',' + format_double(verdict.estimate) + ',' +
                 format_double(verdict.threshold) + ',' + (verdict.entangled ? "1" : "0") + '\n';
        }
      }
    }
    emit(csv, sw_out);
    return kExitOk;
  }

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

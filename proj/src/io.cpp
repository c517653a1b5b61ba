#include "randcorr/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace randcorr {

using nlohmann::json;

Eigen::Vector3d parse_direction(const std::string& token) {
  std::string t = token;
  double sign = 1.0;
  if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
    if (t[0] == '-') sign = -1.0;
    t = t.substr(1);
  }
  if (t == "x") return {sign, 0.0, 0.0};
  if (t == "y") return {0.0, sign, 0.0};
  if (t == "z") return {0.0, 0.0, sign};
  throw std::invalid_argument("unknown direction '" + token + "' (expected x, y, z with optional sign)");
}

std::vector<Eigen::Vector3d> parse_directions(const std::string& csv) {
  std::vector<Eigen::Vector3d> dirs;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t comma = csv.find(',', start);
    std::string token = csv.substr(start, comma == std::string::npos ? std::string::npos
                                                                     : comma - start);
    if (token.empty()) throw std::invalid_argument("empty direction token in '" + csv + "'");
    dirs.push_back(parse_direction(token));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (dirs.empty()) throw std::invalid_argument("no directions given");
  return dirs;
}

namespace {

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("field amplitudes/matrix: complex entries must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

Eigen::Vector3d direction_from_json(const json& j) {
  if (j.is_string()) return parse_direction(j.get<std::string>());
  if (j.is_array() && j.size() == 3)
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  throw std::invalid_argument("field dirs: expected axis letter or 3-vector");
}

const json& require_field(const json& j, const char* name) {
  if (!j.contains(name))
    throw std::invalid_argument(std::string("field ") + name + ": missing");
  return j.at(name);
}

StateVariant named_state(const json& j) {
  std::string name = j.at("named").get<std::string>();
  if (name == "ghz") return make_ghz(require_field(j, "n").get<int>());
  if (name == "bell") return make_ghz(2);
  if (name == "haar")
    return haar_random_pure(require_field(j, "n").get<int>(),
                            require_field(j, "seed").get<std::uint64_t>());
  if (name == "ghz-noise")
    return mix_with_white_noise(make_ghz(require_field(j, "n").get<int>()),
                                require_field(j, "epsilon").get<double>());
  if (name == "product") {
    std::vector<Eigen::Vector3d> dirs;
    for (const auto& d : require_field(j, "dirs")) dirs.push_back(direction_from_json(d));
    return make_product_state(dirs);
  }
  throw std::invalid_argument("field named: unknown state '" + name + "'");
}

}  // namespace

StateVariant state_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("state: expected a JSON object");
  if (j.contains("named")) return named_state(j);
  std::string kind = j.value("kind", "");
  if (kind != "pure" && kind != "density")
    throw std::invalid_argument("field kind: expected \"pure\" or \"density\"");
  if (!j.contains("local_dims"))
    throw std::invalid_argument("field local_dims: missing");
  std::vector<int> dims = j.at("local_dims").get<std::vector<int>>();
  if (kind == "pure") {
    if (!j.contains("amplitudes")) throw std::invalid_argument("field amplitudes: missing");
    const json& a = j.at("amplitudes");
    Eigen::VectorXcd amps(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) amps(static_cast<Eigen::Index>(i)) = complex_from_json(a[i]);
    PureState psi{std::move(dims), std::move(amps)};
    psi.validate();
    return psi;
  }
  if (!j.contains("matrix")) throw std::invalid_argument("field matrix: missing");
  const json& m = j.at("matrix");
  Eigen::MatrixXcd mat(m.size(), m.size());
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (m[r].size() != m.size())
      throw std::invalid_argument("field matrix: rows must form a square matrix");
    for (std::size_t c = 0; c < m[r].size(); ++c)
      mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(m[r][c]);
  }
  DensityMatrix rho{std::move(dims), std::move(mat)};
  rho.validate();
  return rho;
}

StateVariant load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open state file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("state file '" + path + "': " + e.what());
  }
  return state_from_json(j);
}

nlohmann::json state_to_json(const StateVariant& state) {
  json j;
  j["schema"] = kSchemaVersion;
  if (const auto* psi = std::get_if<PureState>(&state)) {
    j["kind"] = "pure";
    j["local_dims"] = psi->local_dims;
    json amps = json::array();
    for (Eigen::Index i = 0; i < psi->amplitudes.size(); ++i)
      amps.push_back(complex_to_json(psi->amplitudes(i)));
    j["amplitudes"] = std::move(amps);
  } else {
    const auto& rho = std::get<DensityMatrix>(state);
    j["kind"] = "density";
    j["local_dims"] = rho.local_dims;
    json rows = json::array();
    for (Eigen::Index r = 0; r < rho.matrix.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < rho.matrix.cols(); ++c)
        row.push_back(complex_to_json(rho.matrix(r, c)));
      rows.push_back(std::move(row));
    }
    j["matrix"] = std::move(rows);
  }
  return j;
}

int state_num_parties(const StateVariant& state) {
  return std::visit([](const auto& s) { return s.num_parties(); }, state);
}

CorrelationTensor tensor_of(const StateVariant& state) {
  return std::visit([](const auto& s) { return correlation_tensor(s); }, state);
}

std::string axis_label(Eigen::Index flat_index, int num_parties) {
  static const char letters[] = {'x', 'y', 'z'};
  std::string label(num_parties, 'x');
  for (int p = num_parties - 1; p >= 0; --p) {
    label[p] = letters[flat_index % 3];
    flat_index /= 3;
  }
  return label;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double parsed = 0.0;
  std::sscanf(buf, "%lg", &parsed);
  if (parsed == v) {
    // try shorter representations that still round-trip
    for (int prec = 1; prec < 17; ++prec) {
      char shorter[40];
      std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
      std::sscanf(shorter, "%lg", &parsed);
      if (parsed == v) {
        std::snprintf(buf, sizeof(buf), "%s", shorter);
        break;
      }
    }
  }
  std::string s(buf);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

nlohmann::json tensor_to_json(const CorrelationTensor& tensor) {
  json j;
  j["schema"] = kSchemaVersion;
  j["num_parties"] = tensor.num_parties;
  json entries = json::array();
  for (Eigen::Index t = 0; t < tensor.size(); ++t)
    entries.push_back(json::array({axis_label(t, tensor.num_parties), tensor.entries[t]}));
  j["entries"] = std::move(entries);
  return j;
}

std::string tensor_to_csv(const CorrelationTensor& tensor) {
  std::string out = "index,value\n";
  for (Eigen::Index t = 0; t < tensor.size(); ++t) {
    out += axis_label(t, tensor.num_parties);
    out += ',';
    out += format_double(tensor.entries[t]);
    out += '\n';
  }
  return out;
}

nlohmann::json verdict_to_json(const WitnessVerdict& v) {
  json j;
  j["schema"] = kSchemaVersion;
  j["estimate"] = v.estimate;
  j["threshold"] = v.threshold;
  j["delta_m"] = v.delta_m;
  j["delta_k"] = v.delta_k;
  j["delta_mk"] = v.delta_mk;
  j["entangled"] = v.entangled;
  j["confidence"] = v.confidence.p;
  j["z"] = v.confidence.z;
  j["one_sided"] = v.confidence.one_sided;
  j["bound_mode"] = v.mode == BoundMode::kSeparable ? "separable" : "pure";
  j["N"] = v.num_parties;
  j["M"] = v.num_settings;
  if (v.shots)
    j["K"] = *v.shots;
  else
    j["K"] = "inf";
  return j;
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  json j;
  j["schema"] = kSchemaVersion;
  j["N"] = config.num_parties;
  j["M"] = config.num_settings;
  if (config.shots)
    j["K"] = *config.shots;
  else
    j["K"] = "inf";
  j["seed"] = config.seed;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig config;
  config.num_parties = j.at("N").get<int>();
  config.num_settings = j.at("M").get<std::int64_t>();
  const json& k = j.at("K");
  if (k.is_string()) {
    if (k.get<std::string>() != "inf")
      throw std::invalid_argument("field K: expected integer or \"inf\"");
  } else {
    config.shots = k.get<std::int64_t>();
  }
  config.seed = j.value("seed", std::uint64_t{0});
  config.validate();
  return config;
}

nlohmann::json experiment_to_json(const ExperimentResult& result) {
  json j;
  j["schema"] = kSchemaVersion;
  j["config"] = config_to_json(result.config);
  j["R_MK"] = result.r_mk;
  j["finite_k_bias"] = result.finite_k_bias;
  json records = json::array();
  for (const RunRecord& rec : result.records) {
    json r;
    r["setting_index"] = rec.setting_index;
    json settings = json::array();
    for (const auto& u : rec.settings) settings.push_back(json::array({u.x(), u.y(), u.z()}));
    r["settings"] = std::move(settings);
    r["exact_E"] = rec.exact_e;
    r["estimated_E"] = rec.estimated_e;
    r["shot_sum"] = rec.shot_sum;
    records.push_back(std::move(r));
  }
  j["records"] = std::move(records);
  return j;
}

ExperimentResult experiment_from_json(const json& j) {
  ExperimentResult result;
  result.config = config_from_json(j.at("config"));
  result.r_mk = j.at("R_MK").get<double>();
  result.finite_k_bias = j.at("finite_k_bias").get<double>();
  for (const json& r : j.at("records")) {
    RunRecord rec;
    rec.setting_index = r.at("setting_index").get<std::int64_t>();
    for (const json& u : r.at("settings"))
      rec.settings.emplace_back(u[0].get<double>(), u[1].get<double>(), u[2].get<double>());
    rec.exact_e = r.at("exact_E").get<double>();
    rec.estimated_e = r.at("estimated_E").get<double>();
    rec.shot_sum = r.at("shot_sum").get<std::int64_t>();
    result.records.push_back(std::move(rec));
  }
  return result;
}

std::string experiment_to_csv(const ExperimentResult& result) {
  std::string out = "setting_index";
  for (int p = 0; p < result.config.num_parties; ++p) {
    std::string s = std::to_string(p + 1);
    out += ",u" + s + "x,u" + s + "y,u" + s + "z";
  }
  out += ",exact_E,estimated_E\n";
  for (const RunRecord& rec : result.records) {
    out += std::to_string(rec.setting_index);
    for (const auto& u : rec.settings)
      out += ',' + format_double(u.x()) + ',' + format_double(u.y()) + ',' + format_double(u.z());
    out += ',' + format_double(rec.exact_e) + ',' + format_double(rec.estimated_e) + '\n';
  }
  return out;
}

nlohmann::json qudit_report_to_json(const QuditBoundReport& report) {
  json j;
  j["schema"] = kSchemaVersion;
  j["N"] = report.num_parties;
  j["d"] = report.dim;
  j["normalization_scale"] = report.scale;
  j["normalization_note"] =
      "generator scale d/2 calibrated so product states attain the bound; "
      "library inference, not a fixed convention";
  j["bound"] = report.bound;
  j["num_states_per_family"] = report.num_states;
  j["min_C"] = report.min_c;
  j["max_C"] = report.max_c;
  j["product_max_abs_dev"] = report.product_max_abs_dev;
  j["violations"] = report.violations;
  return j;
}

}  // namespace randcorr

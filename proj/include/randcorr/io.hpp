#ifndef RANDCORR_IO_HPP
#define RANDCORR_IO_HPP

#include <string>
#include <variant>

#include <json.hpp>

#include "randcorr/correlations.hpp"
#include "randcorr/qudit.hpp"
#include "randcorr/shotsim.hpp"
#include "randcorr/states.hpp"
#include "randcorr/witness.hpp"

namespace randcorr {

using StateVariant = std::variant<PureState, DensityMatrix>;

inline constexpr int kSchemaVersion = 1;

// "x", "-y", "z", ... -> unit axis vector.
Eigen::Vector3d parse_direction(const std::string& token);
// comma-separated direction letters, e.g. "z,x,-y"
std::vector<Eigen::Vector3d> parse_directions(const std::string& csv);

// State files: {"kind":"pure"|"density","local_dims":[...],"amplitudes":[[re,im],...]}
// or {"matrix":[[[re,im],...],...]}; named shorthand
// {"named":"ghz","n":3} / {"named":"ghz-noise","n":3,"epsilon":0.8} /
// {"named":"product","dirs":["z","x"]} / {"named":"bell"} /
// {"named":"haar","n":3,"seed":7}.
StateVariant state_from_json(const nlohmann::json& j);
StateVariant load_state_file(const std::string& path);
nlohmann::json state_to_json(const StateVariant& state);

int state_num_parties(const StateVariant& state);
CorrelationTensor tensor_of(const StateVariant& state);

std::string axis_label(Eigen::Index flat_index, int num_parties);
nlohmann::json tensor_to_json(const CorrelationTensor& tensor);
std::string tensor_to_csv(const CorrelationTensor& tensor);

nlohmann::json verdict_to_json(const WitnessVerdict& verdict);

nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

nlohmann::json experiment_to_json(const ExperimentResult& result);
ExperimentResult experiment_from_json(const nlohmann::json& j);
std::string experiment_to_csv(const ExperimentResult& result);

nlohmann::json qudit_report_to_json(const QuditBoundReport& report);

// Shortest representation that still round-trips, always carrying a decimal
// point or exponent ("1.0", not "1").
std::string format_double(double v);

}  // namespace randcorr

#endif

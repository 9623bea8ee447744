#pragma once

// Network files are JSON documents:
//
//   {
//     "format": "regionlab-network",
//     "version": 1,
//     "input_dim": 2,
//     "layers": [
//       { "rows": 2, "cols": 2,
//         "weights": [1.0, 0.3, 0.4, -1.0],      // row-major
//         "bias": [-1.0, 0.5],                    // subtracted: A x - b
//         "activation": { "kind": "sigmoid", "gamma": 3.0 } },
//       ...
//     ]
//   }
//
// Activation kinds: sigmoid, logistic, step, softmax, identity. "gamma" is
// required for sigmoid and logistic and omitted otherwise. Doubles are
// written in shortest round-trip form, so save/load is exact.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "regionlab/network.hpp"

namespace regionlab {

inline constexpr int kNetworkFormatVersion = 1;

nlohmann::json activation_to_json(const Activation& act);
Activation activation_from_json(const nlohmann::json& j);

nlohmann::json network_to_json(const Network& net);
/// Throws ContractError on schema violations or unsupported versions.
Network network_from_json(const nlohmann::json& j);

Network load_network(const std::filesystem::path& path);

}  // namespace regionlab

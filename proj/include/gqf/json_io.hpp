// SPDX-License-Identifier: Apache-2.0
#ifndef GQF_JSON_IO_HPP
#define GQF_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "gqf/symplectic.hpp"

namespace gqf {

// State schema:
//   {"modes": n, "mean": [2n reals], "cov": [[2n x 2n reals, row-major]]}
// or the single-mode builder alternative
//   {"builder": {"nbar": ..., "r": ..., "theta_s": ..., "alpha_re": ..., "alpha_im": ...}}

GaussianState state_from_json(const nlohmann::json& j);
nlohmann::json state_to_json(const GaussianState& s);

GaussianState load_state(const std::string& path);
void save_state(const GaussianState& s, const std::string& path);

}  // namespace gqf

#endif

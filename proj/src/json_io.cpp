// SPDX-License-Identifier: Apache-2.0
#include "gqf/json_io.hpp"

#include <fstream>

#include "gqf/errors.hpp"

namespace gqf {

using nlohmann::json;

GaussianState state_from_json(const json& j) {
    if (j.contains("builder")) {
        const json& b = j.at("builder");
        return state_builder(b.value("nbar", 0.0), b.value("r", 0.0), b.value("theta_s", 0.0),
                             Complex(b.value("alpha_re", 0.0), b.value("alpha_im", 0.0)));
    }
    if (!j.contains("modes") || !j.contains("mean") || !j.contains("cov")) {
        throw validation_error("ValidationError",
                               "state JSON needs modes/mean/cov or a builder object");
    }
    const int n = j.at("modes").get<int>();
    if (n < 1) throw validation_error("ValidationError", "modes must be >= 1");
    const auto& jm = j.at("mean");
    const auto& jc = j.at("cov");
    if (static_cast<int>(jm.size()) != 2 * n || static_cast<int>(jc.size()) != 2 * n) {
        throw validation_error("ValidationError", "mean/cov dimensions do not match modes");
    }
    Vec mean(2 * n);
    for (int i = 0; i < 2 * n; ++i) mean(i) = jm.at(i).get<double>();
    Mat cov(2 * n, 2 * n);
    for (int i = 0; i < 2 * n; ++i) {
        if (static_cast<int>(jc.at(i).size()) != 2 * n) {
            throw validation_error("ValidationError", "cov rows must have length 2n");
        }
        for (int k = 0; k < 2 * n; ++k) cov(i, k) = jc.at(i).at(k).get<double>();
    }
    return GaussianState(std::move(mean), std::move(cov));
}

json state_to_json(const GaussianState& s) {
    json j;
    j["modes"] = s.n_modes;
    j["mean"] = json::array();
    for (Eigen::Index i = 0; i < s.mean.size(); ++i) j["mean"].push_back(s.mean(i));
    j["cov"] = json::array();
    for (Eigen::Index i = 0; i < s.cov.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < s.cov.cols(); ++k) row.push_back(s.cov(i, k));
        j["cov"].push_back(row);
    }
    return j;
}

GaussianState load_state(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("ValidationError", "cannot read state file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw validation_error("ValidationError", "bad JSON in " + path + ": " + e.what());
    }
    return state_from_json(j);
}

void save_state(const GaussianState& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw validation_error("ValidationError", "cannot write state file " + path);
    out << state_to_json(s).dump(2) << "\n";
}

}  // namespace gqf

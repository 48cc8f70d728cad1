// SPDX-License-Identifier: Apache-2.0
//
// gqf — Gaussian quantum fidelity toolkit CLI.
//
// Subcommands: fidelity, classify, sweep, qfi, oracle-check.
// Exit codes: 0 success, 2 validation error, 3 numerical breakdown.
// Errors are emitted as JSON on stderr: {"error": code, "detail": ...}.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "gqf/errors.hpp"
#include "gqf/fidelity.hpp"
#include "gqf/fock.hpp"
#include "gqf/json_io.hpp"
#include "gqf/measurement.hpp"
#include "gqf/metrology.hpp"

using nlohmann::json;

namespace {

struct RunConfig {
    std::string state0_path, state1_path, out_path, dump_state_path;
    double epsilon = gqf::kDefaultEpsilon;
    long seed = 0;
    double tol = 1e-8;
    // sweep
    double nbar1 = 0.5;
    std::string r0_range = "0:2:200", nbar0_range = "0.01:3:200";
    // qfi
    std::string channel;
    gqf::ChannelParams params;
    double theta = 0.0;
    // oracle-check
    int cutoff = 60;
    std::string suite = "all";
};

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw gqf::validation_error("ValidationError", "cannot write " + out_path);
    out << text;
}

gqf::GridSpec parse_range(const std::string& s) {
    gqf::GridSpec g{};
    if (std::sscanf(s.c_str(), "%lf:%lf:%d", &g.lo, &g.hi, &g.count) != 3 || g.count < 1) {
        throw gqf::validation_error("ValidationError", "range must be lo:hi:count, got " + s);
    }
    return g;
}

json unitary_to_json(const gqf::GaussianUnitary& u) {
    json j;
    j["S"] = json::array();
    for (Eigen::Index i = 0; i < u.S.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < u.S.cols(); ++k) row.push_back(u.S(i, k));
        j["S"].push_back(row);
    }
    j["d"] = json::array();
    for (Eigen::Index i = 0; i < u.d.size(); ++i) j["d"].push_back(u.d(i));
    return j;
}

json matrix_to_json(const gqf::Mat& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(row);
    }
    return rows;
}

int run_fidelity(const RunConfig& cfg) {
    gqf::GaussianState s0 = gqf::load_state(cfg.state0_path);
    gqf::GaussianState s1 = gqf::load_state(cfg.state1_path);
    if (!cfg.dump_state_path.empty()) gqf::save_state(s0, cfg.dump_state_path);
    gqf::FidelityResult r = gqf::fidelity_gaussian(s0, s1, cfg.epsilon);
    json j;
    j["fidelity"] = r.fidelity;
    j["overlap"] = r.overlap;
    j["gk_spectrum"] = r.gk_spectrum;
    j["regularization_epsilon"] = r.regularization_epsilon;
    write_output(cfg.out_path, j.dump(2) + "\n");
    return 0;
}

int run_classify(const RunConfig& cfg) {
    gqf::GaussianState s0 = gqf::load_state(cfg.state0_path);
    gqf::GaussianState s1 = gqf::load_state(cfg.state1_path);
    if (!cfg.dump_state_path.empty()) gqf::save_state(s0, cfg.dump_state_path);
    gqf::ClassifyResult r = gqf::classify(s0, s1, cfg.tol);
    json j;
    j["type"] = gqf::measurement_type_name(r.type);
    j["d1"] = r.d1;
    j["d2"] = r.d2;
    j["boundary_distance"] = r.boundary_distance;
    j["boundary_flag"] = r.boundary_flag;
    if (const auto* h = std::get_if<gqf::Homodyne>(&r.type)) {
        j["angle"] = h->angle;
        json d = json::array();
        for (Eigen::Index i = 0; i < h->pre_displacement.size(); ++i) {
            d.push_back(h->pre_displacement(i));
        }
        j["pre_displacement"] = d;
    } else if (const auto* nr = std::get_if<gqf::NumberResolving>(&r.type)) {
        j["pre_unitary"] = unitary_to_json(nr->pre_unitary);
    } else if (const auto* xp = std::get_if<gqf::XpPlusPxEigenbasis>(&r.type)) {
        j["pre_unitary"] = unitary_to_json(xp->pre_unitary);
    } else if (const auto* ps = std::get_if<gqf::PureStateProjector>(&r.type)) {
        j["target"] = gqf::state_to_json(ps->target);
    }
    write_output(cfg.out_path, j.dump(2) + "\n");
    return 0;
}

int run_sweep(const RunConfig& cfg) {
    auto pts = gqf::sweep_classification(cfg.nbar1, parse_range(cfg.r0_range),
                                         parse_range(cfg.nbar0_range), cfg.tol);
    std::string out = "r0,nbar0,type,d1,d2,boundary_distance\n";
    char buf[256];
    for (const auto& p : pts) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%s,%.17g,%.17g,%.17g\n", p.r0, p.nbar0,
                      gqf::sweep_type_name(p.type), p.d1, p.d2, p.boundary_distance);
        out += buf;
    }
    write_output(cfg.out_path, out);
    return 0;
}

int run_qfi(const RunConfig& cfg) {
    gqf::ChannelKind kind;
    if (cfg.channel == "displacement") {
        kind = gqf::ChannelKind::Displacement;
    } else if (cfg.channel == "phase") {
        kind = gqf::ChannelKind::Phase;
    } else if (cfg.channel == "squeezing") {
        kind = gqf::ChannelKind::Squeezing;
    } else if (cfg.channel == "loss") {
        kind = gqf::ChannelKind::Loss;
    } else {
        throw gqf::validation_error("ValidationError", "unknown channel " + cfg.channel);
    }
    gqf::ParametrizedChannel ch = gqf::channel_library(kind, cfg.params);
    const double theta = (kind == gqf::ChannelKind::Loss && cfg.theta == 0.0)
                             ? cfg.params.gamma
                             : cfg.theta;
    if (!cfg.dump_state_path.empty()) gqf::save_state(ch.state_at(theta), cfg.dump_state_path);
    gqf::SldQfiResult r = gqf::sld_qfi(ch, theta);
    json j;
    j["qfi"] = r.qfi;
    j["sld"]["GM_rate"] = matrix_to_json(r.GM_rate);
    j["sld"]["vM_rate"] = json::array();
    for (Eigen::Index i = 0; i < r.vM_rate.size(); ++i) j["sld"]["vM_rate"].push_back(r.vM_rate(i));
    j["sld"]["nu"] = r.nu;
    j["type"] = gqf::measurement_type_name(r.measurement_type);
    write_output(cfg.out_path, j.dump(2) + "\n");
    return 0;
}

json oracle_case(const std::string& name, double gaussian_value, double oracle_value,
                 double tol) {
    json j;
    j["case"] = name;
    j["gaussian_value"] = gaussian_value;
    j["oracle_value"] = oracle_value;
    j["abs_err"] = std::abs(gaussian_value - oracle_value);
    j["pass"] = std::abs(gaussian_value - oracle_value) < tol;
    return j;
}

int run_oracle_check(const RunConfig& cfg) {
    json report = json::array();
    const int N = cfg.cutoff;
    std::mt19937_64 rng(static_cast<uint64_t>(cfg.seed));
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const bool do_fid = cfg.suite == "fidelity" || cfg.suite == "all";
    const bool do_cls = cfg.suite == "classify" || cfg.suite == "all";
    const bool do_qfi = cfg.suite == "qfi" || cfg.suite == "all";
    if (!do_fid && !do_cls && !do_qfi) {
        throw gqf::validation_error("ValidationError", "unknown suite " + cfg.suite);
    }

    if (do_fid) {
        struct Case {
            double n0, r0, a0, n1, r1, a1;
        };
        std::vector<Case> cases = {{1.0, 0.0, 0.0, 0.5, 0.0, 0.0},
                                   {0.5, 0.3, 0.5, 1.0, 0.0, 0.2},
                                   {0.1, 0.4, 1.0, 2.0, 0.2, 0.3}};
        for (int k = 0; k < 3; ++k) {
            cases.push_back({0.2 + 1.5 * unif(rng), 0.4 * unif(rng), unif(rng),
                             0.2 + 1.5 * unif(rng), 0.4 * unif(rng), unif(rng)});
        }
        int idx = 0;
        for (const auto& c : cases) {
            auto s0 = gqf::state_builder(c.n0, c.r0, 0.0, c.a0);
            auto s1 = gqf::state_builder(c.n1, c.r1, 0.0, c.a1);
            auto f0 = gqf::build_state(c.n0, c.r0, 0.0, c.a0, N);
            auto f1 = gqf::build_state(c.n1, c.r1, 0.0, c.a1, N);
            report.push_back(oracle_case("fidelity_" + std::to_string(idx++),
                                         gqf::fidelity_gaussian(s0, s1, cfg.epsilon).fidelity,
                                         gqf::fidelity_fock(f0, f1), 1e-6));
        }
    }
    if (do_cls) {
        // homodyne boundary: p-quadrature BC equals fidelity on the + branch
        const double n0 = 1.0, n1 = 0.5;
        const double r0 = 0.5 * std::log(gqf::homodyne_boundary_ratio(n0, n1));
        auto f0 = gqf::build_state(n0, r0, 0.0, 0.0, N);
        auto f1 = gqf::build_state(n1, 0.0, 0.0, 0.0, N);
        const double F = gqf::fidelity_fock(f0, f1);
        auto povm = gqf::homodyne_povm(M_PI / 2.0, 12.0, N);
        report.push_back(
            oracle_case("classify_boundary_bc", gqf::bc_under_povm(f0, f1, povm), F, 1e-4));
        auto pt = gqf::classify_canonical_point(n0, n1, r0);
        report.push_back(oracle_case("classify_boundary_d1d2",
                                     std::abs(pt.d1 * pt.d2), 0.0, 1e-10));
    }
    if (do_qfi) {
        for (auto kind : {gqf::ChannelKind::Phase, gqf::ChannelKind::Squeezing}) {
            gqf::ChannelParams p;
            p.nbar = 0.5;
            p.r = 0.5;
            auto ch = gqf::channel_library(kind, p);
            auto sld = gqf::sld_qfi(ch, 0.0);
            // oracle: Fock SLD via central difference of the channel states
            auto to_fock = [&](double th) {
                gqf::GaussianState s = ch.state_at(th);
                auto wd = gqf::williamson(s.cov);
                const double nb = wd.nu[0] - 0.5;
                const double rr = 0.25 * std::log(s.cov(1, 1) / s.cov(0, 0));
                return gqf::build_state(nb, rr, 0.0, 0.0, N).rho;
            };
            const double h = 1e-5;
            gqf::CMat drho = (to_fock(h) - to_fock(-h)) / (2.0 * h);
            auto [L, qfi_oracle] = gqf::sld_fock(to_fock(0.0), drho);
            const char* nm = kind == gqf::ChannelKind::Phase ? "qfi_phase" : "qfi_squeezing";
            report.push_back(oracle_case(nm, sld.qfi, qfi_oracle,
                                         1e-3 * std::max(1.0, std::abs(sld.qfi))));
        }
    }
    write_output(cfg.out_path, report.dump(2) + "\n");
    for (const auto& item : report) {
        if (!item.at("pass").get<bool>()) return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian quantum fidelity toolkit"};
    app.require_subcommand(1);
    RunConfig cfg;

    app.add_option("--epsilon", cfg.epsilon, "regularization for singular symplectic eigenvalues");
    app.add_option("--seed", cfg.seed, "seed for randomized suites");
    app.add_option("--out", cfg.out_path, "output file (default: stdout)");

    auto* fid = app.add_subcommand("fidelity", "fidelity between two Gaussian states");
    fid->add_option("--state0", cfg.state0_path)->required();
    fid->add_option("--state1", cfg.state1_path)->required();
    fid->add_option("--dump-state", cfg.dump_state_path, "re-emit parsed state0 as JSON");

    auto* cls = app.add_subcommand("classify", "optimal measurement type for a single-mode pair");
    cls->add_option("--state0", cfg.state0_path)->required();
    cls->add_option("--state1", cfg.state1_path)->required();
    cls->add_option("--tol", cfg.tol, "boundary tolerance on d1*d2");
    cls->add_option("--dump-state", cfg.dump_state_path);

    auto* swp = app.add_subcommand("sweep", "classification sweep over (r0, nbar0)");
    swp->add_option("--nbar1", cfg.nbar1)->required();
    swp->add_option("--r0", cfg.r0_range, "lo:hi:count");
    swp->add_option("--nbar0", cfg.nbar0_range, "lo:hi:count");
    swp->add_option("--tol", cfg.tol);

    auto* qfi = app.add_subcommand("qfi", "SLD and quantum Fisher information of a channel");
    qfi->add_option("--channel", cfg.channel, "displacement|phase|squeezing|loss")->required();
    qfi->add_option("--nbar", cfg.params.nbar);
    qfi->add_option("--r", cfg.params.r);
    qfi->add_option("--theta-s", cfg.params.theta_s);
    qfi->add_option("--alpha", cfg.params.alpha, "displacement magnitude");
    qfi->add_option("--theta-c", cfg.params.theta_c, "displacement angle");
    qfi->add_option("--gamma", cfg.params.gamma, "loss rate (loss channel)");
    qfi->add_option("--time", cfg.params.time, "evolution time (loss channel)");
    qfi->add_option("--theta", cfg.theta, "evaluation point of the parameter");
    qfi->add_option("--dump-state", cfg.dump_state_path);

    auto* orc = app.add_subcommand("oracle-check", "Gaussian-vs-Fock consistency report");
    orc->add_option("--cutoff", cfg.cutoff);
    orc->add_option("--suite", cfg.suite, "fidelity|classify|qfi|all");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fid->parsed()) return run_fidelity(cfg);
        if (cls->parsed()) return run_classify(cfg);
        if (swp->parsed()) return run_sweep(cfg);
        if (qfi->parsed()) return run_qfi(cfg);
        if (orc->parsed()) return run_oracle_check(cfg);
    } catch (const gqf::Error& e) {
        json err;
        err["error"] = e.code();
        err["detail"] = e.what();
        std::cerr << err.dump() << "\n";
        return e.error_class() == gqf::ErrorClass::Validation ? 2 : 3;
    } catch (const std::exception& e) {
        json err;
        err["error"] = "InternalError";
        err["detail"] = e.what();
        std::cerr << err.dump() << "\n";
        return 3;
    }
    return 1;
}

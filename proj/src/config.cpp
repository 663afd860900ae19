#include "risofdm/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace risofdm {

using nlohmann::json;

std::string Codebook::label() const {
    return is_discrete() ? std::to_string(bits) : std::string("inf");
}

void SystemConfig::set_uniform_power_dbm(double dbm) {
    power_w.assign(static_cast<std::size_t>(K), {dbm_to_watt(dbm), dbm_to_watt(dbm)});
}

void SystemConfig::set_uniform_noise_dbm(double dbm) {
    noise_w.assign(static_cast<std::size_t>(K),
                   std::vector<double>(static_cast<std::size_t>(V), dbm_to_watt(dbm)));
}

void SystemConfig::set_uniform_kappa(double kappa_value) {
    kappa.assign(static_cast<std::size_t>(K), kappa_value);
}

void SystemConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };

    if (K < 1) fail("K must be >= 1");
    if (V < 2 * K) fail("V must be >= 2K so each node-direction can own a sub-band");
    if (R < 1) fail("R must be >= 1");
    if (codebook.is_discrete() && codebook.bits < 1) fail("B must be >= 1 for a discrete codebook");
    if (codebook.is_discrete() && codebook.bits > 20) fail("B too large");

    if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0,1)");
    if (L_kk < 1 || L_kr < 1 || L_rk < 1) fail("delay-tap counts must be >= 1");
    if (L_kk > V) fail("L_kk must not exceed V");
    if (L_kr + L_rk - 1 > V) fail("cascaded channel length L_kr+L_rk-1 must not exceed V");

    if (power_w.size() != static_cast<std::size_t>(K)) fail("power table must have K rows");
    for (const auto& row : power_w)
        for (double p : row)
            if (!(p > 0.0)) fail("transmit powers must be strictly positive");

    if (noise_w.size() != static_cast<std::size_t>(K)) fail("noise table must have K rows");
    for (const auto& row : noise_w) {
        if (row.size() != static_cast<std::size_t>(V)) fail("noise table rows must have V entries");
        for (double s : row)
            if (!(s > 0.0)) fail("noise powers must be strictly positive");
    }

    if (kappa.size() != static_cast<std::size_t>(K)) fail("kappa must have K entries");
    for (double x : kappa)
        if (!(x > 0.0)) fail("kappa weights must be strictly positive");

    if (!(rho0 > 0.0)) fail("rho0 must be positive");
    if (!(d0 > 0.0)) fail("d0 must be positive");
    if (cluster_radius < 0.0) fail("cluster radius must be >= 0");
    if (!(tau >= 0.0 && tau <= 1.0)) fail("tau must lie in [0,1]");
    if (T_max < 1) fail("T_max must be >= 1");
    if (!(outer_tol > 0.0)) fail("outer_tol must be positive");
    if (outer_max_iters < 1) fail("outer_max_iters must be >= 1");
    if (lambda_grid_points < 2) fail("lambda_grid_points must be >= 2");
}

SystemConfig SystemConfig::profile(const std::string& name) {
    SystemConfig cfg;
    if (name == "paper" || name == "paper-fig2a" || name == "paper-fig2b") {
        cfg.K = 3;
        cfg.V = 16;
        cfg.R = 45;
        cfg.codebook = (name == "paper-fig2b") ? Codebook::discrete(5) : Codebook::continuous();
    } else if (name == "tiny") {
        cfg.K = 1;
        cfg.V = 2;
        cfg.R = 2;
        cfg.codebook = Codebook::discrete(1);
        cfg.L_kk = 2;
        cfg.L_kr = 1;
        cfg.L_rk = 1;
    } else {
        throw ConfigError("unknown profile: " + name);
    }
    cfg.set_uniform_power_dbm(25.0);
    cfg.set_uniform_noise_dbm(-110.0);
    cfg.set_uniform_kappa(1.0);
    cfg.rho0 = db_to_linear(-30.0);
    cfg.validate();
    return cfg;
}

namespace {

Codebook parse_codebook(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "continuous") return Codebook::continuous();
        throw ConfigError("B must be an integer or \"inf\"");
    }
    if (j.is_number_integer()) return Codebook::discrete(j.get<int>());
    throw ConfigError("B must be an integer or \"inf\"");
}

std::array<double, 3> parse_vec3(const json& j) {
    if (!j.is_array() || j.size() != 3) throw ConfigError("expected a 3-element position");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

void SystemConfig::apply_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");

    // Counts first so broadcast fields size correctly afterwards.
    if (j.contains("K")) K = j["K"].get<int>();
    if (j.contains("V")) V = j["V"].get<int>();
    if (j.contains("R")) R = j["R"].get<int>();
    if (j.contains("B")) codebook = parse_codebook(j["B"]);

    if (power_w.size() != static_cast<std::size_t>(K)) set_uniform_power_dbm(25.0);
    if (noise_w.size() != static_cast<std::size_t>(K) ||
        (K > 0 && noise_w[0].size() != static_cast<std::size_t>(V)))
        set_uniform_noise_dbm(-110.0);
    if (kappa.size() != static_cast<std::size_t>(K)) set_uniform_kappa(1.0);

    try {
        if (j.contains("P_dbm")) {
            const auto& p = j["P_dbm"];
            if (p.is_number()) {
                set_uniform_power_dbm(p.get<double>());
            } else {
                power_w.clear();
                for (const auto& row : p)
                    power_w.push_back({dbm_to_watt(row.at(0).get<double>()),
                                       dbm_to_watt(row.at(1).get<double>())});
            }
        }
        if (j.contains("sigma2_dbm")) {
            const auto& s = j["sigma2_dbm"];
            if (s.is_number()) {
                set_uniform_noise_dbm(s.get<double>());
            } else {
                noise_w.clear();
                for (const auto& row : s) {
                    std::vector<double> out;
                    for (const auto& x : row) out.push_back(dbm_to_watt(x.get<double>()));
                    noise_w.push_back(std::move(out));
                }
            }
        }
        if (j.contains("kappa")) {
            const auto& kk = j["kappa"];
            if (kk.is_number()) {
                set_uniform_kappa(kk.get<double>());
            } else {
                kappa = kk.get<std::vector<double>>();
            }
        }

        if (j.contains("rho0_db")) rho0 = db_to_linear(j["rho0_db"].get<double>());
        if (j.contains("d0")) d0 = j["d0"].get<double>();
        if (j.contains("beta_kk")) beta_kk = j["beta_kk"].get<double>();
        if (j.contains("beta_kr")) beta_kr = j["beta_kr"].get<double>();
        if (j.contains("beta_rk")) beta_rk = j["beta_rk"].get<double>();
        if (j.contains("L_kk")) L_kk = j["L_kk"].get<int>();
        if (j.contains("L_kr")) L_kr = j["L_kr"].get<int>();
        if (j.contains("L_rk")) L_rk = j["L_rk"].get<int>();
        if (j.contains("alpha")) alpha = j["alpha"].get<double>();
        if (j.contains("ris_position")) ris_position = parse_vec3(j["ris_position"]);
        if (j.contains("cluster_centers")) {
            const auto& cc = j["cluster_centers"];
            if (!cc.is_array() || cc.size() != 2) throw ConfigError("cluster_centers needs 2 entries");
            cluster_centers = {parse_vec3(cc[0]), parse_vec3(cc[1])};
        }
        if (j.contains("cluster_radius")) cluster_radius = j["cluster_radius"].get<double>();
        if (j.contains("tau")) tau = j["tau"].get<double>();
        if (j.contains("T_max")) T_max = j["T_max"].get<int>();
        if (j.contains("outer_tol")) outer_tol = j["outer_tol"].get<double>();
        if (j.contains("outer_max_iters")) outer_max_iters = j["outer_max_iters"].get<int>();
        if (j.contains("lambda_grid_points")) lambda_grid_points = j["lambda_grid_points"].get<int>();
        if (j.contains("seed")) seed = j["seed"].get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }

    validate();
}

SystemConfig SystemConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    SystemConfig cfg = profile("paper");
    cfg.apply_json(ss.str());
    return cfg;
}

}  // namespace risofdm

#include "bdris/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace bdris {

using nlohmann::json;

namespace {

double ricean_value(const json& v, const std::string& key)
{
    if (v.is_number()) return v.get<double>();
    if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "infinity"))
        return std::numeric_limits<double>::infinity();
    throw ConfigError("'" + key + "' must be a number or \"inf\"");
}

json ricean_json(double k)
{
    if (std::isinf(k)) return "inf";
    return k;
}

Position position(const json& v, const std::string& key)
{
    if (!v.is_array() || v.size() != 3) throw ConfigError("'" + key + "' must be an array of 3 numbers");
    Position p{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (!v[i].is_number()) throw ConfigError("'" + key + "' entries must be numbers");
        p[i] = v[i].get<double>();
    }
    return p;
}

double number(const json& v, const std::string& key)
{
    if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
    return v.get<double>();
}

int positive_int(const json& v, const std::string& key)
{
    if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > std::numeric_limits<int>::max())
        throw ConfigError("'" + key + "' must be a positive integer");
    return v.get<int>();
}

} // namespace

SimulationConfig parse_config(std::string_view json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");

    SimulationConfig cfg;
    ScenarioConfig& sc = cfg.scenario;
    static const std::set<std::string> known{
        "tx_pos", "rx_pos", "ris_pos", "pl0_db", "beta_direct", "beta_ris", "pt_dbm",
        "bandwidth_hz", "noise_figure_db", "ricean_k", "n_t", "n_r", "m", "trials", "seed",
        "pt_sweep_dbm", "k_sweep", "ricean_design", "threads"};

    for (const auto& [key, v] : doc.items()) {
        if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
        if (key == "tx_pos") sc.tx_pos = position(v, key);
        else if (key == "rx_pos") sc.rx_pos = position(v, key);
        else if (key == "ris_pos") sc.ris_pos = position(v, key);
        else if (key == "pl0_db") sc.pl0_db = number(v, key);
        else if (key == "beta_direct") sc.beta_direct = number(v, key);
        else if (key == "beta_ris") sc.beta_ris = number(v, key);
        else if (key == "pt_dbm") sc.pt_dbm = number(v, key);
        else if (key == "bandwidth_hz") sc.bandwidth_hz = number(v, key);
        else if (key == "noise_figure_db") sc.noise_figure_db = number(v, key);
        else if (key == "ricean_k") sc.ricean_k = ricean_value(v, key);
        else if (key == "n_t") sc.n_t = positive_int(v, key);
        else if (key == "n_r") sc.n_r = positive_int(v, key);
        else if (key == "m") sc.m = positive_int(v, key);
        else if (key == "trials") sc.trials = positive_int(v, key);
        else if (key == "seed") {
            if (!v.is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
            sc.seed = v.get<std::uint64_t>();
        } else if (key == "pt_sweep_dbm") {
            if (!v.is_array()) throw ConfigError("'pt_sweep_dbm' must be an array");
            cfg.pt_sweep_dbm.clear();
            for (const auto& x : v) cfg.pt_sweep_dbm.push_back(number(x, key));
        } else if (key == "k_sweep") {
            if (!v.is_array()) throw ConfigError("'k_sweep' must be an array");
            cfg.k_sweep.clear();
            for (const auto& x : v) cfg.k_sweep.push_back(ricean_value(x, key));
        } else if (key == "ricean_design") {
            const std::string s = v.is_string() ? v.get<std::string>() : "";
            if (s == "dominant-rank1") cfg.ricean_design = RiceanDesign::DominantRank1;
            else if (s == "los-component") cfg.ricean_design = RiceanDesign::LosComponent;
            else throw ConfigError("'ricean_design' must be \"dominant-rank1\" or \"los-component\"");
        } else if (key == "threads") {
            if (!v.is_number_unsigned()) throw ConfigError("'threads' must be a non-negative integer");
            cfg.threads = v.get<unsigned>();
        }
    }

    sc.validate();
    for (double k : cfg.k_sweep)
        if (std::isnan(k) || k < 0.0) throw ConfigError("'k_sweep' entries must be >= 0");
    return cfg;
}

SimulationConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string to_json(const SimulationConfig& cfg)
{
    const ScenarioConfig& sc = cfg.scenario;
    json doc;
    doc["tx_pos"] = sc.tx_pos;
    doc["rx_pos"] = sc.rx_pos;
    doc["ris_pos"] = sc.ris_pos;
    doc["pl0_db"] = sc.pl0_db;
    doc["beta_direct"] = sc.beta_direct;
    doc["beta_ris"] = sc.beta_ris;
    doc["pt_dbm"] = sc.pt_dbm;
    doc["bandwidth_hz"] = sc.bandwidth_hz;
    doc["noise_figure_db"] = sc.noise_figure_db;
    doc["ricean_k"] = ricean_json(sc.ricean_k);
    doc["n_t"] = sc.n_t;
    doc["n_r"] = sc.n_r;
    doc["m"] = sc.m;
    doc["trials"] = sc.trials;
    doc["seed"] = sc.seed;
    doc["pt_sweep_dbm"] = cfg.pt_sweep_dbm;
    json ks = json::array();
    for (double k : cfg.k_sweep) ks.push_back(ricean_json(k));
    doc["k_sweep"] = ks;
    doc["ricean_design"] = cfg.ricean_design == RiceanDesign::DominantRank1 ? "dominant-rank1" : "los-component";
    doc["threads"] = cfg.threads;
    return doc.dump(2);
}

} // namespace bdris

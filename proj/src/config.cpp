#include "icct/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace icct {

using nlohmann::json;

namespace {

void reject_unknown(const json& node, const std::string& path, const std::set<std::string>& known) {
    for (const auto& [key, value] : node.items())
        if (!known.count(key)) throw ConfigError("unknown key: " + path + key);
}

double number_at(const json& node, const std::string& path, const std::string& key, double fallback) {
    if (!node.contains(key)) return fallback;
    if (!node[key].is_number()) throw ConfigError(path + key + " must be a number");
    return node[key].get<double>();
}

Matrix matrix_from(const json& node, const std::string& path) {
    if (!node.is_array() || node.empty()) throw ConfigError(path + " must be a nonempty array of rows");
    const size_t n = node.size();
    Matrix m(n, node[0].size());
    for (size_t i = 0; i < n; ++i) {
        if (!node[i].is_array() || node[i].size() != static_cast<size_t>(m.cols()))
            throw ConfigError(path + " rows must have equal length");
        for (size_t j = 0; j < node[i].size(); ++j) {
            if (!node[i][j].is_number()) throw ConfigError(path + " entries must be numbers");
            m(i, j) = node[i][j].get<double>();
        }
    }
    return m;
}

SiteHamiltonian system_from(const json& node) {
    if (!node.is_object()) throw ConfigError("system must be an object");
    const std::string kind = node.value("kind", "sites");
    if (kind == "fmo") {
        reject_unknown(node, "system.", {"kind"});
        return fmo_hamiltonian();
    }
    if (kind == "fmo8") {
        reject_unknown(node, "system.", {"kind", "site8_energy"});
        if (!node.contains("site8_energy")) throw ConfigError("system.site8_energy is required for kind fmo8");
        return fmo_hamiltonian8(node["site8_energy"].get<double>());
    }
    if (kind == "dimer") {
        reject_unknown(node, "system.", {"kind", "theta", "delta_e"});
        return dimer_hamiltonian(number_at(node, "system.", "theta", 0.0),
                                 number_at(node, "system.", "delta_e", 0.0));
    }
    if (kind == "sites") {
        reject_unknown(node, "system.", {"kind", "hamiltonian", "labels"});
        if (!node.contains("hamiltonian")) throw ConfigError("system.hamiltonian is required for kind sites");
        SiteHamiltonian h(matrix_from(node["hamiltonian"], "system.hamiltonian"));
        if (node.contains("labels")) {
            if (!node["labels"].is_array() || node["labels"].size() != static_cast<size_t>(h.h.rows()))
                throw ConfigError("system.labels must list one name per site");
            h.labels.clear();
            for (const auto& l : node["labels"]) h.labels.push_back(l.get<std::string>());
        }
        return h;
    }
    throw ConfigError("system.kind must be one of fmo, fmo8, dimer, sites");
}

// Config files and the command line number sites the way the domain does
// (pigments 1..n); the C++ API is 0-based. Conversion happens here.
std::vector<int> site_list(const json& node, const std::string& path) {
    if (!node.is_array()) throw ConfigError(path + " must be an array of site numbers");
    std::vector<int> out;
    for (const auto& v : node) {
        if (!v.is_number_integer() || v.get<int>() < 1)
            throw ConfigError(path + " entries must be site numbers (1-based)");
        out.push_back(v.get<int>() - 1);
    }
    return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("top level must be an object");
    reject_unknown(doc, "",
                   {"system", "bath", "propagation", "t_final", "initial_site", "partition", "output", "seed"});

    RunConfig cfg;
    if (!doc.contains("system")) throw ConfigError("system block is required");
    cfg.system = system_from(doc["system"]);

    if (doc.contains("bath")) {
        const json& b = doc["bath"];
        if (!b.is_object()) throw ConfigError("bath must be an object");
        reject_unknown(b, "bath.", {"reorganization", "correlation_time", "temperature", "site_correlation"});
        cfg.bath.reorganization = number_at(b, "bath.", "reorganization", cfg.bath.reorganization);
        cfg.bath.correlation_time = number_at(b, "bath.", "correlation_time", cfg.bath.correlation_time);
        cfg.bath.temperature = number_at(b, "bath.", "temperature", cfg.bath.temperature);
        if (b.contains("site_correlation"))
            cfg.bath.site_correlation = matrix_from(b["site_correlation"], "bath.site_correlation");
    }
    if (cfg.bath.temperature <= 0.0) throw ConfigError("bath.temperature must be positive");
    if (cfg.bath.reorganization < 0.0) throw ConfigError("bath.reorganization must be nonnegative");
    if (cfg.bath.correlation_time <= 0.0) throw ConfigError("bath.correlation_time must be positive");
    try {
        cfg.bath.validate(static_cast<int>(cfg.system.h.rows()));
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }

    if (doc.contains("propagation")) {
        const json& p = doc["propagation"];
        if (!p.is_object()) throw ConfigError("propagation must be an object");
        reject_unknown(p, "propagation.",
                       {"depth", "matsubara", "dt", "output_stride", "terminator", "adaptive", "rel_tol"});
        cfg.propagation.depth = static_cast<int>(number_at(p, "propagation.", "depth", cfg.propagation.depth));
        cfg.propagation.matsubara =
            static_cast<int>(number_at(p, "propagation.", "matsubara", cfg.propagation.matsubara));
        cfg.propagation.dt = number_at(p, "propagation.", "dt", cfg.propagation.dt);
        cfg.propagation.output_stride =
            static_cast<int>(number_at(p, "propagation.", "output_stride", cfg.propagation.output_stride));
        if (p.contains("terminator")) cfg.propagation.terminator = p["terminator"].get<bool>();
        if (p.contains("adaptive")) cfg.propagation.adaptive = p["adaptive"].get<bool>();
        cfg.propagation.rel_tol = number_at(p, "propagation.", "rel_tol", cfg.propagation.rel_tol);
        if (cfg.propagation.depth < 0 || cfg.propagation.matsubara < 0)
            throw ConfigError("propagation depth and matsubara count must be nonnegative");
        if (cfg.propagation.dt <= 0.0) throw ConfigError("propagation.dt must be positive");
        if (cfg.propagation.output_stride < 1) throw ConfigError("propagation.output_stride must be >= 1");
    }

    cfg.t_final = number_at(doc, "", "t_final", cfg.t_final);
    if (cfg.t_final <= 0.0) throw ConfigError("t_final must be positive");
    if (doc.contains("initial_site")) {
        if (!doc["initial_site"].is_number_integer()) throw ConfigError("initial_site must be an integer");
        cfg.initial_site = doc["initial_site"].get<int>() - 1;  // sites are numbered from 1
    }
    if (cfg.initial_site < 0 || cfg.initial_site >= cfg.system.h.rows())
        throw ConfigError("initial_site outside the system (sites are numbered from 1)");

    if (doc.contains("partition")) {
        const json& p = doc["partition"];
        if (!p.is_object()) throw ConfigError("partition must be an object");
        reject_unknown(p, "partition.", {"donor", "acceptor"});
        ComplexPartition part;
        part.donor = site_list(p.value("donor", json::array()), "partition.donor");
        part.acceptor = site_list(p.value("acceptor", json::array()), "partition.acceptor");
        try {
            part.validate(static_cast<int>(cfg.system.h.rows()));
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
        cfg.partition = part;
    }

    if (doc.contains("output")) {
        const json& o = doc["output"];
        if (!o.is_object()) throw ConfigError("output must be an object");
        reject_unknown(o, "output.", {"path"});
        cfg.output_path = o.value("path", "");
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
            throw ConfigError("seed must be an integer");
        cfg.seed = doc["seed"].get<uint64_t>();
    }
    return cfg;
}

RunConfig read_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& config) {
    json doc;
    json sys;
    sys["kind"] = "sites";
    json rows = json::array();
    for (Eigen::Index i = 0; i < config.system.h.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < config.system.h.cols(); ++j) row.push_back(config.system.h(i, j));
        rows.push_back(row);
    }
    sys["hamiltonian"] = rows;
    sys["labels"] = config.system.labels;
    doc["system"] = sys;

    json bath;
    bath["reorganization"] = config.bath.reorganization;
    bath["correlation_time"] = config.bath.correlation_time;
    bath["temperature"] = config.bath.temperature;
    if (config.bath.site_correlation.size()) {
        json corr = json::array();
        for (Eigen::Index i = 0; i < config.bath.site_correlation.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index j = 0; j < config.bath.site_correlation.cols(); ++j)
                row.push_back(config.bath.site_correlation(i, j));
            corr.push_back(row);
        }
        bath["site_correlation"] = corr;
    }
    doc["bath"] = bath;

    json prop;
    prop["depth"] = config.propagation.depth;
    prop["matsubara"] = config.propagation.matsubara;
    prop["dt"] = config.propagation.dt;
    prop["output_stride"] = config.propagation.output_stride;
    prop["terminator"] = config.propagation.terminator;
    prop["adaptive"] = config.propagation.adaptive;
    prop["rel_tol"] = config.propagation.rel_tol;
    doc["propagation"] = prop;

    doc["t_final"] = config.t_final;
    doc["initial_site"] = config.initial_site + 1;  // back to 1-based site numbers
    if (config.partition) {
        auto up = [](const std::vector<int>& v) {
            std::vector<int> out;
            for (int i : v) out.push_back(i + 1);
            return out;
        };
        json part;
        part["donor"] = up(config.partition->donor);
        part["acceptor"] = up(config.partition->acceptor);
        doc["partition"] = part;
    }
    if (!config.output_path.empty()) doc["output"] = json{{"path", config.output_path}};
    doc["seed"] = config.seed;
    return doc.dump(2) + "\n";
}

}  // namespace icct

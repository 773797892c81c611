#include "cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace ssep::cli {

void RunConfig::validate() const
{
    try {
        model.validate();
        sim.validate();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (format != "json" && format != "csv")
        throw ConfigError("format must be json or csv, got '" + format + "'");
    const double tols[] = {tolerances.oracle, tolerances.identity, tolerances.balance,
                           tolerances.cycle, tolerances.uniform};
    for (double t : tols)
        if (!(t > 0.0))
            throw ConfigError("tolerances must be positive");
    if (tolerances.max_cycle_len < 3)
        throw ConfigError("max_cycle_len must be at least 3");
}

RunConfig default_config()
{
    RunConfig c;
    c.model = make_params(5, {1.0, 2.0}, {2.0, 1.0}, {1.0, 1.0}, true);
    return c;
}

namespace {

Eigen::VectorXd read_vector(const YAML::Node& node, const std::string& key)
{
    if (!node.IsSequence())
        throw ConfigError(key + " must be a list");
    Eigen::VectorXd v(static_cast<Eigen::Index>(node.size()));
    for (std::size_t i = 0; i < node.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = node[i].as<double>();
    return v;
}

const std::set<std::string> kKeys = {
    "n_sites", "n_types", "alpha", "beta", "delta", "boundary_hops", "seed", "max_events",
    "warmup_fraction", "replicas", "record_trajectory", "format", "output", "oracle_tolerance",
    "identity_tolerance", "balance_tolerance", "cycle_tolerance", "uniform_tolerance",
    "max_cycle_len"};

}  // namespace

RunConfig parse_config(const std::string& text, RunConfig base)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    if (root.IsNull())
        return base;
    if (!root.IsMap())
        throw ConfigError("config must be a flat key/value map");

    RunConfig c = std::move(base);
    bool explicit_types = false;
    try {
        for (const auto& kv : root) {
            const std::string key = kv.first.as<std::string>();
            const YAML::Node& v = kv.second;
            if (!kKeys.contains(key))
                throw ConfigError("unknown config key '" + key + "'");
            if (key == "n_sites") c.model.n_sites = v.as<int>();
            else if (key == "n_types") { c.model.n_types = v.as<int>(); explicit_types = true; }
            else if (key == "alpha") c.model.alpha = read_vector(v, key);
            else if (key == "beta") c.model.beta = read_vector(v, key);
            else if (key == "delta") c.model.delta = read_vector(v, key);
            else if (key == "boundary_hops") c.model.boundary_hops = v.as<bool>();
            else if (key == "seed") c.sim.seed = v.as<std::uint64_t>();
            else if (key == "max_events") c.sim.max_events = v.as<std::uint64_t>();
            else if (key == "warmup_fraction") c.sim.warmup_fraction = v.as<double>();
            else if (key == "replicas") c.sim.replicas = v.as<int>();
            else if (key == "record_trajectory") c.sim.record_trajectory = v.as<bool>();
            else if (key == "format") c.format = v.as<std::string>();
            else if (key == "output") c.output = v.as<std::string>();
            else if (key == "oracle_tolerance") c.tolerances.oracle = v.as<double>();
            else if (key == "identity_tolerance") c.tolerances.identity = v.as<double>();
            else if (key == "balance_tolerance") c.tolerances.balance = v.as<double>();
            else if (key == "cycle_tolerance") c.tolerances.cycle = v.as<double>();
            else if (key == "uniform_tolerance") c.tolerances.uniform = v.as<double>();
            else if (key == "max_cycle_len") c.tolerances.max_cycle_len = v.as<int>();
        }
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    if (!explicit_types)
        c.model.n_types = static_cast<int>(c.model.alpha.size());
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path, RunConfig base)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), std::move(base));
}

std::string emit_config(const RunConfig& c)
{
    auto list = [](YAML::Emitter& out, const Eigen::VectorXd& v) {
        out << YAML::Flow << YAML::BeginSeq;
        for (Eigen::Index i = 0; i < v.size(); ++i)
            out << v(i);
        out << YAML::EndSeq;
    };
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "n_sites" << YAML::Value << c.model.n_sites;
    out << YAML::Key << "n_types" << YAML::Value << c.model.n_types;
    out << YAML::Key << "alpha" << YAML::Value;
    list(out, c.model.alpha);
    out << YAML::Key << "beta" << YAML::Value;
    list(out, c.model.beta);
    out << YAML::Key << "delta" << YAML::Value;
    list(out, c.model.delta);
    out << YAML::Key << "boundary_hops" << YAML::Value << c.model.boundary_hops;
    out << YAML::Key << "seed" << YAML::Value << c.sim.seed;
    out << YAML::Key << "max_events" << YAML::Value << c.sim.max_events;
    out << YAML::Key << "warmup_fraction" << YAML::Value << c.sim.warmup_fraction;
    out << YAML::Key << "replicas" << YAML::Value << c.sim.replicas;
    out << YAML::Key << "record_trajectory" << YAML::Value << c.sim.record_trajectory;
    out << YAML::Key << "format" << YAML::Value << c.format;
    out << YAML::Key << "output" << YAML::Value << c.output;
    out << YAML::Key << "oracle_tolerance" << YAML::Value << c.tolerances.oracle;
    out << YAML::Key << "identity_tolerance" << YAML::Value << c.tolerances.identity;
    out << YAML::Key << "balance_tolerance" << YAML::Value << c.tolerances.balance;
    out << YAML::Key << "cycle_tolerance" << YAML::Value << c.tolerances.cycle;
    out << YAML::Key << "uniform_tolerance" << YAML::Value << c.tolerances.uniform;
    out << YAML::Key << "max_cycle_len" << YAML::Value << c.tolerances.max_cycle_len;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace ssep::cli

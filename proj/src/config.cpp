#include "nuelab/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace nuelab {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& v, const std::string& key, int line) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line) + ": value of '" + key +
                         "' is not a number: '" + v + "'");
    }
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    bool saw_system = false;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const size_t hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        const size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ParseError(origin + " line " + std::to_string(line) + ": expected key=value");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ParseError(origin + " line " + std::to_string(line) + ": empty key or value");

        if (key == "system.name") {
            cfg.system_name = val;
            saw_system = true;
        } else if (key.rfind("system.", 0) == 0) {
            cfg.system_params[key.substr(7)] = parse_double(val, key, line);
        } else if (key == "kernel.mode") {
            if (val == "additive")
                cfg.kernel_mode = NoiseKernel::Mode::Additive;
            else if (val == "rotational")
                cfg.kernel_mode = NoiseKernel::Mode::Rotational;
            else
                throw ParseError(origin + " line " + std::to_string(line) +
                                 ": kernel.mode must be additive or rotational");
        } else if (key == "kernel.epsilons") {
            cfg.epsilons.clear();
            std::istringstream vs(val);
            std::string item;
            while (std::getline(vs, item, ',')) {
                item = trim(item);
                if (!item.empty()) cfg.epsilons.push_back(parse_double(item, key, line));
            }
        } else if (key == "hyp.alpha") {
            cfg.hyp_alpha = parse_double(val, key, line);
        } else if (key == "hyp.delta") {
            cfg.hyp_delta = parse_double(val, key, line);
        } else if (key == "thresholds.expansion_c") {
            cfg.expansion_c = parse_double(val, key, line);
        } else if (key == "thresholds.recurrence_gamma") {
            cfg.recurrence_gamma = parse_double(val, key, line);
        } else if (key == "thresholds.cluster_merge") {
            cfg.cluster_merge = parse_double(val, key, line);
        } else if (key == "thresholds.stability_tol") {
            cfg.stability_tol = parse_double(val, key, line);
        } else if (key == "budgets.orbit_len") {
            cfg.orbit_len = static_cast<int64_t>(parse_double(val, key, line));
        } else if (key == "budgets.samples") {
            cfg.samples = static_cast<int64_t>(parse_double(val, key, line));
        } else if (key == "budgets.starts") {
            cfg.starts = static_cast<int>(parse_double(val, key, line));
        } else if (key == "budgets.n_max") {
            cfg.n_max = static_cast<int>(parse_double(val, key, line));
        } else if (key == "budgets.seed") {
            cfg.seed = static_cast<uint64_t>(parse_double(val, key, line));
        } else if (key == "budgets.tail_cutoff") {
            cfg.tail_cutoff = static_cast<int>(parse_double(val, key, line));
        } else if (key == "budgets.bins") {
            cfg.bins = static_cast<int>(parse_double(val, key, line));
        } else if (key == "output.dir") {
            cfg.out_dir = val;
        } else {
            throw ParseError(origin + " line " + std::to_string(line) + ": unknown key '" +
                             key + "'");
        }
    }
    if (!saw_system) throw ParseError(origin + ": missing required key system.name");
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config_text(buf.str(), path);
}

void ExperimentConfig::validate() const {
    std::vector<std::string> bad;
    if (epsilons.empty()) bad.push_back("kernel.epsilons must list at least one level");
    for (size_t i = 0; i + 1 < epsilons.size(); ++i)
        if (!(epsilons[i] > epsilons[i + 1]))
            bad.push_back("kernel.epsilons must be strictly decreasing");
    for (double e : epsilons)
        if (e < 0.0) bad.push_back("kernel.epsilons must be nonnegative");
    if (!(hyp_alpha > 0.0 && hyp_alpha < 1.0)) bad.push_back("hyp.alpha must lie in (0, 1)");
    if (!(hyp_delta > 0.0)) bad.push_back("hyp.delta must be positive");
    if (!(expansion_c > 0.0)) bad.push_back("thresholds.expansion_c must be positive");
    if (!(recurrence_gamma > 0.0)) bad.push_back("thresholds.recurrence_gamma must be positive");
    if (!(cluster_merge > 0.0)) bad.push_back("thresholds.cluster_merge must be positive");
    if (!(stability_tol > 0.0)) bad.push_back("thresholds.stability_tol must be positive");
    if (orbit_len < 1) bad.push_back("budgets.orbit_len must be at least 1");
    if (samples < 1) bad.push_back("budgets.samples must be at least 1");
    if (starts < 1) bad.push_back("budgets.starts must be at least 1");
    if (n_max < 1) bad.push_back("budgets.n_max must be at least 1");
    if (tail_cutoff < 1) bad.push_back("budgets.tail_cutoff must be at least 1");
    if (bins < 2) bad.push_back("budgets.bins must be at least 2");
    if (!bad.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& b : bad) msg += "\n  - " + b;
        throw ValidationError(msg);
    }
}

SystemPtr ExperimentConfig::make_system() const { return build_system(system_name, system_params); }

NoiseKernel ExperimentConfig::make_kernel(double epsilon, int domain_dim) const {
    if (kernel_mode == NoiseKernel::Mode::Rotational) return NoiseKernel::rotational(epsilon);
    return NoiseKernel::additive(epsilon, domain_dim);
}

} // namespace nuelab

#include "eqsim/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace eqsim {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw config_error("");
        return v;
    } catch (const std::exception&) {
        throw config_error("config: key '" + key + "' expects a real number, got '" + value + "'");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw config_error("");
        return v;
    } catch (const std::exception&) {
        throw config_error("config: key '" + key + "' expects an integer, got '" + value + "'");
    }
}

std::uint64_t parse_uint64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw config_error("");
        return v;
    } catch (const std::exception&) {
        throw config_error("config: key '" + key + "' expects an unsigned integer, got '" + value +
                           "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw config_error("config: key '" + key + "' expects true/false, got '" + value + "'");
}

std::vector<std::string> split_commas(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

FactorStateSpec parse_factor(const std::string& key, const std::string& value) {
    FactorStateSpec spec;
    if (value == "haar") return spec;
    if (value.rfind("basis:", 0) == 0) {
        spec.haar = false;
        spec.basis_index = static_cast<int>(parse_int(key, value.substr(6)));
        return spec;
    }
    throw config_error("config: key '" + key + "' expects haar or basis:<k>, got '" + value + "'");
}

std::string factor_to_string(const FactorStateSpec& spec) {
    return spec.haar ? "haar" : "basis:" + std::to_string(spec.basis_index);
}

void apply_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
    if (key == "system.d_S") {
        c.d_S = static_cast<int>(parse_int(key, value));
    } else if (key == "system.d_B") {
        c.d_B = static_cast<int>(parse_int(key, value));
    } else if (key == "hamiltonian.kind") {
        if (value == "gue_global") c.hamiltonian_kind = HamiltonianKind::gue_global;
        else if (value == "composed") c.hamiltonian_kind = HamiltonianKind::composed;
        else throw config_error("config: unknown hamiltonian.kind '" + value + "'");
    } else if (key == "hamiltonian.lambda") {
        c.lambda = parse_double(key, value);
    } else if (key == "hamiltonian.parts_kind") {
        if (value == "gue") c.parts_kind = PartsKind::gue;
        else if (value == "gue_bath_only") c.parts_kind = PartsKind::gue_bath_only;
        else throw config_error("config: unknown hamiltonian.parts_kind '" + value + "'");
    } else if (key == "state.kind") {
        if (value == "haar_global") c.initial_state_kind = StateKind::haar_global;
        else if (value == "product") c.initial_state_kind = StateKind::product;
        else if (value == "eigenstate") c.initial_state_kind = StateKind::eigenstate;
        else throw config_error("config: unknown state.kind '" + value + "'");
    } else if (key == "state.eigenstate_index") {
        c.eigenstate_index = static_cast<int>(parse_int(key, value));
    } else if (key == "state.sys") {
        c.sys_state = parse_factor(key, value);
    } else if (key == "state.bath") {
        c.bath_state = parse_factor(key, value);
    } else if (key == "seed") {
        c.seed = parse_uint64(key, value);
    } else if (key == "grid.kind") {
        if (value == "random") c.grid_kind = GridKind::random;
        else if (value == "equispaced") c.grid_kind = GridKind::equispaced;
        else throw config_error("config: unknown grid.kind '" + value + "'");
    } else if (key == "grid.horizon") {
        if (value == "auto") c.horizon = 0.0;
        else c.horizon = parse_double(key, value);
    } else if (key == "grid.n") {
        c.grid_n = static_cast<int>(parse_int(key, value));
    } else if (key == "trials.count") {
        c.num_trials = static_cast<int>(parse_int(key, value));
    } else if (key == "trials.redraw_on_gap_failure") {
        c.redraw_on_gap_failure = parse_bool(key, value);
    } else if (key == "bounds.check") {
        c.check_distance = c.check_speed = c.check_fraction = c.check_variance = false;
        if (value != "none")
            for (const auto& item : split_commas(value)) {
                if (item == "distance") c.check_distance = true;
                else if (item == "speed") c.check_speed = true;
                else if (item == "fraction") c.check_fraction = true;
                else if (item == "variance") c.check_variance = true;
                else throw config_error("config: unknown bound '" + item + "' in bounds.check");
            }
    } else if (key == "bounds.fraction_K") {
        c.fraction_k.clear();
        for (const auto& item : split_commas(value)) c.fraction_k.push_back(parse_double(key, item));
    } else if (key == "bounds.variance_observables") {
        c.variance_observables = static_cast<int>(parse_int(key, value));
    } else if (key == "output.dir") {
        c.output_dir = value;
    } else if (key == "limits.max_dimension") {
        c.max_dimension = static_cast<int>(parse_int(key, value));
    } else {
        throw config_error("config: unknown key '" + key + "'");
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    if (d_S < 2) throw config_error("config: system.d_S must be >= 2");
    if (d_B < 1) throw config_error("config: system.d_B must be >= 1");
    if (max_dimension < 2) throw config_error("config: limits.max_dimension must be >= 2");
    if (total_dimension() > max_dimension)
        throw config_error("config: total dimension " + std::to_string(total_dimension()) +
                           " exceeds limits.max_dimension " + std::to_string(max_dimension));
    if (horizon < 0 || !std::isfinite(horizon))
        throw config_error("config: grid.horizon must be positive or auto");
    if (grid_n < 2) throw config_error("config: grid.n must be >= 2");
    if (num_trials < 1) throw config_error("config: trials.count must be >= 1");
    if (initial_state_kind == StateKind::eigenstate &&
        (eigenstate_index < 0 || eigenstate_index >= total_dimension()))
        throw config_error("config: state.eigenstate_index out of range");
    if (!sys_state.haar && (sys_state.basis_index < 0 || sys_state.basis_index >= d_S))
        throw config_error("config: state.sys basis index out of range");
    if (!bath_state.haar && (bath_state.basis_index < 0 || bath_state.basis_index >= d_B))
        throw config_error("config: state.bath basis index out of range");
    if (check_fraction) {
        if (fraction_k.empty()) throw config_error("config: bounds.fraction_K must be nonempty");
        for (double k : fraction_k)
            if (!(k > 1.0)) throw config_error("config: bounds.fraction_K values must exceed 1");
    }
    if (check_variance && variance_observables < 1)
        throw config_error("config: bounds.variance_observables must be >= 1");
    if (output_dir.empty()) throw config_error("config: output.dir must be nonempty");
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig config;
    std::set<std::string> seen;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw config_error("config: line " + std::to_string(line_no) +
                               " is not of the form key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) throw config_error("config: empty key on line " + std::to_string(line_no));
        if (!seen.insert(key).second)
            throw config_error("config: duplicate key '" + key + "'");
        apply_key(config, key, value);
    }
    return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out.precision(17);
    out << "system.d_S = " << c.d_S << "\n";
    out << "system.d_B = " << c.d_B << "\n";
    out << "hamiltonian.kind = "
        << (c.hamiltonian_kind == HamiltonianKind::gue_global ? "gue_global" : "composed") << "\n";
    out << "hamiltonian.lambda = " << c.lambda << "\n";
    out << "hamiltonian.parts_kind = "
        << (c.parts_kind == PartsKind::gue ? "gue" : "gue_bath_only") << "\n";
    switch (c.initial_state_kind) {
        case StateKind::haar_global: out << "state.kind = haar_global\n"; break;
        case StateKind::product: out << "state.kind = product\n"; break;
        case StateKind::eigenstate: out << "state.kind = eigenstate\n"; break;
    }
    out << "state.eigenstate_index = " << c.eigenstate_index << "\n";
    out << "state.sys = " << factor_to_string(c.sys_state) << "\n";
    out << "state.bath = " << factor_to_string(c.bath_state) << "\n";
    out << "seed = " << c.seed << "\n";
    out << "grid.kind = " << (c.grid_kind == GridKind::random ? "random" : "equispaced") << "\n";
    if (c.horizon == 0.0) out << "grid.horizon = auto\n";
    else out << "grid.horizon = " << c.horizon << "\n";
    out << "grid.n = " << c.grid_n << "\n";
    out << "trials.count = " << c.num_trials << "\n";
    out << "trials.redraw_on_gap_failure = " << (c.redraw_on_gap_failure ? "true" : "false")
        << "\n";
    std::string checks;
    if (c.check_distance) checks += "distance,";
    if (c.check_speed) checks += "speed,";
    if (c.check_fraction) checks += "fraction,";
    if (c.check_variance) checks += "variance,";
    if (checks.empty()) checks = "none";
    else checks.pop_back();
    out << "bounds.check = " << checks << "\n";
    out << "bounds.fraction_K = ";
    for (std::size_t i = 0; i < c.fraction_k.size(); ++i)
        out << (i ? "," : "") << c.fraction_k[i];
    out << "\n";
    out << "bounds.variance_observables = " << c.variance_observables << "\n";
    out << "output.dir = " << c.output_dir << "\n";
    out << "limits.max_dimension = " << c.max_dimension << "\n";
    return out.str();
}

}  // namespace eqsim

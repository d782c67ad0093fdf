#include "fanodho/run_config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fanodho {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw std::invalid_argument("RunConfig: bad numeric value for " + key + ": '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw std::invalid_argument("RunConfig: bad integer value for " + key + ": '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    throw std::invalid_argument("RunConfig: bad boolean value for " + key + ": '" + v + "'");
}

} // namespace

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("RunConfig: cannot open " + path);
    RunConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line.erase(hash_pos);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream msg;
            msg << "RunConfig: " << path << ":" << lineno << ": expected key = value";
            throw std::invalid_argument(msg.str());
        }
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (key == "model.mass") mass = parse_double(key, value);
    else if (key == "model.omega0") omega0 = parse_double(key, value);
    else if (key == "model.gamma") gamma = parse_double(key, value);
    else if (key == "model.cutoff") cutoff = parse_double(key, value);
    else if (key == "model.kT") kT = parse_double(key, value);
    else if (key == "model.hbar") hbar = parse_double(key, value);
    else if (key == "bath.kind") bath_kind = value;
    else if (key == "bath.table") bath_table = value;
    else if (key == "flags.counter_term") counter_term = parse_bool(key, value);
    else if (key == "flags.rwa") rwa = parse_bool(key, value);
    else if (key == "flags.limit") limit_mode = parse_bool(key, value);
    else if (key == "grid.omega_min") omega_min = parse_double(key, value);
    else if (key == "grid.omega_max") omega_max = parse_double(key, value);
    else if (key == "grid.omega_points") omega_points = parse_u64(key, value);
    else if (key == "grid.t_min") t_min = parse_double(key, value);
    else if (key == "grid.t_max") t_max = parse_double(key, value);
    else if (key == "grid.t_points") t_points = parse_u64(key, value);
    else if (key == "ensemble.modes") bath_modes = parse_u64(key, value);
    else if (key == "ensemble.samples") n_samples = parse_u64(key, value);
    else if (key == "ensemble.dt") dt = parse_double(key, value);
    else if (key == "ensemble.omega_max") bath_omega_max = parse_double(key, value);
    else if (key == "ensemble.seed") seed = parse_u64(key, value);
    else if (key == "ensemble.ic") ic_variant = value;
    else if (key == "ensemble.q0") q0 = parse_double(key, value);
    else if (key == "ensemble.p0") p0 = parse_double(key, value);
    else if (key == "output.format") format = value;
    else if (key == "output.path") out_path = value;
    else throw std::invalid_argument("RunConfig: unknown key '" + key + "'");
}

void RunConfig::validate() const {
    params().validate();
    spectrum().validate();
    if (format != "csv" && format != "json")
        throw std::invalid_argument("RunConfig: output.format must be csv or json");
    if (ic_variant != "bare" && ic_variant != "shifted")
        throw std::invalid_argument("RunConfig: ensemble.ic must be bare or shifted");
    if (omega_points < 2 || t_points < 1)
        throw std::invalid_argument("RunConfig: grids need at least 2 omega / 1 t points");
    if (t_max < t_min) throw std::invalid_argument("RunConfig: grid.t_max must be >= grid.t_min");
    if (rwa && limit_mode && !counter_term)
        throw std::invalid_argument("RunConfig: the rwa limit mode requires the counter-term");
}

std::string format_double(double v) {
    if (v == 0.0) return "0"; // fold negative zero
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string RunConfig::canonical() const {
    std::ostringstream os;
    os << "model.mass=" << format_double(mass) << '\n'
       << "model.omega0=" << format_double(omega0) << '\n'
       << "model.gamma=" << format_double(gamma) << '\n'
       << "model.cutoff=" << format_double(cutoff) << '\n'
       << "model.kT=" << format_double(kT) << '\n'
       << "model.hbar=" << format_double(hbar) << '\n'
       << "bath.kind=" << bath_kind << '\n'
       << "bath.table=" << bath_table << '\n'
       << "flags.counter_term=" << counter_term << '\n'
       << "flags.rwa=" << rwa << '\n'
       << "flags.limit=" << limit_mode << '\n'
       << "grid.omega_min=" << format_double(omega_min) << '\n'
       << "grid.omega_max=" << format_double(omega_max) << '\n'
       << "grid.omega_points=" << omega_points << '\n'
       << "grid.t_min=" << format_double(t_min) << '\n'
       << "grid.t_max=" << format_double(t_max) << '\n'
       << "grid.t_points=" << t_points << '\n'
       << "ensemble.modes=" << bath_modes << '\n'
       << "ensemble.samples=" << n_samples << '\n'
       << "ensemble.dt=" << format_double(dt) << '\n'
       << "ensemble.omega_max=" << format_double(bath_omega_max) << '\n'
       << "ensemble.seed=" << seed << '\n'
       << "ensemble.ic=" << ic_variant << '\n'
       << "ensemble.q0=" << format_double(q0) << '\n'
       << "ensemble.p0=" << format_double(p0) << '\n'
       << "output.format=" << format << '\n';
    return os.str();
}

std::uint64_t RunConfig::hash() const {
    const std::string s = canonical();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

BathSpectrum RunConfig::spectrum() const {
    if (bath_kind == "drude")
        return limit_mode ? BathSpectrum::ohmic_limit(gamma) : BathSpectrum::drude(gamma, cutoff);
    if (bath_kind == "ohmic-sharp") {
        if (limit_mode) return BathSpectrum::ohmic_limit(gamma);
        return BathSpectrum::ohmic_sharp(gamma, cutoff);
    }
    if (bath_kind == "tabulated") {
        if (bath_table.empty())
            throw std::invalid_argument("RunConfig: bath.kind=tabulated requires bath.table");
        return BathSpectrum::from_csv(bath_table, gamma);
    }
    throw std::invalid_argument("RunConfig: unknown bath.kind '" + bath_kind + "'");
}

ModelParams RunConfig::params() const {
    ModelParams p;
    p.mass = mass;
    p.omega0 = omega0;
    p.gamma = gamma;
    p.cutoff = cutoff;
    p.kT = kT;
    p.hbar = hbar;
    return p;
}

} // namespace fanodho

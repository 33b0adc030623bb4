#include "ckdv/cli.hpp"

#include "ckdv/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ckdv {

namespace {

const std::vector<std::string> commands{"soliton", "residual-sweep", "theorem1", "ckdv", "boussinesq", "selftest"};

double parse_real(const std::string& key, const std::string& text)
{
    double x = 0.0;
    const char* b = text.data();
    const char* e = b + text.size();
    while (b < e && *b == ' ') ++b;
    while (e > b && e[-1] == ' ') --e;
    const auto [p, ec] = std::from_chars(b, e, x);
    if (ec != std::errc() || p != e) throw ConfigError("'" + key + "': not a number: '" + text + "'");
    return x;
}

std::uint64_t parse_count(const std::string& key, const std::string& text)
{
    std::uint64_t x = 0;
    const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc() || p != text.data() + text.size()) {
        throw ConfigError("'" + key + "': not a non-negative integer: '" + text + "'");
    }
    return x;
}

bool parse_bool(const std::string& key, const std::string& text)
{
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError("'" + key + "': not a boolean: '" + text + "'");
}

std::string join(const std::vector<double>& xs)
{
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + format_real(xs[i]);
    return s;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table{
        {"run.command", [](auto& c, auto&, auto& v) { c.command = v; }},
        {"run.out", [](auto& c, auto&, auto& v) { c.out = v; }},
        {"run.seed", [](auto& c, auto& k, auto& v) { c.seed = parse_count(k, v); }},
        {"run.quiet", [](auto& c, auto& k, auto& v) { c.quiet = parse_bool(k, v); }},
        {"grid.n", [](auto& c, auto& k, auto& v) { c.n = static_cast<std::size_t>(parse_count(k, v)); }},
        {"grid.length", [](auto& c, auto& k, auto& v) { c.length = parse_real(k, v); }},
        {"model.eps", [](auto& c, auto&, auto& v) { c.eps = parse_real_list(v); }},
        {"model.rho0", [](auto& c, auto& k, auto& v) { c.rho0 = parse_real(k, v); }},
        {"model.rho1", [](auto& c, auto& k, auto& v) { c.rho1 = parse_real(k, v); }},
        {"model.alpha", [](auto& c, auto& k, auto& v) { c.alpha = parse_real(k, v); }},
        {"model.beta", [](auto& c, auto& k, auto& v) { c.beta = parse_real(k, v); }},
        {"model.offset", [](auto& c, auto& k, auto& v) { c.offset = parse_real(k, v); }},
        {"model.amplitude", [](auto& c, auto& k, auto& v) { c.amplitude = parse_real(k, v); }},
        {"model.width", [](auto& c, auto& k, auto& v) { c.width = parse_real(k, v); }},
        {"model.rhos", [](auto& c, auto&, auto& v) { c.rhos = parse_real_list(v); }},
        {"model.times", [](auto& c, auto&, auto& v) { c.times = parse_real_list(v); }},
        {"solver.d_rho", [](auto& c, auto& k, auto& v) { c.d_rho = parse_real(k, v); }},
        {"solver.dr", [](auto& c, auto& k, auto& v) { c.dr = parse_real(k, v); }},
        {"solver.rhs_tol", [](auto& c, auto& k, auto& v) { c.rhs_tol = parse_real(k, v); }},
        {"solver.dealias", [](auto& c, auto& k, auto& v) { c.dealias = parse_bool(k, v); }},
        {"solver.energy_bound", [](auto& c, auto& k, auto& v) { c.energy_bound = parse_real(k, v); }},
        {"solver.slope_tol", [](auto& c, auto& k, auto& v) { c.slope_tol = parse_real(k, v); }},
        {"debug.flip_b2_sign", [](auto& c, auto& k, auto& v) { c.flip_b2_sign = parse_bool(k, v); }},
    };
    return table;
}

} // namespace

std::string format_real(double x)
{
    if (std::isnan(x)) return "nan";
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc() ? std::string(buf, p) : std::string("nan");
}

std::vector<double> parse_real_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(' ') == std::string::npos) continue;
        out.push_back(parse_real("list", item));
    }
    return out;
}

ExperimentConfig default_config(const std::string& command)
{
    ExperimentConfig c;
    c.command = command;
    if (command == "soliton") {
        c.eps = {0.1};
    } else if (command == "residual-sweep") {
        c.eps = {0.2, 0.14, 0.1, 0.07};
        c.length = 80.0;
        c.width = 2.0;
    } else if (command == "ckdv") {
        c.rho1 = 2.0;
        c.rhos = {1.25, 1.5, 1.75};
    } else if (command == "boussinesq") {
        c.eps = {0.1};
    }
    return c;
}

void validate(const ExperimentConfig& c)
{
    if (std::find(commands.begin(), commands.end(), c.command) == commands.end()) {
        throw ConfigError("unknown command '" + c.command + "'");
    }
    if (c.n < 8 || c.n % 2 != 0) throw ConfigError("grid.n must be even and at least 8");
    if (!(c.length > 0.0)) throw ConfigError("grid.length must be positive");
    const bool uses_eps = c.command != "ckdv" && c.command != "selftest";
    if (uses_eps && c.eps.empty()) throw ConfigError("model.eps is empty");
    for (double e : c.eps) {
        if (!(e > 0.0) || e > 0.3) throw ConfigError("every eps must lie in (0, 0.3]");
    }
    if (!(c.rho0 > 0.0) || !(c.rho1 > c.rho0)) throw ConfigError("need 0 < rho0 < rho1");
    if (!(c.alpha >= 0.0) || c.alpha * c.beta < 0.0) throw ConfigError("need alpha >= 0 and alpha*beta >= 0");
    if (!(c.offset > 0.0)) throw ConfigError("model.offset must be positive");
    if (!(c.width > 0.0)) throw ConfigError("model.width must be positive");
    for (double r : c.rhos) {
        if (!(r > 0.0)) throw ConfigError("model.rhos must be positive");
    }
    for (double t : c.times) {
        if (!(t > 0.0)) throw ConfigError("model.times must be positive");
    }
    if (!(c.d_rho > 0.0) || !(c.dr > 0.0)) throw ConfigError("step sizes must be positive");
    if (!(c.rhs_tol > 0.0)) throw ConfigError("solver.rhs_tol must be positive");
    if (!(c.energy_bound > 0.0) || !(c.slope_tol > 0.0)) throw ConfigError("bounds must be positive");
}

std::string to_ini(const ExperimentConfig& c)
{
    std::ostringstream o;
    o << "[run]\n"
      << "command = " << c.command << "\n"
      << "out = " << c.out << "\n"
      << "seed = " << c.seed << "\n"
      << "quiet = " << (c.quiet ? "true" : "false") << "\n\n"
      << "[grid]\n"
      << "n = " << c.n << "\n"
      << "length = " << format_real(c.length) << "\n\n"
      << "[model]\n"
      << "eps = " << join(c.eps) << "\n"
      << "rho0 = " << format_real(c.rho0) << "\n"
      << "rho1 = " << format_real(c.rho1) << "\n"
      << "alpha = " << format_real(c.alpha) << "\n"
      << "beta = " << format_real(c.beta) << "\n"
      << "offset = " << format_real(c.offset) << "\n"
      << "amplitude = " << format_real(c.amplitude) << "\n"
      << "width = " << format_real(c.width) << "\n"
      << "rhos = " << join(c.rhos) << "\n"
      << "times = " << join(c.times) << "\n\n"
      << "[solver]\n"
      << "d_rho = " << format_real(c.d_rho) << "\n"
      << "dr = " << format_real(c.dr) << "\n"
      << "rhs_tol = " << format_real(c.rhs_tol) << "\n"
      << "dealias = " << (c.dealias ? "true" : "false") << "\n"
      << "energy_bound = " << format_real(c.energy_bound) << "\n"
      << "slope_tol = " << format_real(c.slope_tol) << "\n\n"
      << "[debug]\n"
      << "flip_b2_sign = " << (c.flip_b2_sign ? "true" : "false") << "\n";
    return o.str();
}

ExperimentConfig from_ini(const std::string& text, ExperimentConfig base)
{
    boost::property_tree::ptree tree;
    std::istringstream in(text);
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) throw ConfigError("key '" + section + "' outside a section");
        for (const auto& [key, value] : body) {
            const std::string full = section + "." + key;
            auto it = setters().find(full);
            if (it == setters().end()) throw ConfigError("unknown config key '" + full + "'");
            it->second(base, full, value.data());
        }
    }
    return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_ini(ss.str(), std::move(base));
}

std::string config_hash(const ExperimentConfig& cfg)
{
    // where the files go and how much is printed do not change the results
    ExperimentConfig key = cfg;
    key.out.clear();
    key.quiet = false;
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : to_ini(key)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::string> manifest_lines(const ExperimentConfig& cfg)
{
    return {
        "ckdvlab " + std::string(library_version),
        "command: " + cfg.command,
        "config_hash: fnv1a64:" + config_hash(cfg),
        "modules: grid_spectral airy soliton ckdv boussinesq residual cli @ " + std::string(library_version),
        "grid: n=" + std::to_string(cfg.n) + " length=" + format_real(cfg.length),
        "tolerances: rhs_tol=" + format_real(cfg.rhs_tol) + " d_rho=" + format_real(cfg.d_rho) +
            " dr=" + format_real(cfg.dr) + " slope_tol=" + format_real(cfg.slope_tol),
        "seed: " + std::to_string(cfg.seed),
    };
}

} // namespace ckdv

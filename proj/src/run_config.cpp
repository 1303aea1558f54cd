#include "covert/run_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace covert::cli {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

bool ends_with_ci(const std::string& s, std::string_view suffix) {
    if (s.size() < suffix.size()) return false;
    return std::equal(suffix.rbegin(), suffix.rend(), s.rbegin(), [](char a, char b) {
        return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
    });
}

double parse_double(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ConfigError(key, "expected a number, got '" + s + "'");
    }
    return v;
}

std::int64_t parse_int(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError(key, "expected an integer, got '" + s + "'");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError(key, "expected an unsigned 64-bit integer, got '" + s + "'");
    }
    return v;
}

double parse_power(const std::string& key, const std::string& raw, Units units) {
    std::string s = trim(raw);
    if (ends_with_ci(s, "dbm")) return dbm_to_linear(parse_double(key, s.substr(0, s.size() - 3)));
    if (ends_with_ci(s, "lin")) return parse_double(key, s.substr(0, s.size() - 3));
    const double v = parse_double(key, s);
    return units == Units::Dbm ? dbm_to_linear(v) : v;
}

// Removes floating noise from range arithmetic (0.1 + 2 * 0.05 and friends).
double tidy(double v) {
    if (v == 0.0) return 0.0;
    const double scale = std::pow(10.0, 12 - static_cast<int>(std::ceil(std::log10(std::abs(v)))));
    return std::round(v * scale) / scale;
}

std::vector<double> expand_range(const std::string& key, double start, double step, double stop) {
    if (!(step > 0.0)) throw ConfigError(key, "range step must be positive");
    if (stop < start) throw ConfigError(key, "range stop must not precede start");
    const double span = (stop - start) / step;
    const auto count = static_cast<std::int64_t>(std::floor(span + 1e-9)) + 1;
    if (count > 1000000) throw ConfigError(key, "range has too many points");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) out.push_back(tidy(start + i * step));
    return out;
}

std::vector<double> parse_real_list(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty()) throw ConfigError(key, "empty list");
    if (s.find(':') != std::string::npos) {
        const auto parts = split(s, ':');
        if (parts.size() != 3) throw ConfigError(key, "range must be start:step:stop");
        return expand_range(key, parse_double(key, parts[0]), parse_double(key, parts[1]),
                            parse_double(key, parts[2]));
    }
    std::vector<double> out;
    for (const auto& item : split(s, ',')) out.push_back(parse_double(key, item));
    return out;
}

std::vector<double> parse_power_list(const std::string& key, const std::string& raw, Units units) {
    std::vector<double> out;
    for (const auto& item : split(trim(raw), ',')) out.push_back(parse_power(key, item, units));
    if (out.empty()) throw ConfigError(key, "empty list");
    return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty()) throw ConfigError(key, "empty list");
    std::vector<int> out;
    if (s.find(':') != std::string::npos) {
        const auto parts = split(s, ':');
        if (parts.size() != 3) throw ConfigError(key, "range must be start:step:stop");
        const auto start = parse_int(key, parts[0]);
        const auto step = parse_int(key, parts[1]);
        const auto stop = parse_int(key, parts[2]);
        if (step <= 0 || stop < start) throw ConfigError(key, "invalid integer range");
        for (auto v = start; v <= stop; v += step) out.push_back(static_cast<int>(v));
        return out;
    }
    for (const auto& item : split(s, ',')) {
        const auto v = parse_int(key, item);
        if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
            throw ConfigError(key, "integer out of range");
        }
        out.push_back(static_cast<int>(v));
    }
    return out;
}

template <typename T>
void check_sorted_unique(const std::string& key, const std::vector<T>& grid) {
    if (grid.empty()) throw ConfigError(key, "grid must not be empty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i - 1] < grid[i])) throw ConfigError(key, "grid must be strictly increasing");
    }
}

void check_open_unit(const std::string& key, const std::vector<double>& grid) {
    check_sorted_unique(key, grid);
    for (double v : grid) {
        if (!(v > 0.0 && v < 1.0)) throw ConfigError(key, "values must lie in (0, 1)");
    }
}

void check_slot_lengths(const std::string& key, const std::vector<int>& grid) {
    check_sorted_unique(key, grid);
    for (int v : grid) {
        if (v < 2) throw ConfigError(key, "slot lengths must be >= 2");
    }
}

using Handler = void (*)(RunConfig&, const std::string& key, const std::string& value, Units);

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> table{
        {"system.n", [](RunConfig& rc, const std::string& k, const std::string& v, Units) {
             rc.system.n = static_cast<int>(parse_int(k, v));
         }},
        {"system.lambda_ab", [](RunConfig& rc, const std::string& k, const std::string& v, Units) {
             rc.system.lambda_ab = parse_double(k, v);
         }},
        {"system.sigma_b2", [](RunConfig& rc, const std::string& k, const std::string& v, Units u) {
             rc.system.sigma_b2 = parse_power(k, v, u);
         }},
        {"system.sigma_w2", [](RunConfig& rc, const std::string& k, const std::string& v, Units u) {
             rc.system.sigma_w2 = parse_power(k, v, u);
         }},
        {"system.epsilon", [](RunConfig& rc, const std::string& k, const std::string& v, Units) {
             rc.system.epsilon = parse_double(k, v);
         }},
        {"system.tau", [](RunConfig& rc, const std::string& k, const std::string& v, Units u) {
             parse_power(k, v, u);
             rc.warnings.push_back(k + " is an annotation with no role in the model; ignored");
         }},
        {"mc.trials", [](RunConfig& rc, const std::string& k, const std::string& v, Units) {
             rc.mc.trials = parse_int(k, v);
         }},
        {"mc.seed", [](RunConfig& rc, const std::string& k, const std::string& v, Units) {
             rc.mc.seed = parse_u64(k, v);
         }},
        {"mc.prior_h1", [](RunConfig& rc, const std::string& k, const std::string& v, Units) {
             rc.mc.prior_h1 = parse_double(k, v);
         }},
        {"mc.threads", [](RunConfig& rc, const std::string& k, const std::string& v, Units) {
             const auto t = parse_int(k, v);
             if (t < 0 || t > 1024) throw ConfigError(k, "must lie in [0, 1024]");
             rc.mc.threads = static_cast<unsigned>(t);
         }},
        {"fig1.rho", [](RunConfig& rc, const std::string& k, const std::string& v, Units u) {
             rc.fig1.rho = parse_power(k, v, u);
         }},
        {"fig1.n_p", [](RunConfig& rc, const std::string& k, const std::string& v, Units) {
             rc.fig1.n_p = parse_int_list(k, v);
         }},
        {"fig1.eta", [](RunConfig& rc, const std::string& k, const std::string& v, Units) {
             rc.fig1.eta = parse_real_list(k, v);
         }},
        {"fig2.epsilon", [](RunConfig& rc, const std::string& k, const std::string& v, Units) {
             rc.fig2.epsilon = parse_real_list(k, v);
         }},
        {"fig3.epsilon", [](RunConfig& rc, const std::string& k, const std::string& v, Units) {
             rc.fig3.epsilon = parse_real_list(k, v);
         }},
        {"fig3.n", [](RunConfig& rc, const std::string& k, const std::string& v, Units) {
             rc.fig3.n = parse_int_list(k, v);
         }},
        {"sweep.epsilon", [](RunConfig& rc, const std::string& k, const std::string& v, Units) {
             rc.sweep.epsilon = parse_real_list(k, v);
         }},
        {"sweep.n", [](RunConfig& rc, const std::string& k, const std::string& v, Units) {
             rc.sweep.n = parse_int_list(k, v);
         }},
        {"verify.n", [](RunConfig& rc, const std::string& k, const std::string& v, Units) {
             rc.verify.n = parse_int_list(k, v);
         }},
        {"verify.rho", [](RunConfig& rc, const std::string& k, const std::string& v, Units u) {
             rc.verify.rho = parse_power_list(k, v, u);
         }},
        {"verify.pilot_fraction", [](RunConfig& rc, const std::string& k, const std::string& v, Units) {
             rc.verify.pilot_fraction = parse_double(k, v);
         }},
        {"verify.z_limit", [](RunConfig& rc, const std::string& k, const std::string& v, Units) {
             rc.verify.z_limit = parse_double(k, v);
         }},
        {"verify.sinr_rel_tol", [](RunConfig& rc, const std::string& k, const std::string& v, Units) {
             rc.verify.sinr_rel_tol = parse_double(k, v);
         }},
    };
    return table;
}

void put_real(std::ostream& os, const char* key, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << key << '=' << buf << '\n';
}

template <typename T>
void put_list(std::ostream& os, const char* key, const std::vector<T>& values) {
    os << key << '=';
    for (std::size_t i = 0; i < values.size(); ++i) {
        char buf[64];
        if constexpr (std::is_floating_point_v<T>) {
            std::snprintf(buf, sizeof buf, "%.17g", values[i]);
        } else {
            std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(values[i]));
        }
        os << (i ? "," : "") << buf;
    }
    os << '\n';
}

}  // namespace

double dbm_to_linear(double dbm) { return std::pow(10.0, dbm / 10.0); }

double linear_to_dbm(double linear) { return 10.0 * std::log10(linear); }

RunConfig::RunConfig() {
    fig1.eta = expand_range("fig1.eta", 0.05, 0.05, 0.95);
    fig3.epsilon = expand_range("fig3.epsilon", 0.02, 0.01, 0.3);
    sweep.epsilon = {0.01, 0.05, 0.1, 0.2};
}

std::string RunConfig::canonical() const {
    std::ostringstream os;
    os << "n=" << system.n << '\n';
    put_real(os, "lambda_ab", system.lambda_ab);
    put_real(os, "sigma_b2", system.sigma_b2);
    put_real(os, "sigma_w2", system.sigma_w2);
    put_real(os, "epsilon", system.epsilon);
    os << "trials=" << mc.trials << '\n' << "seed=" << mc.seed << '\n';
    put_real(os, "prior_h1", mc.prior_h1);
    os << "units=" << (units == Units::Dbm ? "dbm" : "linear") << '\n';
    put_real(os, "fig1.rho", fig1.rho);
    put_list(os, "fig1.n_p", fig1.n_p);
    put_list(os, "fig1.eta", fig1.eta);
    put_list(os, "fig2.epsilon", fig2.epsilon);
    put_list(os, "fig3.epsilon", fig3.epsilon);
    put_list(os, "fig3.n", fig3.n);
    put_list(os, "sweep.epsilon", sweep.epsilon);
    put_list(os, "sweep.n", sweep.n);
    put_list(os, "verify.n", verify.n);
    put_list(os, "verify.rho", verify.rho);
    put_real(os, "verify.pilot_fraction", verify.pilot_fraction);
    put_real(os, "verify.z_limit", verify.z_limit);
    put_real(os, "verify.sinr_rel_tol", verify.sinr_rel_tol);
    return os.str();
}

std::string RunConfig::config_hash() const {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

RunConfig parse_run_config(const std::string& text, Units units) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config", "line " + std::to_string(e.line()) + ": " + e.message());
    }

    RunConfig rc;
    rc.units = units;
    const auto& table = handlers();
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) {
            throw ConfigError(section, "keys must live inside a [section]");
        }
        for (const auto& [key, value] : body) {
            const std::string full = section + "." + key;
            const auto it = table.find(full);
            if (it == table.end()) throw ConfigError(full, "unknown key");
            it->second(rc, full, value.data(), units);
        }
    }
    validate(rc);
    return rc;
}

RunConfig load_run_config(const std::filesystem::path& path, Units units) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_run_config(text.str(), units);
}

void validate(const RunConfig& rc) {
    rc.system.validate();
    if (rc.mc.trials < 1) throw ConfigError("mc.trials", "must be positive");
    if (!(rc.mc.prior_h1 > 0.0 && rc.mc.prior_h1 < 1.0)) {
        throw ConfigError("mc.prior_h1", "must lie in (0, 1)");
    }
    if (!(rc.fig1.rho > 0.0)) throw ConfigError("fig1.rho", "must be positive");
    check_sorted_unique("fig1.n_p", rc.fig1.n_p);
    for (int np : rc.fig1.n_p) {
        if (np < 1) throw ConfigError("fig1.n_p", "values must be >= 1");
    }
    check_open_unit("fig1.eta", rc.fig1.eta);
    check_open_unit("fig2.epsilon", rc.fig2.epsilon);
    check_open_unit("fig3.epsilon", rc.fig3.epsilon);
    check_slot_lengths("fig3.n", rc.fig3.n);
    check_open_unit("sweep.epsilon", rc.sweep.epsilon);
    check_slot_lengths("sweep.n", rc.sweep.n);
    check_slot_lengths("verify.n", rc.verify.n);
    check_sorted_unique("verify.rho", rc.verify.rho);
    for (double r : rc.verify.rho) {
        if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("verify.rho", "values must be positive");
    }
    if (!(rc.verify.pilot_fraction > 0.0 && rc.verify.pilot_fraction < 1.0)) {
        throw ConfigError("verify.pilot_fraction", "must lie in (0, 1)");
    }
    if (!(rc.verify.z_limit > 0.0)) throw ConfigError("verify.z_limit", "must be positive");
    if (!(rc.verify.sinr_rel_tol > 0.0)) throw ConfigError("verify.sinr_rel_tol", "must be positive");
}

}  // namespace covert::cli

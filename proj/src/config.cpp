#include "mwls/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "mwls/error.hpp"
#include "mwls/format.hpp"

namespace mwls {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& path, const std::string& v, const std::string& why) {
    throw ValidationError("invalid value '" + v + "' for key '" + path + "': " + why);
}

double to_double(const std::string& raw, const std::string& path) {
    const std::string v = trim(raw);
    double out = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || r.ec != std::errc() || r.ptr != v.data() + v.size()) bad_value(path, v, "expected a number");
    if (!std::isfinite(out)) bad_value(path, v, "expected a finite number");
    return out;
}

template <class Int>
Int to_int(const std::string& raw, const std::string& path) {
    const std::string v = trim(raw);
    Int out = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || r.ec != std::errc() || r.ptr != v.data() + v.size()) bad_value(path, v, "expected an integer");
    return out;
}

bool to_bool(const std::string& raw, const std::string& path) {
    const std::string v = trim(raw);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    bad_value(path, v, "expected true or false");
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(trim(item));
    return parts;
}

std::vector<double> to_double_list(const std::string& raw, const std::string& path) {
    std::vector<double> out;
    for (const auto& p : split(raw)) out.push_back(to_double(p, path));
    if (out.empty()) bad_value(path, raw, "expected a comma-separated list");
    return out;
}

std::vector<std::int64_t> to_int_list(const std::string& raw, const std::string& path) {
    std::vector<std::int64_t> out;
    for (const auto& p : split(raw)) out.push_back(to_int<std::int64_t>(p, path));
    if (out.empty()) bad_value(path, raw, "expected a comma-separated list");
    return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) s += ',';
        if constexpr (std::is_floating_point_v<T>)
            s += fmt_double(v[k]);
        else
            s += std::to_string(v[k]);
    }
    return s;
}

struct KeyDef {
    const char* section;
    const char* key;
    std::function<void(RunConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

const std::vector<KeyDef>& key_table() {
    using C = RunConfig;
    using S = const std::string&;
    static const std::vector<KeyDef> table{
        {"problem", "id", [](C& c, S v, S) { c.problem = trim(v); }, [](const C& c) { return c.problem; }},
        {"problem", "d", [](C& c, S v, S p) { c.d = to_int<int>(v, p); }, [](const C& c) { return std::to_string(c.d); }},
        {"problem", "clip",
         [](C& c, S v, S p) {
             if (trim(v) == "none") c.clip.reset();
             else c.clip = to_double(v, p);
         },
         [](const C& c) { return c.clip ? fmt_double(*c.clip) : std::string("none"); }},
        {"problem", "alpha", [](C& c, S v, S p) { c.alpha = to_double(v, p); }, [](const C& c) { return fmt_double(c.alpha); }},
        {"problem", "theta_Phi", [](C& c, S v, S p) { c.theta_Phi = to_double(v, p); }, [](const C& c) { return fmt_double(c.theta_Phi); }},
        {"problem", "cap", [](C& c, S v, S p) { c.cap = to_double(v, p); }, [](const C& c) { return fmt_double(c.cap); }},
        {"problem", "init", [](C& c, S v, S) { c.init = trim(v); }, [](const C& c) { return c.init; }},
        {"problem", "init_center", [](C& c, S v, S p) { c.init_center = to_double_list(v, p); }, [](const C& c) { return join(c.init_center); }},
        {"problem", "init_half_width", [](C& c, S v, S p) { c.init_half_width = to_double(v, p); }, [](const C& c) { return fmt_double(c.init_half_width); }},
        {"grid", "T", [](C& c, S v, S p) { c.T = to_double(v, p); }, [](const C& c) { return fmt_double(c.T); }},
        {"grid", "N", [](C& c, S v, S p) { c.N = to_int<int>(v, p); }, [](const C& c) { return std::to_string(c.N); }},
        {"grid", "theta", [](C& c, S v, S p) { c.theta = to_double(v, p); }, [](const C& c) { return fmt_double(c.theta); }},
        {"grid", "points",
         [](C& c, S v, S p) {
             if (trim(v) == "none") c.points.clear();
             else c.points = to_double_list(v, p);
         },
         [](const C& c) { return c.points.empty() ? std::string("none") : join(c.points); }},
        {"basis", "degree_y", [](C& c, S v, S p) { c.degree_y = to_int<int>(v, p); }, [](const C& c) { return std::to_string(c.degree_y); }},
        {"basis", "degree_z", [](C& c, S v, S p) { c.degree_z = to_int<int>(v, p); }, [](const C& c) { return std::to_string(c.degree_z); }},
        {"basis", "delta_y", [](C& c, S v, S p) { c.delta_y = to_double_list(v, p); }, [](const C& c) { return join(c.delta_y); }},
        {"basis", "delta_z", [](C& c, S v, S p) { c.delta_z = to_double_list(v, p); }, [](const C& c) { return join(c.delta_z); }},
        {"basis", "R", [](C& c, S v, S p) { c.R = to_double(v, p); }, [](const C& c) { return fmt_double(c.R); }},
        {"simulation", "M", [](C& c, S v, S p) { c.M = to_int_list(v, p); }, [](const C& c) { return join(c.M); }},
        {"simulation", "seed", [](C& c, S v, S p) { c.seed = to_int<std::uint64_t>(v, p); }, [](const C& c) { return std::to_string(c.seed); }},
        {"errors", "enabled", [](C& c, S v, S p) { c.errors = to_bool(v, p); }, [](const C& c) { return std::string(c.errors ? "true" : "false"); }},
        {"errors", "fresh_M", [](C& c, S v, S p) { c.fresh_M = to_int<std::int64_t>(v, p); }, [](const C& c) { return std::to_string(c.fresh_M); }},
        {"output", "dir", [](C& c, S v, S) { c.out_dir = trim(v); }, [](const C& c) { return c.out_dir; }},
        {"sweep", "parameter", [](C& c, S v, S) { c.sweep_parameter = trim(v); }, [](const C& c) { return c.sweep_parameter; }},
        {"sweep", "values", [](C& c, S v, S p) { c.sweep_values = to_double_list(v, p); }, [](const C& c) { return join(c.sweep_values); }},
        {"sweep", "index", [](C& c, S v, S p) { c.sweep_index = to_int<int>(v, p); }, [](const C& c) { return std::to_string(c.sweep_index); }},
    };
    return table;
}

template <class T>
const T& pick(const std::vector<T>& v, int i) {
    return v.size() == 1 ? v.front() : v[static_cast<std::size_t>(i)];
}

}  // namespace

void RunConfig::validate() const {
    if (!register_benchmarks().count(problem)) throw ValidationError("unknown problem id '" + problem + "' at key 'problem.id'");
    if (d < 1) throw ValidationError("key 'problem.d' must be at least 1");
    if (init != "box" && init != "point") throw ValidationError("key 'problem.init' must be box or point");
    if (init_center.size() != 1 && static_cast<int>(init_center.size()) != d)
        throw ValidationError("key 'problem.init_center' must have 1 or d entries");
    if (!(init_half_width >= 0.0)) throw ValidationError("key 'problem.init_half_width' must be nonnegative");
    if (clip && !(*clip > 0.0)) throw ValidationError("key 'problem.clip' must be positive");
    const int n = points.empty() ? N : static_cast<int>(points.size()) - 1;
    if (points.empty()) {
        if (!(T > 0.0)) throw ValidationError("key 'grid.T' must be positive");
        if (N < 1) throw ValidationError("key 'grid.N' must be at least 1");
        if (!(theta > 0.0 && theta <= 1.0)) throw ValidationError("key 'grid.theta' must lie in (0, 1]");
    } else if (n < 1) {
        throw ValidationError("key 'grid.points' needs at least two points");
    }
    if (degree_y < 0) throw ValidationError("key 'basis.degree_y' must be nonnegative");
    if (degree_z < 0) throw ValidationError("key 'basis.degree_z' must be nonnegative");
    auto check_sched = [n](std::size_t size, const char* key) {
        if (size != 1 && static_cast<int>(size) != n)
            throw ValidationError(std::string("key '") + key + "' must have 1 or N entries");
    };
    check_sched(delta_y.size(), "basis.delta_y");
    check_sched(delta_z.size(), "basis.delta_z");
    check_sched(M.size(), "simulation.M");
    for (double v : delta_y) if (!(v > 0.0)) throw ValidationError("key 'basis.delta_y' must be positive");
    for (double v : delta_z) if (!(v > 0.0)) throw ValidationError("key 'basis.delta_z' must be positive");
    if (!(R > 0.0)) throw ValidationError("key 'basis.R' must be positive");
    for (auto v : M) if (v < 1) throw ValidationError("key 'simulation.M' must be at least 1");
    if (fresh_M < 1) throw ValidationError("key 'errors.fresh_M' must be at least 1");
    if (sweep_parameter != "M" && sweep_parameter != "delta" && sweep_parameter != "N")
        throw ValidationError("key 'sweep.parameter' must be M, delta or N");
    if (sweep_index < -1) throw ValidationError("key 'sweep.index' must be -1 or a time index");
}

TimeGrid RunConfig::make_grid() const {
    if (!points.empty()) return TimeGrid::from_points(points);
    return TimeGrid::theta_grid(T, N, theta);
}

BenchmarkParams RunConfig::benchmark_params() const {
    BenchmarkParams p;
    p.d = d;
    Eigen::VectorXd c(d);
    for (int k = 0; k < d; ++k) c[k] = init_center.size() == 1 ? init_center[0] : init_center[static_cast<std::size_t>(k)];
    p.init = init == "point" ? InitialLaw::point(c) : InitialLaw::box(c, init_half_width);
    p.clip = clip;
    p.alpha = alpha;
    p.theta_Phi = theta_Phi;
    p.cap = cap;
    return p;
}

SolverConfig RunConfig::solver_config() const {
    SolverConfig s;
    const int n = points.empty() ? N : static_cast<int>(points.size()) - 1;
    const bool per_index = delta_y.size() > 1 || delta_z.size() > 1;
    const int count = per_index ? n : 1;
    for (int i = 0; i < count; ++i) {
        s.basis_y.push_back({degree_y, pick(delta_y, i), R});
        s.basis_z.push_back({degree_z, pick(delta_z, i), R});
    }
    s.M = M;
    s.seed = seed;
    return s;
}

std::string RunConfig::to_ini() const {
    std::string out;
    std::string section;
    for (const auto& k : key_table()) {
        if (section != k.section) {
            if (!section.empty()) out += '\n';
            section = k.section;
            out += "[" + section + "]\n";
        }
        out += std::string(k.key) + " = " + k.get(*this) + "\n";
    }
    return out;
}

std::string RunConfig::to_comment_header() const {
    std::string out;
    for (const auto& k : key_table())
        out += "# " + std::string(k.section) + "." + k.key + " = " + k.get(*this) + "\n";
    return out;
}

RunConfig parse_config_string(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ValidationError(std::string("malformed config: ") + e.what());
    }
    RunConfig cfg;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ValidationError("key '" + section + "' appears outside any section");
        for (const auto& [key, value] : body) {
            const std::string path = section + "." + key;
            const KeyDef* def = nullptr;
            for (const auto& k : key_table())
                if (section == k.section && key == k.key) def = &k;
            if (!def) throw ValidationError("unknown key '" + path + "'");
            def->set(cfg, value.data(), path);
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_string(ss.str());
}

}  // namespace mwls

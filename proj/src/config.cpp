#include "vbesov/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

#include "vbesov/besov.hpp"
#include "vbesov/error.hpp"
#include "vbesov/expression.hpp"
#include "vbesov/frame.hpp"
#include "vbesov/grid_io.hpp"
#include "vbesov/harness/bank.hpp"
#include "vbesov/json_out.hpp"

namespace vbesov {

namespace {

// A value that failed to convert; column is 1-based within the value.
struct ValueError {
    std::size_t column;
    std::string message;
};

double to_double(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
        throw ValueError{1, "expected a finite number"};
    return v;
}

template <class Int>
Int to_integer(std::string_view s) {
    Int v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ValueError{1, "expected an integer"};
    return v;
}

void check_expression(std::string_view s, std::string_view allowed) {
    ExpressionParseFailure f;
    const auto e = Expression::try_parse(s, f);
    if (!e) throw ValueError{f.column, f.message};
    for (char v : std::string_view("xyrt"))
        if (e->uses(v) && allowed.find(v) == std::string_view::npos)
            throw ValueError{1, std::string("variable '") + v + "' is not allowed here"};
}

void check_spatial(std::string_view s) {
    if (s.starts_with("csv:")) {
        if (s.size() == 4) throw ValueError{5, "missing path"};
        return;
    }
    check_expression(s, "xyr");
}

struct Key {
    std::string_view name;
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

std::string num(double v) { return format_number(v); }

template <class T>
std::string opt(const std::optional<T>& v) {
    return v ? num(*v) : std::string();
}

const std::vector<Key>& keys() {
    static const std::vector<Key> k{
        {"dimension", [](RunConfig& c, std::string_view s) { c.dimension = to_integer<int>(s); },
         [](const RunConfig& c) { return std::to_string(c.dimension); }},
        {"box_length", [](RunConfig& c, std::string_view s) { c.box_length = to_double(s); },
         [](const RunConfig& c) { return num(c.box_length); }},
        {"points", [](RunConfig& c, std::string_view s) { c.points = to_integer<int>(s); },
         [](const RunConfig& c) { return std::to_string(c.points); }},
        {"octaves", [](RunConfig& c, std::string_view s) { c.octaves = to_integer<int>(s); },
         [](const RunConfig& c) { return std::to_string(c.octaves); }},
        {"nodes_per_octave", [](RunConfig& c, std::string_view s) { c.nodes_per_octave = to_integer<int>(s); },
         [](const RunConfig& c) { return std::to_string(c.nodes_per_octave); }},
        {"alpha", [](RunConfig& c, std::string_view s) { check_spatial(s); c.alpha = std::string(s); },
         [](const RunConfig& c) { return c.alpha; }},
        {"p", [](RunConfig& c, std::string_view s) { check_spatial(s); c.p = std::string(s); },
         [](const RunConfig& c) { return c.p; }},
        {"p_limit", [](RunConfig& c, std::string_view s) { c.p_limit = s.empty() ? std::nullopt : std::optional(to_double(s)); },
         [](const RunConfig& c) { return opt(c.p_limit); }},
        {"q", [](RunConfig& c, std::string_view s) { check_expression(s, "t"); c.q = std::string(s); },
         [](const RunConfig& c) { return c.q; }},
        {"q_zero", [](RunConfig& c, std::string_view s) { c.q_zero = s.empty() ? std::nullopt : std::optional(to_double(s)); },
         [](const RunConfig& c) { return opt(c.q_zero); }},
        {"frame",
         [](RunConfig& c, std::string_view s) {
             if (s != "exp" && s != "smoothstep") throw ValueError{1, "frame must be exp or smoothstep"};
             c.frame = std::string(s);
         },
         [](const RunConfig& c) { return c.frame; }},
        {"form",
         [](RunConfig& c, std::string_view s) {
             try {
                 (void)parse_norm_form(s);
             } catch (const Error&) {
                 throw ValueError{1, "unknown norm form"};
             }
             c.form = std::string(s);
         },
         [](const RunConfig& c) { return c.form; }},
        {"peetre_a", [](RunConfig& c, std::string_view s) { c.peetre_a = to_double(s); },
         [](const RunConfig& c) { return num(c.peetre_a); }},
        {"local_mean_S", [](RunConfig& c, std::string_view s) { c.local_mean_S = to_integer<int>(s); },
         [](const RunConfig& c) { return std::to_string(c.local_mean_S); }},
        {"local_mean_epsilon", [](RunConfig& c, std::string_view s) { c.local_mean_epsilon = to_double(s); },
         [](const RunConfig& c) { return num(c.local_mean_epsilon); }},
        {"K", [](RunConfig& c, std::string_view s) { c.K = to_integer<int>(s); },
         [](const RunConfig& c) { return std::to_string(c.K); }},
        {"L", [](RunConfig& c, std::string_view s) { c.L = to_integer<int>(s); },
         [](const RunConfig& c) { return std::to_string(c.L); }},
        {"gamma", [](RunConfig& c, std::string_view s) { c.gamma = to_double(s); },
         [](const RunConfig& c) { return num(c.gamma); }},
        {"function",
         [](RunConfig& c, std::string_view s) {
             if (s.starts_with("bank:") || s.starts_with("file:")) {
                 if (s.size() == 5) throw ValueError{6, "missing name"};
             } else {
                 check_expression(s, "xyr");
             }
             c.function = std::string(s);
         },
         [](const RunConfig& c) { return c.function; }},
        {"seed", [](RunConfig& c, std::string_view s) { c.seed = to_integer<std::uint64_t>(s); },
         [](const RunConfig& c) { return std::to_string(c.seed); }},
        {"output",
         [](RunConfig& c, std::string_view s) {
             if (s.empty()) throw ValueError{1, "output directory must not be empty"};
             c.output = std::string(s);
         },
         [](const RunConfig& c) { return c.output; }},
        {"jobs", [](RunConfig& c, std::string_view s) { c.jobs = to_integer<unsigned>(s); },
         [](const RunConfig& c) { return std::to_string(c.jobs); }},
        {"refine",
         [](RunConfig& c, std::string_view s) {
             if (s == "true") c.refine = true;
             else if (s == "false") c.refine = false;
             else throw ValueError{1, "expected true or false"};
         },
         [](const RunConfig& c) { return std::string(c.refine ? "true" : "false"); }},
    };
    return k;
}

std::string located(std::size_t line, std::size_t column, const std::string& message) {
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
}

bool blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::filesystem::path strip_prefix(const std::string& s) { return std::filesystem::path(s.substr(s.find(':') + 1)); }

ExponentField spatial_field(const std::string& def, const GridSpec& spec, ExponentKind kind,
                            std::optional<double> limit) {
    if (def.starts_with("csv:")) {
        auto f = read_exponent_csv(strip_prefix(def));
        require(f.kind() == kind, ErrorKind::parameter, "exponent CSV '" + def + "' holds a field of another kind");
        require_same_grid(f.grid(), spec, "exponent CSV");
        return f;
    }
    const auto e = Expression::parse(def);
    return ExponentField::sample_on_grid(
        spec, [&](const Point& x) { return e({x[0], x[1], 0.0}); }, kind, limit, def);
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    RunConfig c;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0, start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find('\n', start), text.size());
        const std::string_view line = text.substr(start, end - start);
        ++line_no;
        start = end + 1;

        std::size_t i = 0;
        while (i < line.size() && blank(line[i])) ++i;
        if (i == line.size() || line[i] == '#') {
            if (end == text.size()) break;
            continue;
        }
        const std::size_t key_col = i + 1;
        const std::size_t eq = line.find('=', i);
        if (eq == std::string_view::npos) fail(ErrorKind::parse, located(line_no, key_col, "expected 'key = value'"));
        std::size_t key_end = eq;
        while (key_end > i && blank(line[key_end - 1])) --key_end;
        const std::string_view key = line.substr(i, key_end - i);
        if (key.empty()) fail(ErrorKind::parse, located(line_no, key_col, "missing key"));

        std::size_t v0 = eq + 1;
        while (v0 < line.size() && blank(line[v0])) ++v0;
        std::size_t v1 = line.size();
        while (v1 > v0 && blank(line[v1 - 1])) --v1;
        const std::string_view value = line.substr(v0, v1 - v0);

        const auto& ks = keys();
        const auto it = std::find_if(ks.begin(), ks.end(), [&](const Key& k) { return k.name == key; });
        if (it == ks.end()) fail(ErrorKind::parse, located(line_no, key_col, "unknown key '" + std::string(key) + "'"));
        if (!seen.insert(std::string(key)).second)
            fail(ErrorKind::parse, located(line_no, key_col, "key '" + std::string(key) + "' given twice"));
        const bool optional_key = key == "p_limit" || key == "q_zero";
        if (value.empty() && !optional_key)
            fail(ErrorKind::parse, located(line_no, v0 + 1, "missing value for '" + std::string(key) + "'"));
        try {
            it->set(c, value);
        } catch (const ValueError& e) {
            fail(ErrorKind::parse, located(line_no, v0 + e.column, e.message));
        }
        if (end == text.size()) break;
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::io, "cannot open config '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::parse) throw;
        // Prefix the file name; the message already starts with "parse error: ".
        std::string msg = e.what();
        const std::string tag = "parse error: ";
        if (msg.starts_with(tag)) msg.erase(0, tag.size());
        fail(ErrorKind::parse, path.string() + ": " + msg);
    }
}

std::string emit_config(const RunConfig& c) {
    std::string out;
    for (const auto& k : keys()) {
        const std::string v = k.get(c);
        out += std::string(k.name) + (v.empty() ? " =" : " = " + v) + "\n";
    }
    return out;
}

void save_config(const std::filesystem::path& path, const RunConfig& c) {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::io, "cannot write config '" + path.string() + "'");
    out << emit_config(c);
    require(static_cast<bool>(out), ErrorKind::io, "failed writing config '" + path.string() + "'");
}

GridSpec grid_spec(const RunConfig& c) { return make_grid(c.dimension, c.box_length, c.points); }

ScaleLadder scale_ladder(const RunConfig& c) { return make_ladder(c.octaves, c.nodes_per_octave); }

ExponentField alpha_field(const RunConfig& c, const GridSpec& spec) {
    return spatial_field(c.alpha, spec, ExponentKind::alpha, std::nullopt);
}

ExponentField p_field(const RunConfig& c, const GridSpec& spec) {
    return spatial_field(c.p, spec, ExponentKind::p, c.p_limit);
}

ExponentField q_field(const RunConfig& c, const ScaleLadder& ladder) {
    const auto e = Expression::parse(c.q);
    const double q0 = c.q_zero ? *c.q_zero : e.at_t(0.0);
    require(std::isfinite(q0), ErrorKind::admissibility,
            "q(0) is not finite for q = '" + c.q + "'; set q_zero");
    return q_on_ladder(ladder, [e](double t) { return e.at_t(t); }, q0, c.q);
}

GridFunction input_function(const RunConfig& c, const GridSpec& spec) {
    if (c.function.starts_with("bank:")) {
        const auto bank = harness::make_function_bank(spec, c.seed);
        return bank.at(c.function.substr(5)).f;
    }
    if (c.function.starts_with("file:")) {
        const auto path = strip_prefix(c.function);
        auto f = path.extension() == ".csv" ? read_grid_csv(path) : read_grid_raw(path);
        require_same_grid(f.spec(), spec, "input function");
        return f;
    }
    const auto e = Expression::parse(c.function);
    return GridFunction::sample_real(spec, [&](const Point& x) { return e({x[0], x[1], 0.0}); }, c.function);
}

harness::HarnessSettings harness_settings(const RunConfig& c) {
    harness::HarnessSettings s;
    s.seed = c.seed;
    s.box_length = c.box_length;
    s.points = c.points;
    s.octaves = c.octaves;
    s.nodes_per_octave = c.nodes_per_octave;
    s.peetre_a = c.peetre_a;
    s.local_mean_S = c.local_mean_S;
    s.local_mean_epsilon = c.local_mean_epsilon;
    s.refine = c.refine;
    return s;
}

}  // namespace vbesov

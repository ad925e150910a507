#include "vbesov/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "vbesov/error.hpp"
#include "vbesov/json_out.hpp"

namespace vbesov {

namespace {

constexpr double kE = std::numbers::e;

struct Sampled {
    std::vector<Point> x;
    std::vector<double> g;
    int dimension = 1;
    int n_axis = 0;   // points per axis for 2-D grids
};

Sampled gather(const ExponentField& f, bool reciprocal) {
    Sampled s;
    s.g = f.samples();
    if (reciprocal)
        for (auto& v : s.g) v = std::isinf(v) ? 0.0 : 1.0 / v;
    if (f.on_t_axis()) {
        for (double t : f.t_nodes()) s.x.push_back({t, 0.0});
    } else {
        const auto& spec = f.grid();
        s.dimension = spec.dimension;
        s.n_axis = spec.points;
        s.x.resize(spec.total());
        for (std::size_t i = 0; i < s.x.size(); ++i) s.x[i] = spec.point(i);
    }
    return s;
}

double distance(const Point& a, const Point& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

struct PairScan {
    const Sampled& s;
    HolderWitness best;
    std::size_t pairs = 0;

    void visit(std::size_t i, std::size_t j) {
        ++pairs;
        const double d = distance(s.x[i], s.x[j]);
        if (d <= 0.0) return;
        const double diff = std::abs(s.g[i] - s.g[j]);
        if (!std::isfinite(diff)) return;
        const double v = diff * std::log(kE + 1.0 / d);
        if (v > best.value) best = {v, s.x[i], s.x[j], d};
    }
};

std::vector<std::size_t> offset_set(std::size_t M, std::size_t max_pairs) {
    std::vector<std::size_t> d;
    const std::size_t budget = std::max<std::size_t>(2, max_pairs / M);
    const std::size_t dense = std::min(M - 1, budget / 2);
    for (std::size_t k = 1; k <= dense; ++k) d.push_back(k);
    const std::size_t sparse = budget - dense;
    if (dense < M - 1 && sparse > 0) {
        const double lo = std::log(double(dense + 1)), hi = std::log(double(M - 1));
        for (std::size_t k = 0; k < sparse; ++k) {
            const double frac = sparse == 1 ? 1.0 : double(k) / double(sparse - 1);
            d.push_back(static_cast<std::size_t>(std::lround(std::exp(lo + frac * (hi - lo)))));
        }
    }
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    return d;
}

HolderWitness scan_local(const Sampled& s, std::size_t max_pairs, std::size_t& pairs) {
    PairScan scan{s, {}, 0};
    const std::size_t M = s.g.size();
    if (M < 2) return scan.best;
    if (M * (M - 1) / 2 <= max_pairs) {
        for (std::size_t i = 0; i < M; ++i)
            for (std::size_t j = i + 1; j < M; ++j) scan.visit(i, j);
    } else if (s.dimension == 1) {
        for (std::size_t d : offset_set(M, max_pairs))
            for (std::size_t i = 0; i + d < M; ++i) scan.visit(i, i + d);
    } else {
        const int N = s.n_axis;
        auto at = [N](int a, int b) { return static_cast<std::size_t>(a) * N + b; };
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) {
                if (a + 1 < N) scan.visit(at(a, b), at(a + 1, b));
                if (b + 1 < N) scan.visit(at(a, b), at(a, b + 1));
                if (a + 1 < N && b + 1 < N) scan.visit(at(a, b), at(a + 1, b + 1));
                if (a + 1 < N && b > 0) scan.visit(at(a, b), at(a + 1, b - 1));
            }
        const std::size_t remaining = max_pairs > scan.pairs ? max_pairs - scan.pairs : 0;
        int stride = 1;
        auto sub_count = [&](int st) {
            const std::size_t m = static_cast<std::size_t>((N + st - 1) / st);
            return m * m;
        };
        while (sub_count(stride) * (sub_count(stride) - 1) / 2 > remaining && stride < N) stride *= 2;
        std::vector<std::size_t> sub;
        for (int a = 0; a < N; a += stride)
            for (int b = 0; b < N; b += stride) sub.push_back(at(a, b));
        for (std::size_t i = 0; i < sub.size(); ++i)
            for (std::size_t j = i + 1; j < sub.size(); ++j) scan.visit(sub[i], sub[j]);
    }
    pairs = scan.pairs;
    return scan.best;
}

HolderWitness scan_decay(const Sampled& s, double limit, bool origin) {
    HolderWitness best;
    for (std::size_t i = 0; i < s.g.size(); ++i) {
        const double r = origin ? s.x[i][0] : std::hypot(s.x[i][0], s.x[i][1]);
        const double weight = origin ? std::log(kE + 1.0 / r) : std::log(kE + r);
        const double diff = std::abs(s.g[i] - limit);
        if (!std::isfinite(diff)) continue;
        const double v = diff * weight;
        if (v > best.value) best = {v, s.x[i], origin ? Point{0.0, 0.0} : s.x[i], r};
    }
    return best;
}

}  // namespace

std::string_view to_string(ExponentKind kind) noexcept {
    switch (kind) {
        case ExponentKind::p: return "p";
        case ExponentKind::alpha: return "alpha";
        case ExponentKind::q_of_t: return "q_of_t";
    }
    return "unknown";
}

// ===========================================================================
// ExponentField
// ===========================================================================

ExponentField ExponentField::on_grid(const GridSpec& spec, std::vector<double> samples, ExponentKind kind,
                                     std::optional<double> limit, std::string label) {
    require(kind != ExponentKind::q_of_t, ErrorKind::parameter, "q(t) lives on the t-axis, not on a grid");
    require(samples.size() == spec.total(), ErrorKind::grid_mismatch,
            "exponent sample count does not match the grid");
    ExponentField f;
    f.kind_ = kind;
    f.grid_ = spec;
    f.samples_ = std::move(samples);
    f.limit_ = limit;
    f.label_ = std::move(label);
    f.finish();
    return f;
}

ExponentField ExponentField::sample_on_grid(const GridSpec& spec, const std::function<double(const Point&)>& g,
                                            ExponentKind kind, std::optional<double> limit, std::string label) {
    std::vector<double> s(spec.total());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = g(spec.point(i));
    return on_grid(spec, std::move(s), kind, limit, std::move(label));
}

ExponentField ExponentField::constant(const GridSpec& spec, double value, ExponentKind kind, std::string label) {
    return on_grid(spec, std::vector<double>(spec.total(), value), kind, value, std::move(label));
}

ExponentField ExponentField::on_t_axis(std::vector<double> t, std::vector<double> samples, double q_zero,
                                       std::function<double(double)> generator, std::string label) {
    require(t.size() == samples.size(), ErrorKind::parameter, "q(t): node and sample counts differ");
    require(!t.empty(), ErrorKind::parameter, "q(t): empty t-axis");
    for (std::size_t i = 0; i < t.size(); ++i) {
        require(t[i] > 0.0 && t[i] <= 1.0, ErrorKind::parameter, "q(t): t-axis must lie in (0, 1]");
        if (i > 0) require(t[i] < t[i - 1], ErrorKind::parameter, "q(t): t-axis must be strictly decreasing");
    }
    ExponentField f;
    f.kind_ = ExponentKind::q_of_t;
    f.t_ = std::move(t);
    f.samples_ = std::move(samples);
    f.limit_ = q_zero;
    f.generator_ = std::move(generator);
    f.label_ = std::move(label);
    f.finish();
    return f;
}

ExponentField ExponentField::sample_on_t_axis(std::vector<double> t, const std::function<double(double)>& q,
                                              double q_zero, std::string label) {
    std::vector<double> s(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) s[i] = q(t[i]);
    return on_t_axis(std::move(t), std::move(s), q_zero, q, std::move(label));
}

void ExponentField::finish() {
    require(!samples_.empty(), ErrorKind::parameter, "exponent field has no samples");
    for (double v : samples_) {
        require(!std::isnan(v), ErrorKind::parameter, "exponent field contains NaN");
        if (kind_ != ExponentKind::q_of_t)
            require(std::isfinite(v), ErrorKind::admissibility, "exponent field contains an infinite sample");
    }
    if (limit_) require(!std::isnan(*limit_), ErrorKind::parameter, "exponent limit value is NaN");
    const auto [lo, hi] = std::minmax_element(samples_.begin(), samples_.end());
    min_ = *lo;
    max_ = *hi;
    if (kind_ == ExponentKind::p) {
        require(min_ >= 1.0, ErrorKind::admissibility,
                "p must satisfy p >= 1 everywhere, minimum sample is " + std::to_string(min_));
        if (limit_) require(*limit_ >= 1.0, ErrorKind::admissibility, "p limit value must be >= 1");
    }
    if (kind_ == ExponentKind::q_of_t) {
        require(min_ > 0.0, ErrorKind::admissibility, "q must be positive on the t-axis");
        require(*limit_ > 0.0, ErrorKind::admissibility, "q(0) must be positive");
    }
    estimate_ = estimate_log_holder(*this, LogHolderOptions{false, limit_.has_value(), 1'000'000});
}

const GridSpec& ExponentField::grid() const {
    require(grid_.has_value(), ErrorKind::parameter, "exponent field lives on the t-axis, not on a grid");
    return *grid_;
}

const std::vector<double>& ExponentField::t_nodes() const {
    require(on_t_axis(), ErrorKind::parameter, "exponent field lives on a spatial grid, not on the t-axis");
    return t_;
}

double ExponentField::value_at_t(double t) const {
    require(on_t_axis(), ErrorKind::parameter, "value_at_t needs a q(t) field");
    require(t >= 0.0 && t <= 1.0, ErrorKind::parameter, "value_at_t: t outside [0, 1]");
    if (t == 0.0) return *limit_;
    if (generator_) return generator_(t);
    // Nodes decrease; interpolate linearly in log t, clamp outside.
    if (t >= t_.front()) return samples_.front();
    if (t <= t_.back()) return samples_.back();
    auto it = std::lower_bound(t_.begin(), t_.end(), t, std::greater<double>());
    const std::size_t j = static_cast<std::size_t>(it - t_.begin());
    if (t_[j] == t) return samples_[j];
    const std::size_t i = j - 1;
    const double a = std::log(t_[i]), b = std::log(t_[j]);
    const double w = (std::log(t) - a) / (b - a);
    return (1.0 - w) * samples_[i] + w * samples_[j];
}

// ===========================================================================
// Constants and class membership
// ===========================================================================

LogHolderEstimate estimate_log_holder(const ExponentField& field, const LogHolderOptions& options) {
    LogHolderEstimate est;
    const Sampled s = gather(field, options.reciprocal);
    est.local_witness = scan_local(s, options.max_pairs, est.pairs_examined);
    est.clog_local = est.local_witness.value;
    if (options.decay) {
        require(field.limit().has_value(), ErrorKind::parameter,
                "decay constant requested but the field has no limit value");
        double limit = *field.limit();
        if (options.reciprocal) limit = std::isinf(limit) ? 0.0 : 1.0 / limit;
        est.decay_witness = scan_decay(s, limit, field.on_t_axis());
        est.clog_decay = est.decay_witness->value;
    }
    return est;
}

ClassReport check_class(const ExponentField& field) {
    ClassReport r;
    r.kind = field.kind();
    const bool has_limit = field.limit().has_value();
    r.decay_checked = has_limit;
    r.constants = estimate_log_holder(
        field, LogHolderOptions{field.kind() == ExponentKind::p, has_limit, 1'000'000});

    double min_spacing = 0.0;
    if (field.on_t_axis()) {
        const auto& t = field.t_nodes();
        min_spacing = t.size() > 1 ? std::abs(t[t.size() - 1] - t[t.size() - 2]) : 1.0;
        for (std::size_t i = 1; i < t.size(); ++i) min_spacing = std::min(min_spacing, t[i - 1] - t[i]);
    } else {
        min_spacing = field.grid().spacing();
    }
    const auto& w = r.constants.local_witness;
    r.resolution_limited = w.value > 0.0 && w.distance <= 1.5 * min_spacing * (field.on_t_axis() ? 1.0 : std::sqrt(2.0));
    if (r.resolution_limited)
        r.notes.push_back("local constant attained at grid scale; field is not log-Hoelder in the continuum");
    r.is_Clog_loc = std::isfinite(r.constants.clog_local) && !r.resolution_limited;

    switch (field.kind()) {
        case ExponentKind::p: {
            const bool finite_range = std::isfinite(field.max());
            r.is_Plog = r.is_Clog_loc && finite_range && field.min() >= 1.0;
            if (has_limit) {
                r.is_Plog = r.is_Plog && r.constants.clog_decay && std::isfinite(*r.constants.clog_decay);
            } else {
                r.notes.push_back("no limit value: decay condition not checked (periodic box stand-in)");
            }
            break;
        }
        case ExponentKind::alpha:
            break;
        case ExponentKind::q_of_t: {
            // The origin product |q(t) - q(0)| log(e + 1/t) must not keep growing
            // on the smallest decade of sampled t.
            const auto& t = field.t_nodes();
            const auto& q = field.samples();
            const double q0 = *field.limit();
            const double t_min = t.back();
            double inner = 0.0, outer = 0.0;
            for (std::size_t i = 0; i < t.size(); ++i) {
                const double v = std::abs(q[i] - q0) * std::log(kE + 1.0 / t[i]);
                if (!std::isfinite(v)) {
                    inner = INFINITY;
                    break;
                }
                double& slot = t[i] < 10.0 * t_min ? inner : outer;
                slot = std::max(slot, v);
            }
            r.is_log_holder_at_origin =
                std::isfinite(inner) && (inner <= outer * (1.0 + 1e-6) || inner <= 1e-12);
            if (!r.is_log_holder_at_origin)
                r.notes.push_back("origin product still grows on the smallest sampled decade of t");
            break;
        }
    }
    return r;
}

// ===========================================================================
// I/O
// ===========================================================================

void write_exponent_csv(const std::filesystem::path& path, const ExponentField& field) {
    {
        std::ofstream os(path);
        require(static_cast<bool>(os), ErrorKind::io, "cannot open " + path.string());
        if (field.on_t_axis()) {
            os << "t,value\n";
            for (std::size_t i = 0; i < field.size(); ++i)
                os << format_number(field.t_nodes()[i]) << ',' << format_number(field[i]) << '\n';
        } else {
            const auto& spec = field.grid();
            os << (spec.dimension == 1 ? "x,value\n" : "x,y,value\n");
            for (std::size_t i = 0; i < field.size(); ++i) {
                const Point p = spec.point(i);
                os << format_number(p[0]) << ',';
                if (spec.dimension == 2) os << format_number(p[1]) << ',';
                os << format_number(field[i]) << '\n';
            }
        }
    }
    nlohmann::json j;
    j["kind"] = std::string(to_string(field.kind()));
    j["label"] = field.label();
    j["min"] = field.min();
    j["max"] = field.max();
    j["limit"] = field.limit() ? nlohmann::json(*field.limit()) : nlohmann::json(nullptr);
    j["clog_local"] = field.clog_local();
    j["clog_decay"] = field.clog_decay() ? nlohmann::json(*field.clog_decay()) : nlohmann::json(nullptr);
    if (!field.on_t_axis()) {
        const auto& spec = field.grid();
        j["grid"] = {{"dimension", spec.dimension}, {"box_length", spec.box_length}, {"points", spec.points}};
    }
    write_json_file(path.string() + ".json", j);
}

ExponentField read_exponent_csv(const std::filesystem::path& path) {
    std::ifstream js(path.string() + ".json");
    require(static_cast<bool>(js), ErrorKind::io, "missing JSON sidecar for " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(js);
    } catch (const std::exception& e) {
        fail(ErrorKind::io, "bad JSON sidecar for " + path.string() + ": " + e.what());
    }
    std::ifstream is(path);
    require(static_cast<bool>(is), ErrorKind::io, "cannot open " + path.string());
    std::string line;
    std::getline(is, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        rows.push_back(std::move(row));
    }
    const std::string kind = j.at("kind").get<std::string>();
    const std::string label = j.value("label", std::string{});
    std::optional<double> limit;
    if (!j.at("limit").is_null()) limit = j.at("limit").get<double>();
    if (kind == "q_of_t") {
        std::vector<double> t, v;
        for (auto& r : rows) {
            t.push_back(r.at(0));
            v.push_back(r.at(1));
        }
        require(limit.has_value(), ErrorKind::io, "q(t) sidecar lacks q(0)");
        return ExponentField::on_t_axis(std::move(t), std::move(v), *limit, {}, label);
    }
    const auto& g = j.at("grid");
    const GridSpec spec = make_grid(g.at("dimension").get<int>(), g.at("box_length").get<double>(),
                                    g.at("points").get<int>());
    std::vector<double> v;
    for (auto& r : rows) v.push_back(r.back());
    const ExponentKind k = kind == "p" ? ExponentKind::p : ExponentKind::alpha;
    return ExponentField::on_grid(spec, std::move(v), k, limit, label);
}

}  // namespace vbesov

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "hdqfc/errors.hpp"
#include "hdqfc/mub.hpp"
#include "hdqfc/optics.hpp"
#include "hdqfc/workbench.hpp"

namespace hdqfc::workbench {
namespace {

std::string collection_name(qudit::CollectionModel m) {
    switch (m) {
        case qudit::CollectionModel::ideal: return "ideal";
        case qudit::CollectionModel::projective: return "projective";
        case qudit::CollectionModel::per_mode: return "per_mode";
    }
    return "ideal";
}

// Reads the known keys of one object, records type errors and unknown keys.
class Reader {
public:
    Reader(const json& doc, std::string path, std::vector<ConfigIssue>& issues)
        : path_(std::move(path)), issues_(issues) {
        if (doc.is_null()) return;
        if (!doc.is_object()) {
            error("", "expected an object");
            return;
        }
        obj_ = &doc;
    }

    ~Reader() {
        if (!obj_) return;
        for (const auto& [key, _] : obj_->items())
            if (!seen_.count(key)) error(key, "unknown key");
    }

    Reader child(const std::string& key) {
        seen_.insert(key);
        static const json null_doc;
        if (!obj_ || !obj_->contains(key)) return Reader(null_doc, join(key), issues_);
        return Reader(obj_->at(key), join(key), issues_);
    }

    void number(const std::string& key, double& out) {
        if (const json* v = get(key)) {
            if (v->is_number()) out = v->get<double>();
            else error(key, "expected a number");
        }
    }

    void optional_number(const std::string& key, std::optional<double>& out) {
        if (const json* v = get(key)) {
            if (v->is_null()) out.reset();
            else if (v->is_number()) out = v->get<double>();
            else error(key, "expected a number or null");
        }
    }

    template <class Int>
    void integer(const std::string& key, Int& out) {
        if (const json* v = get(key)) {
            if (v->is_number_integer() && (std::is_signed_v<Int> || v->get<long long>() >= 0)) out = v->get<Int>();
            else error(key, std::is_signed_v<Int> ? "expected an integer" : "expected a non-negative integer");
        }
    }

    void boolean(const std::string& key, bool& out) {
        if (const json* v = get(key)) {
            if (v->is_boolean()) out = v->get<bool>();
            else error(key, "expected true or false");
        }
    }

    void string(const std::string& key, std::string& out) {
        if (const json* v = get(key)) {
            if (v->is_string()) out = v->get<std::string>();
            else error(key, "expected a string");
        }
    }

    template <class T>
    void list(const std::string& key, std::vector<T>& out) {
        if (const json* v = get(key)) {
            bool ok = v->is_array();
            if (ok)
                for (const auto& e : *v) ok = ok && (std::is_integral_v<T> ? e.is_number_integer() : e.is_number());
            if (ok) out = v->get<std::vector<T>>();
            else error(key, std::is_integral_v<T> ? "expected an array of integers" : "expected an array of numbers");
        }
    }

    void complex_list(const std::string& key, std::vector<qudit::cplx>& out) {
        if (const json* v = get(key)) {
            std::vector<qudit::cplx> tmp;
            bool ok = v->is_array();
            if (ok)
                for (const auto& e : *v) {
                    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
                        tmp.emplace_back(e[0].get<double>(), e[1].get<double>());
                    else ok = false;
                }
            if (ok) out = std::move(tmp);
            else error(key, "expected an array of [re, im] pairs");
        }
    }

    void collection(const std::string& key, qudit::CollectionModel& out) {
        std::string name = collection_name(out);
        string(key, name);
        if (name == "ideal") out = qudit::CollectionModel::ideal;
        else if (name == "projective") out = qudit::CollectionModel::projective;
        else if (name == "per_mode") out = qudit::CollectionModel::per_mode;
        else error(key, "expected ideal, projective or per_mode");
    }

    void pump_kind(const std::string& key, sfg::PumpKind& out) {
        std::string name = sfg::to_string(out);
        string(key, name);
        try {
            out = sfg::pump_kind_from_string(name);
        } catch (const ValidationError&) {
            error(key, "expected gaussian or flat_top");
        }
    }

    void error(const std::string& key, const std::string& message) { issues_.push_back({join(key), message, false}); }
    std::string join(const std::string& key) const {
        if (key.empty()) return path_;
        return path_.empty() ? key : path_ + "." + key;
    }

private:
    const json* get(const std::string& key) {
        seen_.insert(key);
        if (!obj_ || !obj_->contains(key)) return nullptr;
        return &obj_->at(key);
    }

    std::string path_;
    std::vector<ConfigIssue>& issues_;
    const json* obj_ = nullptr;
    std::set<std::string> seen_;
};

void read(const json& doc, ScenarioConfig& c, std::vector<ConfigIssue>& issues) {
    Reader root(doc, "", issues);
    root.string("scenario", c.scenario);
    root.integer("seed", c.seed);
    root.string("output_dir", c.output_dir);
    {
        auto r = root.child("crystal");
        r.number("length_m", c.crystal.length);
        r.number("d_eff_m_per_v", c.crystal.d_eff);
        r.optional_number("poling_period_m", c.crystal.poling_period);
        r.number("n_signal", c.crystal.n_signal);
        r.number("n_visible", c.crystal.n_visible);
        r.number("n_pump", c.crystal.n_pump);
    }
    {
        auto r = root.child("triplet");
        std::optional<double> visible;
        r.number("pump_m", c.triplet.pump);
        r.number("signal_m", c.triplet.signal);
        r.optional_number("visible_m", visible);
        c.triplet.visible = visible.value_or(1.0 / (1.0 / c.triplet.pump + 1.0 / c.triplet.signal));
    }
    {
        auto r = root.child("grid");
        r.integer("n_points", c.grid.n_points);
        r.integer("z_steps", c.grid.z_steps);
        r.optional_number("pitch_m", c.grid.pitch);
    }
    {
        auto r = root.child("pump");
        r.number("power_w", c.pump.power);
        r.number("flat_top_width_m", c.pump.flat_top_width);
        r.number("gaussian_waist_m", c.pump.gaussian_waist);
        r.integer("edge_order", c.pump.edge_order);
        r.boolean("diffraction", c.pump.diffraction);
    }
    {
        auto r = root.child("signal");
        r.number("waist_m", c.signal.waist);
        r.number("power_w", c.signal.power);
    }
    {
        auto r = root.child("fig1");
        r.list("charges", c.fig1.charges);
        r.list("gammas", c.fig1.gammas);
        r.list("surface_charges", c.fig1.surface_charges);
    }
    {
        auto r = root.child("fig3");
        r.list("crosstalk_charges", c.fig3.crosstalk_charges);
        r.number("crosstalk_duration_s", c.fig3.crosstalk_duration);
        r.number("crosstalk_rate_hz", c.fig3.crosstalk_rate);
        r.number("crosstalk_dark_rate_hz", c.fig3.crosstalk_dark_rate);
        r.number("collection_decay", c.fig3.collection_decay);
        r.integer("phase_steps", c.fig3.phase_steps);
        r.number("interference_rate_hz", c.fig3.interference_rate);
        r.number("interference_dark_rate_hz", c.fig3.interference_dark_rate);
        r.list("interference_durations_s", c.fig3.interference_durations);
    }
    {
        auto r = root.child("fig4");
        r.list("dimensions", c.fig4.dimensions);
        r.list("durations_s", c.fig4.durations);
        r.list("dark_counts", c.fig4.dark_counts);
        r.number("source_rate_hz", c.fig4.source_rate);
        r.collection("collection", c.fig4.collection);
        r.integer("replicates", c.fig4.replicates);
    }
    {
        auto r = root.child("table1");
        r.list("charges", c.table1.charges);
    }
    {
        auto r = root.child("sweep");
        r.pump_kind("pump_kind", c.sweep.kind);
        r.list("charges", c.sweep.charges);
        r.list("gammas", c.sweep.gammas);
    }
    {
        auto r = root.child("tomo");
        r.integer("dimension", c.tomo.dimension);
        r.complex_list("amplitudes", c.tomo.amplitudes);
        r.number("duration_s", c.tomo.duration);
        r.number("source_rate_hz", c.tomo.source_rate);
        r.number("dark_rate_hz", c.tomo.dark_rate);
        r.collection("collection", c.tomo.collection);
        r.boolean("subtract_dark", c.tomo.subtract_dark);
    }
}

template <class F>
void expect(std::vector<ConfigIssue>& issues, const std::string& path, F&& check) {
    try {
        check();
    } catch (const std::exception& e) {
        issues.push_back({path, e.what(), false});
    }
}

void check(const ScenarioConfig& c, std::vector<ConfigIssue>& issues) {
    auto fail = [&](const std::string& path, const std::string& msg) { issues.push_back({path, msg, false}); };
    auto warn = [&](const std::string& path, const std::string& msg) { issues.push_back({path, msg, true}); };

    const auto& names = scenario_names();
    if (std::find(names.begin(), names.end(), c.scenario) == names.end()) fail("scenario", "unknown scenario");

    expect(issues, "crystal", [&] { c.crystal.validate(); });
    expect(issues, "triplet", [&] { c.triplet.validate(); });
    expect(issues, "crystal", [&] {
        if (!c.crystal.poling_period) sfg::qpm_period(c.crystal, c.triplet);
    });

    const GridSpec probe{c.grid.n_points, c.grid.pitch.value_or(1e-6)};
    expect(issues, "grid", [&] { probe.validate(); });
    if (c.grid.z_steps < 50) fail("grid.z_steps", "must be >= 50");

    if (!(c.pump.power >= 0.0)) fail("pump.power_w", "must be non-negative");
    if (!(c.pump.flat_top_width > 0.0)) fail("pump.flat_top_width_m", "must be positive");
    if (!(c.pump.gaussian_waist > 0.0)) fail("pump.gaussian_waist_m", "must be positive");
    if (c.pump.edge_order != optics::FlatTopSpec::hard_edge && c.pump.edge_order < 8)
        fail("pump.edge_order", "must be >= 8 or 0 (hard edge)");
    if (!(c.signal.waist > 0.0)) fail("signal.waist_m", "must be positive");
    if (!(c.signal.power > 0.0)) fail("signal.power_w", "must be positive");

    if (c.grid.pitch) {
        int max_l = 0;
        for (int l : c.fig1.charges) max_l = std::max(max_l, std::abs(l));
        for (int l : c.table1.charges) max_l = std::max(max_l, std::abs(l));
        const double largest = std::max({c.pump.flat_top_width, c.pump.gaussian_waist,
                                         c.signal.waist * std::sqrt(max_l + 1.0)});
        if (probe.window() < 6.0 * largest)
            warn("grid.pitch_m", "window " + std::to_string(probe.window()) + " m is below 6x the largest beam radius");
    }

    for (double g : c.fig1.gammas)
        if (!(g > 0.0)) fail("fig1.gammas", "gamma values must be positive");
    for (double g : c.sweep.gammas)
        if (!(g > 0.0)) fail("sweep.gammas", "gamma values must be positive");

    const auto& f3 = c.fig3;
    if (f3.crosstalk_charges.empty()) fail("fig3.crosstalk_charges", "must not be empty");
    else {
        const int h = static_cast<int>(f3.crosstalk_charges.size()) / 2;
        bool symmetric = f3.crosstalk_charges.size() % 2 == 1 && f3.crosstalk_charges.size() >= 3;
        for (std::size_t i = 0; symmetric && i < f3.crosstalk_charges.size(); ++i)
            symmetric = f3.crosstalk_charges[i] == static_cast<int>(i) - h;
        if (!symmetric) fail("fig3.crosstalk_charges", "must be the symmetric range -h..h");
    }
    for (auto [v, p] : {std::pair{f3.crosstalk_duration, "crosstalk_duration_s"}, {f3.crosstalk_rate, "crosstalk_rate_hz"},
                        {f3.crosstalk_dark_rate, "crosstalk_dark_rate_hz"}, {f3.collection_decay, "collection_decay"},
                        {f3.interference_rate, "interference_rate_hz"},
                        {f3.interference_dark_rate, "interference_dark_rate_hz"}})
        if (!(v >= 0.0)) fail(std::string("fig3.") + p, "must be non-negative");
    if (f3.phase_steps < 3) fail("fig3.phase_steps", "must be >= 3");
    if (f3.interference_durations.size() != 2) fail("fig3.interference_durations_s", "needs one entry each for d = 2 and d = 3");
    for (double t : f3.interference_durations)
        if (!(t >= 0.0)) fail("fig3.interference_durations_s", "durations must be non-negative");

    const auto& f4 = c.fig4;
    if (f4.durations.size() != f4.dimensions.size() || f4.dark_counts.size() != f4.dimensions.size())
        fail("fig4", "dimensions, durations_s and dark_counts must have equal lengths");
    for (int d : f4.dimensions)
        if (!qudit::is_prime(d) || d > 7) fail("fig4.dimensions", "dimensions must be primes up to 7");
    for (double t : f4.durations)
        if (!(t > 0.0)) fail("fig4.durations_s", "durations must be positive");
    for (double n : f4.dark_counts)
        if (!(n >= 0.0)) fail("fig4.dark_counts", "dark counts must be non-negative");
    if (!(f4.source_rate > 0.0)) fail("fig4.source_rate_hz", "must be positive");
    if (f4.replicates < 1) fail("fig4.replicates", "must be >= 1");

    const auto& t = c.tomo;
    if (!qudit::is_prime(t.dimension)) fail("tomo.dimension", "must be prime");
    if (!t.amplitudes.empty() && static_cast<int>(t.amplitudes.size()) != t.dimension)
        fail("tomo.amplitudes", "needs one amplitude per dimension");
    if (!(t.duration > 0.0)) fail("tomo.duration_s", "must be positive");
    if (!(t.source_rate > 0.0)) fail("tomo.source_rate_hz", "must be positive");
    if (!(t.dark_rate >= 0.0)) fail("tomo.dark_rate_hz", "must be non-negative");
}

}  // namespace

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"fig1", "fig3", "fig4", "table1", "sweep", "tomo"};
    return names;
}

std::vector<ConfigIssue> validate_config(const json& document) {
    std::vector<ConfigIssue> issues;
    ScenarioConfig c;
    read(document, c, issues);
    if (issues.empty()) check(c, issues);
    return issues;
}

ScenarioConfig parse_config(const json& document) {
    std::vector<ConfigIssue> issues;
    ScenarioConfig c;
    read(document, c, issues);
    if (issues.empty()) check(c, issues);
    std::ostringstream msg;
    bool failed = false;
    for (const auto& i : issues) {
        if (i.warning) {
            warn(i.path + ": " + i.message);
            continue;
        }
        msg << (failed ? "; " : "invalid config: ") << i.path << ": " << i.message;
        failed = true;
    }
    if (failed) throw ValidationError(msg.str());
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

json to_json(const ScenarioConfig& c) {
    json j;
    j["scenario"] = c.scenario;
    j["seed"] = c.seed;
    j["output_dir"] = c.output_dir;
    j["crystal"] = {{"length_m", c.crystal.length},
                    {"d_eff_m_per_v", c.crystal.d_eff},
                    {"poling_period_m", c.crystal.poling_period ? json(*c.crystal.poling_period) : json(nullptr)},
                    {"n_signal", c.crystal.n_signal},
                    {"n_visible", c.crystal.n_visible},
                    {"n_pump", c.crystal.n_pump}};
    j["triplet"] = {{"pump_m", c.triplet.pump}, {"signal_m", c.triplet.signal}, {"visible_m", c.triplet.visible}};
    j["grid"] = {{"n_points", c.grid.n_points},
                 {"z_steps", c.grid.z_steps},
                 {"pitch_m", c.grid.pitch ? json(*c.grid.pitch) : json(nullptr)}};
    j["pump"] = {{"power_w", c.pump.power},
                 {"flat_top_width_m", c.pump.flat_top_width},
                 {"gaussian_waist_m", c.pump.gaussian_waist},
                 {"edge_order", c.pump.edge_order},
                 {"diffraction", c.pump.diffraction}};
    j["signal"] = {{"waist_m", c.signal.waist}, {"power_w", c.signal.power}};
    j["fig1"] = {{"charges", c.fig1.charges}, {"gammas", c.fig1.gammas}, {"surface_charges", c.fig1.surface_charges}};
    j["fig3"] = {{"crosstalk_charges", c.fig3.crosstalk_charges},
                 {"crosstalk_duration_s", c.fig3.crosstalk_duration},
                 {"crosstalk_rate_hz", c.fig3.crosstalk_rate},
                 {"crosstalk_dark_rate_hz", c.fig3.crosstalk_dark_rate},
                 {"collection_decay", c.fig3.collection_decay},
                 {"phase_steps", c.fig3.phase_steps},
                 {"interference_rate_hz", c.fig3.interference_rate},
                 {"interference_dark_rate_hz", c.fig3.interference_dark_rate},
                 {"interference_durations_s", c.fig3.interference_durations}};
    j["fig4"] = {{"dimensions", c.fig4.dimensions},
                 {"durations_s", c.fig4.durations},
                 {"dark_counts", c.fig4.dark_counts},
                 {"source_rate_hz", c.fig4.source_rate},
                 {"collection", collection_name(c.fig4.collection)},
                 {"replicates", c.fig4.replicates}};
    j["table1"] = {{"charges", c.table1.charges}};
    j["sweep"] = {{"pump_kind", sfg::to_string(c.sweep.kind)}, {"charges", c.sweep.charges}, {"gammas", c.sweep.gammas}};
    json amps = json::array();
    for (const auto& a : c.tomo.amplitudes) amps.push_back({a.real(), a.imag()});
    j["tomo"] = {{"dimension", c.tomo.dimension},
                 {"amplitudes", amps},
                 {"duration_s", c.tomo.duration},
                 {"source_rate_hz", c.tomo.source_rate},
                 {"dark_rate_hz", c.tomo.dark_rate},
                 {"collection", collection_name(c.tomo.collection)},
                 {"subtract_dark", c.tomo.subtract_dark}};
    return j;
}

}  // namespace hdqfc::workbench

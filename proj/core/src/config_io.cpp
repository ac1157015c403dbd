#include "rispr/config_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace rispr {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where)
{
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw DomainError("config: unknown key '" + it.key() + "' in " + where);
}

double number(const json& j, const std::string& what)
{
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    if (!j.is_number())
        throw DomainError("config: '" + what + "' must be a number");
    return j.get<double>();
}

json number_json(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    return v;
}

std::vector<double> numbers(const json& j, const std::string& what)
{
    if (!j.is_array())
        throw DomainError("config: '" + what + "' must be an array");
    std::vector<double> out;
    for (const auto& e : j)
        out.push_back(number(e, what));
    return out;
}

json numbers_json(const std::vector<double>& v)
{
    json out = json::array();
    for (double x : v)
        out.push_back(number_json(x));
    return out;
}

GainSpec gain(const json& j, const std::string& what)
{
    if (j.is_string() && j.get<std::string>() == "off")
        return GainSpec::off();
    if (!j.is_object())
        throw DomainError("config: '" + what + "' must be {\"db\": ..., \"phase_deg\": ...} or \"off\"");
    reject_unknown(j, {"db", "phase_deg"}, what);
    if (!j.contains("db"))
        throw DomainError("config: '" + what + "' needs a 'db' entry");
    GainSpec g{number(j.at("db"), what + ".db"), std::nullopt};
    if (j.contains("phase_deg") && !j.at("phase_deg").is_null())
        g.phase_deg = number(j.at("phase_deg"), what + ".phase_deg");
    return g;
}

json gain_json(const GainSpec& g)
{
    if (g.is_off())
        return "off";
    json out{{"db", g.db}};
    if (g.phase_deg)
        out["phase_deg"] = *g.phase_deg;
    return out;
}

/// Either a list of K entries or a single entry applied to every target.
template <typename T, typename F>
std::vector<T> per_target(const json& j, std::size_t k, F&& one)
{
    std::vector<T> out;
    if (j.is_array()) {
        for (const auto& e : j)
            out.push_back(one(e));
    } else {
        out.assign(k, one(j));
    }
    return out;
}

AngleList grid_from(const json& j)
{
    if (j.is_array())
        return numbers(j, "grid");
    if (!j.is_object())
        throw DomainError("config: grid must be a list or {start, stop, step}");
    reject_unknown(j, {"start", "stop", "step"}, "grid");
    return make_grid(number(j.at("start"), "grid.start"), number(j.at("stop"), "grid.stop"),
                     number(j.at("step"), "grid.step"));
}

json grid_json(const AngleList& grid)
{
    if (grid.size() >= 2) {
        const double step = grid[1] - grid[0];
        if (step > 0.0 && make_grid(grid.front(), grid.back(), step) == grid)
            return {{"start", grid.front()}, {"stop", grid.back()}, {"step", step}};
    }
    return numbers_json(grid);
}

ArraySpec array_from(const json& j, ArraySpec a, const std::string& what)
{
    reject_unknown(j, {"elements", "spacing"}, what);
    if (j.contains("elements")) a.elements = j.at("elements").get<int>();
    if (j.contains("spacing")) a.spacing = number(j.at("spacing"), what + ".spacing");
    a.validate();
    return a;
}

DelayModel delay_model_from(const std::string& s)
{
    if (s == "sample_shift") return DelayModel::SampleShift;
    if (s == "phase_only") return DelayModel::PhaseOnly;
    throw DomainError("config: delay_model must be sample_shift or phase_only");
}

std::string to_string(DelayModel m)
{
    return m == DelayModel::SampleShift ? "sample_shift" : "phase_only";
}

WaveformKind waveform_from(const std::string& s)
{
    if (s == "gaussian") return WaveformKind::Gaussian;
    if (s == "qpsk") return WaveformKind::Qpsk;
    throw DomainError("config: waveform must be gaussian or qpsk");
}

void apply_delays(const json& j, SceneConfig& scene, std::set<std::string>& given)
{
    reject_unknown(j, {"unit", "ap_ris", "ris_pr", "ap_pr", "ap_target", "target_ris", "target_pr"},
                   "scene.delays");
    double scale = 1.0;
    if (j.contains("unit")) {
        const auto unit = j.at("unit").get<std::string>();
        if (unit == "samples")
            scale = 1.0 / scene.sample_rate_hz;
        else if (unit != "seconds")
            throw DomainError("config: delays.unit must be seconds or samples");
    }
    auto& d = scene.delays;
    const std::size_t k = scene.target_count();
    auto scalar = [&](const char* key, double& field) {
        if (j.contains(key)) field = scale * number(j.at(key), std::string("delays.") + key);
    };
    auto list = [&](const char* key, std::vector<double>& field) {
        if (!j.contains(key)) return;
        field = per_target<double>(j.at(key), k, [&](const json& e) {
            return scale * number(e, std::string("delays.") + key);
        });
        given.insert(std::string("delays.") + key);
    };
    scalar("ap_ris", d.ap_ris);
    scalar("ris_pr", d.ris_pr);
    scalar("ap_pr", d.ap_pr);
    list("ap_target", d.ap_target);
    list("target_ris", d.target_ris);
    list("target_pr", d.target_pr);
}

void apply_scene(const json& j, SceneSpec& spec)
{
    reject_unknown(j,
                   {"target_aoas_ris", "target_aoas_pr", "aoa_ap_ris", "aoa_ris_pr", "aod_ris_pr",
                    "aoa_ap_pr", "gain_targets", "gain_ap_ris", "gain_ris_pr", "gain_ap_pr",
                    "gain_targets_pr", "rician_ap_pr", "rician_targets_pr", "delays", "carrier_hz",
                    "sample_rate_hz", "delay_model"},
                   "scene");
    SceneConfig& b = spec.base;
    const std::size_t k_before = b.target_count();
    std::set<std::string> given;

    if (j.contains("target_aoas_ris")) b.target_aoas_ris = numbers(j.at("target_aoas_ris"), "target_aoas_ris");
    if (j.contains("target_aoas_pr")) b.target_aoas_pr = numbers(j.at("target_aoas_pr"), "target_aoas_pr");
    const std::size_t k = b.target_count();
    for (const char* key : {"aoa_ap_ris", "aoa_ris_pr", "aod_ris_pr", "aoa_ap_pr", "rician_ap_pr",
                            "carrier_hz", "sample_rate_hz"}) {
        if (!j.contains(key)) continue;
        const double v = number(j.at(key), key);
        const std::string s = key;
        if (s == "aoa_ap_ris") b.aoa_ap_ris = v;
        else if (s == "aoa_ris_pr") b.aoa_ris_pr = v;
        else if (s == "aod_ris_pr") b.aod_ris_pr = v;
        else if (s == "aoa_ap_pr") b.aoa_ap_pr = v;
        else if (s == "rician_ap_pr") b.rician_ap_pr = v;
        else if (s == "carrier_hz") b.carrier_hz = v;
        else b.sample_rate_hz = v;
    }
    if (j.contains("delay_model")) b.delay_model = delay_model_from(j.at("delay_model").get<std::string>());

    if (j.contains("gain_targets")) {
        spec.gain_targets = per_target<GainSpec>(j.at("gain_targets"), k,
                                                 [](const json& e) { return gain(e, "gain_targets"); });
        given.insert("gain_targets");
    }
    if (j.contains("gain_targets_pr")) {
        spec.gain_targets_pr = per_target<GainSpec>(
            j.at("gain_targets_pr"), k, [](const json& e) { return gain(e, "gain_targets_pr"); });
        given.insert("gain_targets_pr");
    }
    if (j.contains("gain_ap_ris")) spec.gain_ap_ris = gain(j.at("gain_ap_ris"), "gain_ap_ris");
    if (j.contains("gain_ris_pr")) spec.gain_ris_pr = gain(j.at("gain_ris_pr"), "gain_ris_pr");
    if (j.contains("gain_ap_pr")) spec.gain_ap_pr = gain(j.at("gain_ap_pr"), "gain_ap_pr");
    if (j.contains("rician_targets_pr")) {
        b.rician_targets_pr = per_target<double>(j.at("rician_targets_pr"), k,
                                                 [](const json& e) { return number(e, "rician_targets_pr"); });
        given.insert("rician_targets_pr");
    }
    if (j.contains("delays"))
        apply_delays(j.at("delays"), b, given);

    // Per-target entries inherited from the base with a different K are
    // refilled from the default scene of the new size.
    if (k != k_before) {
        const SceneSpec fresh = default_scene(k);
        if (!given.count("gain_targets")) spec.gain_targets = fresh.gain_targets;
        if (!given.count("gain_targets_pr")) spec.gain_targets_pr = fresh.gain_targets_pr;
        if (!given.count("rician_targets_pr")) b.rician_targets_pr = fresh.base.rician_targets_pr;
        const double s = fresh.base.sample_rate_hz / b.sample_rate_hz;
        auto refill = [&](const char* key, std::vector<double>& field, const std::vector<double>& src) {
            if (given.count(std::string("delays.") + key)) return;
            field.clear();
            for (double v : src) field.push_back(v * s);
        };
        refill("ap_target", b.delays.ap_target, fresh.base.delays.ap_target);
        refill("target_ris", b.delays.target_ris, fresh.base.delays.target_ris);
        refill("target_pr", b.delays.target_pr, fresh.base.delays.target_pr);
    }
}

void apply_localizer(const json& j, LocalizerConfig& c)
{
    reject_unknown(j, {"mu", "grid", "threshold", "epsilon", "include_b", "normalization"}, "localizer");
    if (j.contains("mu")) c.mu = number(j.at("mu"), "mu");
    if (j.contains("grid")) c.grid = grid_from(j.at("grid"));
    if (j.contains("threshold")) c.threshold = number(j.at("threshold"), "threshold");
    if (j.contains("epsilon")) c.epsilon = number(j.at("epsilon"), "epsilon");
    if (j.contains("include_b")) c.include_b = j.at("include_b").get<bool>();
    if (j.contains("normalization")) {
        const auto s = j.at("normalization").get<std::string>();
        if (s == "input_norm") c.normalization = NlmsNormalization::InputNorm;
        else if (s == "input_energy") c.normalization = NlmsNormalization::InputEnergy;
        else throw DomainError("config: normalization must be input_norm or input_energy");
    }
}

ExperimentConfig preset_named(const std::string& name)
{
    if (name == "spectrum") return spectrum_preset();
    if (name == "mse-sweep") return mse_sweep_preset();
    if (name == "beampattern") return beampattern_preset();
    throw DomainError("config: unknown preset '" + name + "'");
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text)
{
    return parse_config(json_text, ExperimentConfig{});
}

ExperimentConfig parse_config(const std::string& json_text, const ExperimentConfig& base)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw DomainError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw DomainError("config: top level must be an object");
    reject_unknown(j,
                   {"preset", "scene", "ris", "pr", "localizer", "n_epoch", "samples", "waveform",
                    "snr_db", "noise_variance", "noise_floor", "trials", "seed", "output_dir", "parallel",
                    "m_values", "methods", "ap_placements", "beampattern_grid",
                    "notch_exclusion_deg", "null_directions"},
                   "config");

    ExperimentConfig c = j.contains("preset") ? preset_named(j.at("preset").get<std::string>()) : base;
    try {
        if (j.contains("scene")) apply_scene(j.at("scene"), c.scene);
        if (j.contains("ris")) c.ris = array_from(j.at("ris"), c.ris, "ris");
        if (j.contains("pr")) c.pr = array_from(j.at("pr"), c.pr, "pr");
        if (j.contains("localizer")) apply_localizer(j.at("localizer"), c.localizer);
        if (j.contains("n_epoch")) c.n_epoch = j.at("n_epoch").get<int>();
        if (j.contains("samples")) c.samples = j.at("samples").get<int>();
        if (j.contains("waveform")) c.waveform = waveform_from(j.at("waveform").get<std::string>());
        if (j.contains("snr_db")) {
            const auto& s = j.at("snr_db");
            c.snr_db = s.is_array() ? numbers(s, "snr_db") : std::vector<double>{number(s, "snr_db")};
        }
        if (j.contains("noise_variance")) c.noise_variance = number(j.at("noise_variance"), "noise_variance");
        if (j.contains("noise_floor")) {
            const auto& f = j.at("noise_floor");
            c.noise_floor = f.is_null() ? std::nullopt : std::optional<double>(number(f, "noise_floor"));
        }
        if (j.contains("trials")) c.trials = j.at("trials").get<std::size_t>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
        if (j.contains("parallel")) c.parallel = j.at("parallel").get<unsigned>();
        if (j.contains("m_values")) c.m_values = j.at("m_values").get<std::vector<int>>();
        if (j.contains("methods")) {
            c.methods.clear();
            for (const auto& m : j.at("methods"))
                c.methods.push_back(method_from_string(m.get<std::string>()));
        }
        if (j.contains("ap_placements")) c.ap_placements = numbers(j.at("ap_placements"), "ap_placements");
        if (j.contains("beampattern_grid")) c.beampattern_grid = grid_from(j.at("beampattern_grid"));
        if (j.contains("notch_exclusion_deg"))
            c.notch_exclusion_deg = number(j.at("notch_exclusion_deg"), "notch_exclusion_deg");
        if (j.contains("null_directions")) c.null_directions = numbers(j.at("null_directions"), "null_directions");
    } catch (const json::exception& e) {
        throw DomainError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    return load_config(path, ExperimentConfig{});
}

ExperimentConfig load_config(const std::string& path, const ExperimentConfig& base)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str(), base);
    } catch (const DomainError& e) {
        throw DomainError(path + ": " + e.what());
    }
}

std::string dump_config(const ExperimentConfig& c)
{
    const SceneConfig& b = c.scene.base;
    json gains_t = json::array(), gains_tp = json::array();
    for (const auto& g : c.scene.gain_targets) gains_t.push_back(gain_json(g));
    for (const auto& g : c.scene.gain_targets_pr) gains_tp.push_back(gain_json(g));

    json scene{
        {"target_aoas_ris", numbers_json(b.target_aoas_ris)},
        {"target_aoas_pr", numbers_json(b.target_aoas_pr)},
        {"aoa_ap_ris", b.aoa_ap_ris},
        {"aoa_ris_pr", b.aoa_ris_pr},
        {"aod_ris_pr", b.aod_ris_pr},
        {"aoa_ap_pr", b.aoa_ap_pr},
        {"gain_targets", gains_t},
        {"gain_ap_ris", gain_json(c.scene.gain_ap_ris)},
        {"gain_ris_pr", gain_json(c.scene.gain_ris_pr)},
        {"gain_ap_pr", gain_json(c.scene.gain_ap_pr)},
        {"gain_targets_pr", gains_tp},
        {"rician_ap_pr", number_json(b.rician_ap_pr)},
        {"rician_targets_pr", numbers_json(b.rician_targets_pr)},
        {"delays",
         {{"unit", "seconds"},
          {"ap_ris", b.delays.ap_ris},
          {"ris_pr", b.delays.ris_pr},
          {"ap_pr", b.delays.ap_pr},
          {"ap_target", numbers_json(b.delays.ap_target)},
          {"target_ris", numbers_json(b.delays.target_ris)},
          {"target_pr", numbers_json(b.delays.target_pr)}}},
        {"carrier_hz", b.carrier_hz},
        {"sample_rate_hz", b.sample_rate_hz},
        {"delay_model", to_string(b.delay_model)},
    };
    const auto& l = c.localizer;
    json localizer{
        {"mu", l.mu},
        {"grid", grid_json(l.grid)},
        {"threshold", l.threshold},
        {"epsilon", l.epsilon},
        {"include_b", l.include_b},
        {"normalization", l.normalization == NlmsNormalization::InputNorm ? "input_norm" : "input_energy"},
    };
    json methods = json::array();
    for (Method m : c.methods) methods.push_back(to_string(m));

    json out{
        {"scene", scene},
        {"ris", {{"elements", c.ris.elements}, {"spacing", c.ris.spacing}}},
        {"pr", {{"elements", c.pr.elements}, {"spacing", c.pr.spacing}}},
        {"localizer", localizer},
        {"n_epoch", c.n_epoch},
        {"samples", c.samples},
        {"waveform", c.waveform == WaveformKind::Gaussian ? "gaussian" : "qpsk"},
        {"snr_db", numbers_json(c.snr_db)},
        {"noise_variance", c.noise_variance},
        {"noise_floor", c.noise_floor ? json(*c.noise_floor) : json(nullptr)},
        {"trials", c.trials},
        {"seed", c.seed},
        {"output_dir", c.output_dir},
        {"parallel", c.parallel},
        {"m_values", c.m_values},
        {"methods", methods},
        {"ap_placements", numbers_json(c.ap_placements)},
        {"beampattern_grid", grid_json(c.beampattern_grid)},
        {"notch_exclusion_deg", c.notch_exclusion_deg},
        {"null_directions", numbers_json(c.null_directions)},
    };
    return out.dump(2);
}

}  // namespace rispr

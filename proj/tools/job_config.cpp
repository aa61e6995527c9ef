#include "job_config.hpp"

#include <stdexcept>
#include <string_view>

#include "salz/io.hpp"

namespace salz::cli {

using nlohmann::json;
using nlohmann::ordered_json;

RangeSpec parse_range(const std::string& text) {
    const auto first = text.find(':');
    const auto second = first == std::string::npos ? std::string::npos : text.find(':', first + 1);
    if (second == std::string::npos || text.find(':', second + 1) != std::string::npos)
        throw std::invalid_argument("range '" + text + "' is not of the form lo:hi:n");
    const auto lo = parse_double(std::string_view(text).substr(0, first));
    const auto hi = parse_double(std::string_view(text).substr(first + 1, second - first - 1));
    const auto n = parse_double(std::string_view(text).substr(second + 1));
    if (!lo || !hi || !n || *n < 1 || *n != static_cast<double>(static_cast<std::size_t>(*n)))
        throw std::invalid_argument("range '" + text + "' is not of the form lo:hi:n");
    return {*lo, *hi, static_cast<std::size_t>(*n)};
}

std::string format_range(const RangeSpec& r) {
    return format_shortest(r.lo) + ":" + format_shortest(r.hi) + ":" + std::to_string(r.n);
}

std::set<Formula> parse_formulas(const std::string& text) {
    std::set<Formula> out;
    if (text.empty() || text == "none") return out;
    for (const auto& f : split_csv_line(text)) {
        if (f == "lz") out.insert(Formula::lz);
        else if (f == "dk") out.insert(Formula::dk);
        else if (f == "sl") out.insert(Formula::sl);
        else throw std::invalid_argument("unknown comparison formula '" + f + "'");
    }
    return out;
}

namespace {

template <class T>
ordered_json opt(const std::optional<T>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json to_json(const SynthParams& s) {
    return {{"seed", s.seed},
            {"n_modes", s.n_modes},
            {"corr_length_nm", s.corr_length},
            {"mean_coupling_ueV", s.mean_coupling},
            {"extent_nm", s.extent},
            {"samples_per_corr", s.samples_per_corr}};
}

// Reads keys out of one JSON object and rejects the leftovers.
class Section {
public:
    Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
        if (!j_.is_object()) throw std::invalid_argument("config: '" + name_ + "' must be an object");
    }

    template <class T>
    void get(const char* key, T& out) {
        const auto it = j_.find(key);
        if (it == j_.end()) return;
        seen_.insert(key);
        try {
            out = it->template get<T>();
        } catch (const json::exception&) {
            throw std::invalid_argument("config: bad value for '" + name_ + "." + key + "'");
        }
    }

    template <class T>
    void get(const char* key, std::optional<T>& out) {
        const auto it = j_.find(key);
        if (it == j_.end()) return;
        seen_.insert(key);
        if (it->is_null()) {
            out.reset();
            return;
        }
        T v{};
        try {
            v = it->template get<T>();
        } catch (const json::exception&) {
            throw std::invalid_argument("config: bad value for '" + name_ + "." + key + "'");
        }
        out = v;
    }

    const json* child(const char* key) {
        const auto it = j_.find(key);
        if (it == j_.end()) return nullptr;
        seen_.insert(key);
        return &*it;
    }

    void finish() const {
        for (const auto& [k, v] : j_.items())
            if (!seen_.count(k)) throw std::invalid_argument("config: unknown key '" + name_ + "." + k + "'");
    }

private:
    const json& j_;
    std::string name_;
    std::set<std::string> seen_;
};

SynthParams synth_from_json(const json& j, SynthParams s, const std::string& name) {
    Section sec(j, name);
    sec.get("seed", s.seed);
    sec.get("n_modes", s.n_modes);
    sec.get("corr_length_nm", s.corr_length);
    sec.get("mean_coupling_ueV", s.mean_coupling);
    sec.get("extent_nm", s.extent);
    sec.get("samples_per_corr", s.samples_per_corr);
    sec.finish();
    return s;
}

std::optional<RangeSpec> range_from_json(const json* j, std::optional<RangeSpec> base) {
    if (!j) return base;
    if (j->is_null()) return std::nullopt;
    if (!j->is_string()) throw std::invalid_argument("config: ranges are strings lo:hi:n");
    return parse_range(j->get<std::string>());
}

}  // namespace

ordered_json to_json(const PropagationConfig& c) {
    return {{"t0", opt(c.t0)},
            {"rel_tol", c.rel_tol},
            {"abs_tol", c.abs_tol},
            {"conv_tol", c.conv_tol},
            {"max_steps", c.max_steps},
            {"max_doublings", c.max_doublings},
            {"phase_step_fraction", c.phase_step_fraction},
            {"reverse", c.reverse},
            {"hbar", PropagationConfig::hbar}};
}

PropagationConfig propagation_from_json(const json& j, PropagationConfig c) {
    Section sec(j, "propagation");
    sec.get("t0", c.t0);
    sec.get("rel_tol", c.rel_tol);
    sec.get("abs_tol", c.abs_tol);
    sec.get("conv_tol", c.conv_tol);
    sec.get("max_steps", c.max_steps);
    sec.get("max_doublings", c.max_doublings);
    sec.get("phase_step_fraction", c.phase_step_fraction);
    sec.get("reverse", c.reverse);
    double hbar = PropagationConfig::hbar;
    sec.get("hbar", hbar);
    if (hbar != PropagationConfig::hbar) throw std::invalid_argument("config: hbar is fixed to 1");
    sec.finish();
    return c;
}

ordered_json to_json(const JobConfig& job) {
    ordered_json j;
    j["command"] = job.command;

    const SimulateJob& s = job.simulate;
    j["simulate"] = {{"delta0", opt(s.delta0)},
                     {"alpha", opt(s.alpha)},
                     {"beta", opt(s.beta)},
                     {"propagation", to_json(s.prop)},
                     {"json", s.json_path},
                     {"trajectory", s.trajectory_path}};

    const SweepJob& w = job.sweep;
    auto compare = ordered_json::array();
    for (Formula f : w.compare) compare.push_back(std::string(to_string(f)));
    j["sweep"] = {{"alpha_range", w.alpha_range ? ordered_json(format_range(*w.alpha_range)) : ordered_json(nullptr)},
                  {"beta_range", w.beta_range ? ordered_json(format_range(*w.beta_range)) : ordered_json(nullptr)},
                  {"delta0", w.delta0},
                  {"propagation", to_json(w.prop)},
                  {"compare", compare},
                  {"out", w.out_dir},
                  {"workers", opt(w.workers)},
                  {"timing", w.timing}};

    j["landscape"] = {{"synth", to_json(job.landscape.synth)}, {"out", job.landscape.out}};

    const ShuttleJob& h = job.shuttle;
    j["shuttle"] = {{"landscape", h.landscape_path},
                    {"synth", to_json(h.synth)},
                    {"interpolation", to_string(h.interpolation)},
                    {"schedule", to_string(h.schedule)},
                    {"velocity_m_per_s", opt(h.velocity)},
                    {"v_min_m_per_s", opt(h.v_min)},
                    {"v_max_m_per_s", opt(h.v_max)},
                    {"gap_exponent", h.schedule_opts.gap_exponent},
                    {"eps_rel", h.schedule_opts.eps_rel},
                    {"prominence_rel", h.prominence_rel},
                    {"propagation", to_json(h.prop)},
                    {"schedule_in", h.schedule_in},
                    {"schedule_out", h.schedule_out},
                    {"json", h.json_path}};
    return j;
}

JobConfig job_from_json(const json& j, JobConfig job) {
    Section top(j, "config");
    top.get("command", job.command);

    if (const json* s = top.child("simulate")) {
        Section sec(*s, "simulate");
        sec.get("delta0", job.simulate.delta0);
        sec.get("alpha", job.simulate.alpha);
        sec.get("beta", job.simulate.beta);
        if (const json* p = sec.child("propagation")) job.simulate.prop = propagation_from_json(*p, job.simulate.prop);
        sec.get("json", job.simulate.json_path);
        sec.get("trajectory", job.simulate.trajectory_path);
        sec.finish();
    }

    if (const json* s = top.child("sweep")) {
        Section sec(*s, "sweep");
        job.sweep.alpha_range = range_from_json(sec.child("alpha_range"), job.sweep.alpha_range);
        job.sweep.beta_range = range_from_json(sec.child("beta_range"), job.sweep.beta_range);
        sec.get("delta0", job.sweep.delta0);
        if (const json* p = sec.child("propagation")) job.sweep.prop = propagation_from_json(*p, job.sweep.prop);
        if (const json* c = sec.child("compare")) {
            if (!c->is_array()) throw std::invalid_argument("config: sweep.compare must be an array");
            std::string list;
            for (const auto& f : *c) {
                if (!f.is_string()) throw std::invalid_argument("config: sweep.compare entries are strings");
                list += (list.empty() ? "" : ",") + f.get<std::string>();
            }
            job.sweep.compare = parse_formulas(list);
        }
        sec.get("out", job.sweep.out_dir);
        sec.get("workers", job.sweep.workers);
        sec.get("timing", job.sweep.timing);
        sec.finish();
    }

    if (const json* s = top.child("landscape")) {
        Section sec(*s, "landscape");
        if (const json* p = sec.child("synth")) job.landscape.synth = synth_from_json(*p, job.landscape.synth, "landscape.synth");
        sec.get("out", job.landscape.out);
        sec.finish();
    }

    if (const json* s = top.child("shuttle")) {
        ShuttleJob& h = job.shuttle;
        Section sec(*s, "shuttle");
        sec.get("landscape", h.landscape_path);
        if (const json* p = sec.child("synth")) h.synth = synth_from_json(*p, h.synth, "shuttle.synth");
        std::string interp = to_string(h.interpolation);
        sec.get("interpolation", interp);
        if (interp == "monotone-cubic") h.interpolation = Interpolation::monotone_cubic;
        else if (interp == "piecewise-linear") h.interpolation = Interpolation::piecewise_linear;
        else throw std::invalid_argument("config: unknown interpolation '" + interp + "'");
        std::string kind = to_string(h.schedule);
        sec.get("schedule", kind);
        const auto k = parse_schedule_kind(kind);
        if (!k) throw std::invalid_argument("config: unknown schedule '" + kind + "'");
        h.schedule = *k;
        sec.get("velocity_m_per_s", h.velocity);
        sec.get("v_min_m_per_s", h.v_min);
        sec.get("v_max_m_per_s", h.v_max);
        sec.get("gap_exponent", h.schedule_opts.gap_exponent);
        sec.get("eps_rel", h.schedule_opts.eps_rel);
        sec.get("prominence_rel", h.prominence_rel);
        if (const json* p = sec.child("propagation")) h.prop = propagation_from_json(*p, h.prop);
        sec.get("schedule_in", h.schedule_in);
        sec.get("schedule_out", h.schedule_out);
        sec.get("json", h.json_path);
        sec.finish();
    }

    top.finish();
    return job;
}

}  // namespace salz::cli

#pragma once

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "hirota/errors.hpp"
#include "hirota/mat2.hpp"
#include "hirota/params.hpp"
#include "hirota/profile.hpp"
#include "hirota/scattering.hpp"

namespace hirota {

using json = nlohmann::json;

namespace detail {

inline void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                                const std::string& where) {
    if (!obj.is_object()) throw InputError("config: " + where + " must be an object");
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const auto& a : allowed)
            if (key == a) ok = true;
        if (!ok) throw InputError("config: unknown key '" + key + "' in " + where);
    }
}

inline double need_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key))
        throw InputError("config: missing '" + key + "' in " + where);
    if (!obj[key].is_number()) throw InputError("config: '" + key + "' in " + where + " must be a number");
    return obj[key].get<double>();
}

inline double number_or(const json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw InputError("config: '" + key + "' must be a number");
    return obj[key].get<double>();
}

}  // namespace detail

struct ProfileSpec {
    std::string type = "zero";  // zero | sech | gauss | soliton | csv
    double amplitude = 0.0;
    double center = 0.0;
    double width = 1.0;
    std::string csv_path;
    DiscreteSpectrum poles;  // for type = soliton

    InitialProfile realize(double half_width, std::size_t samples, const Params& p) const {
        if (type == "zero") return InitialProfile::zero(half_width, samples);
        if (type == "sech") return InitialProfile::sech(amplitude, center, half_width, samples);
        if (type == "gauss") return InitialProfile::gauss(amplitude, width, half_width, samples);
        if (type == "csv") return InitialProfile::from_csv(csv_path);
        if (type == "soliton") {
            InitialProfile prof = InitialProfile::zero(half_width, samples);
            for (std::size_t j = 0; j < prof.xs.n; ++j)
                prof.q0[j] = q_sol_at(poles, prof.xs[j], 0.0, p);
            return prof;
        }
        throw InputError("config: unknown profile type '" + type + "'");
    }
};

struct GridSpec {
    double half_width = 24.0;
    std::size_t samples = 4096;
};

struct ZGridSpec {
    double min = -2.0, max = 2.0;
    std::size_t count = 201;

    std::vector<double> realize() const {
        if (count < 4 || !(max > min)) throw InputError("config: bad z grid");
        std::vector<double> zs(count);
        for (std::size_t i = 0; i < count; ++i)
            zs[i] = min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
        return zs;
    }
};

struct SearchBoxSpec {
    double re_min = -1.0, re_max = 1.0;
    double im_min = 0.05, im_max = 1.5;
};

struct SimSpec {
    SimConfig cfg;
    std::vector<double> snapshot_times;
};

struct CompareSpec {
    double ray_v = 0.0;
    double t_start = 50.0;
    double t_end = 400.0;
    double geometric_factor = 1.3;
    std::vector<double> window_offsets = {-1.0, -0.5, 0.0, 0.5, 1.0};

    std::vector<double> sample_times() const {
        std::vector<double> ts;
        for (double t = t_start; t <= t_end * (1.0 + 1e-12); t *= geometric_factor)
            ts.push_back(t);
        if (ts.size() < 5)
            throw InputError("config: compare window yields fewer than 5 sample times");
        return ts;
    }
};

struct FieldGridSpec {
    double x_min = -20.0, x_max = 20.0;
    std::size_t count = 801;
    std::vector<double> times = {0.0};
};

struct ResolutionSpec {
    double t_start = 1.0;
    double t_end = 6.0;
    std::size_t count = 11;
};

struct ExperimentConfig {
    Params params;
    ProfileSpec profile;
    GridSpec grid;
    ZGridSpec zgrid;
    std::optional<SearchBoxSpec> search_box;
    std::optional<Cone> cone;
    SimSpec sim;
    CompareSpec compare;
    FieldGridSpec field_grid;
    ResolutionSpec resolution;
    std::vector<SpaceTimePoint> asympt_points;
    int pc_phase_sign = +1;
    bool f_beta21_flip = false;
    unsigned seed = 20240501;
    std::string out_dir = "out";
    json raw;  // config echo for the manifest
};

inline ExperimentConfig parse_config(const json& j) {
    detail::reject_unknown_keys(
        j,
        {"params", "profile", "grid", "zgrid", "search_box", "cone", "sim", "compare",
         "field_grid", "resolution", "asympt_points", "pc_phase_sign", "f_beta21_flip", "seed",
         "out_dir"},
        "top level");
    ExperimentConfig c;
    c.raw = j;
    if (j.contains("params")) {
        detail::reject_unknown_keys(j["params"], {"alpha", "beta"}, "params");
        c.params.alpha = detail::need_number(j["params"], "alpha", "params");
        c.params.beta = detail::need_number(j["params"], "beta", "params");
        if (!std::isfinite(c.params.alpha) || !std::isfinite(c.params.beta))
            throw InputError("config: params must be finite");
    }
    if (j.contains("profile")) {
        const json& pj = j["profile"];
        detail::reject_unknown_keys(
            pj, {"type", "amplitude", "center", "width", "path", "poles"}, "profile");
        if (!pj.contains("type") || !pj["type"].is_string())
            throw InputError("config: profile.type must be a string");
        c.profile.type = pj["type"].get<std::string>();
        c.profile.amplitude = detail::number_or(pj, "amplitude", 0.0);
        c.profile.center = detail::number_or(pj, "center", 0.0);
        c.profile.width = detail::number_or(pj, "width", 1.0);
        if (pj.contains("path")) c.profile.csv_path = pj["path"].get<std::string>();
        if (pj.contains("poles")) {
            for (const auto& pe : pj["poles"]) {
                detail::reject_unknown_keys(pe, {"re_z", "im_z", "re_c", "im_c"}, "profile.poles");
                SpectralPair pr{cx(detail::need_number(pe, "re_z", "poles"),
                                   detail::need_number(pe, "im_z", "poles")),
                                cx(detail::need_number(pe, "re_c", "poles"),
                                   detail::need_number(pe, "im_c", "poles"))};
                if (!(pr.zk.imag() > 0.0))
                    throw InputError("config: pole must satisfy Im z > 0");
                if (pr.ck == cx(0.0)) throw InputError("config: norming constant must be nonzero");
                c.profile.poles.pairs.push_back(pr);
            }
        }
        if (c.profile.type == "soliton" && c.profile.poles.empty())
            throw InputError("config: soliton profile needs poles");
        if (c.profile.type == "csv" && c.profile.csv_path.empty())
            throw InputError("config: csv profile needs path");
    }
    if (j.contains("grid")) {
        detail::reject_unknown_keys(j["grid"], {"half_width", "samples"}, "grid");
        c.grid.half_width = detail::need_number(j["grid"], "half_width", "grid");
        c.grid.samples = static_cast<std::size_t>(detail::need_number(j["grid"], "samples", "grid"));
    }
    if (j.contains("zgrid")) {
        detail::reject_unknown_keys(j["zgrid"], {"min", "max", "count"}, "zgrid");
        c.zgrid.min = detail::need_number(j["zgrid"], "min", "zgrid");
        c.zgrid.max = detail::need_number(j["zgrid"], "max", "zgrid");
        c.zgrid.count = static_cast<std::size_t>(detail::need_number(j["zgrid"], "count", "zgrid"));
    }
    if (j.contains("search_box")) {
        detail::reject_unknown_keys(j["search_box"], {"re_min", "re_max", "im_min", "im_max"},
                                    "search_box");
        SearchBoxSpec b;
        b.re_min = detail::need_number(j["search_box"], "re_min", "search_box");
        b.re_max = detail::need_number(j["search_box"], "re_max", "search_box");
        b.im_min = detail::need_number(j["search_box"], "im_min", "search_box");
        b.im_max = detail::need_number(j["search_box"], "im_max", "search_box");
        if (!(b.im_min > 0.0))
            throw InputError("config: search_box.im_min must be positive");
        c.search_box = b;
    }
    if (j.contains("cone")) {
        detail::reject_unknown_keys(j["cone"], {"x1", "x2", "v1", "v2"}, "cone");
        c.cone = Cone(detail::need_number(j["cone"], "x1", "cone"),
                      detail::need_number(j["cone"], "x2", "cone"),
                      detail::need_number(j["cone"], "v1", "cone"),
                      detail::need_number(j["cone"], "v2", "cone"));
    }
    if (j.contains("sim")) {
        detail::reject_unknown_keys(
            j["sim"], {"half_width", "modes", "dt", "t_end", "dealias", "snapshot_times"}, "sim");
        c.sim.cfg.half_width = detail::need_number(j["sim"], "half_width", "sim");
        c.sim.cfg.modes = static_cast<std::size_t>(detail::need_number(j["sim"], "modes", "sim"));
        c.sim.cfg.dt = detail::need_number(j["sim"], "dt", "sim");
        c.sim.cfg.t_end = detail::need_number(j["sim"], "t_end", "sim");
        c.sim.cfg.dealias = detail::number_or(j["sim"], "dealias", 2.0 / 3.0);
        if (j["sim"].contains("snapshot_times"))
            for (const auto& t : j["sim"]["snapshot_times"])
                c.sim.snapshot_times.push_back(t.get<double>());
        c.sim.cfg.validate();
    }
    if (j.contains("compare")) {
        detail::reject_unknown_keys(
            j["compare"],
            {"ray_v", "t_start", "t_end", "geometric_factor", "window_offsets"}, "compare");
        c.compare.ray_v = detail::need_number(j["compare"], "ray_v", "compare");
        c.compare.t_start = detail::number_or(j["compare"], "t_start", 50.0);
        c.compare.t_end = detail::number_or(j["compare"], "t_end", 400.0);
        c.compare.geometric_factor = detail::number_or(j["compare"], "geometric_factor", 1.3);
        if (j["compare"].contains("window_offsets")) {
            c.compare.window_offsets.clear();
            for (const auto& t : j["compare"]["window_offsets"])
                c.compare.window_offsets.push_back(t.get<double>());
        }
    }
    if (j.contains("field_grid")) {
        detail::reject_unknown_keys(j["field_grid"], {"x_min", "x_max", "count", "times"},
                                    "field_grid");
        c.field_grid.x_min = detail::need_number(j["field_grid"], "x_min", "field_grid");
        c.field_grid.x_max = detail::need_number(j["field_grid"], "x_max", "field_grid");
        c.field_grid.count =
            static_cast<std::size_t>(detail::need_number(j["field_grid"], "count", "field_grid"));
        if (j["field_grid"].contains("times")) {
            c.field_grid.times.clear();
            for (const auto& t : j["field_grid"]["times"])
                c.field_grid.times.push_back(t.get<double>());
        }
    }
    if (j.contains("resolution")) {
        detail::reject_unknown_keys(j["resolution"], {"t_start", "t_end", "count"}, "resolution");
        c.resolution.t_start = detail::number_or(j["resolution"], "t_start", 1.0);
        c.resolution.t_end = detail::number_or(j["resolution"], "t_end", 6.0);
        c.resolution.count =
            static_cast<std::size_t>(detail::number_or(j["resolution"], "count", 11));
    }
    if (j.contains("asympt_points")) {
        for (const auto& pt : j["asympt_points"]) {
            detail::reject_unknown_keys(pt, {"x", "t"}, "asympt_points");
            c.asympt_points.push_back(
                {detail::need_number(pt, "x", "asympt_points"),
                 detail::need_number(pt, "t", "asympt_points")});
        }
    }
    if (j.contains("pc_phase_sign")) {
        c.pc_phase_sign = j["pc_phase_sign"].get<int>();
        if (c.pc_phase_sign != 1 && c.pc_phase_sign != -1)
            throw InputError("config: pc_phase_sign must be +1 or -1");
    }
    if (j.contains("f_beta21_flip")) c.f_beta21_flip = j["f_beta21_flip"].get<bool>();
    if (j.contains("seed")) c.seed = j["seed"].get<unsigned>();
    if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("config: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError(std::string("config: JSON parse failure: ") + e.what());
    }
    return parse_config(j);
}

}  // namespace hirota

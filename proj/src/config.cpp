#include "qns/config.hpp"

#include "qns/grids.hpp"
#include "qns/polyspectra.hpp"
#include "qns/traj_io.hpp"
#include "qns/validate.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>

namespace qns {

using nlohmann::json;

namespace {
constexpr double kTwoPi = 6.283185307179586;

json axis_to_json(const RunConfig::Axis& a) { return json{{"lo", a.lo}, {"hi", a.hi}, {"n", a.n}}; }

RunConfig::Axis axis_from_json(const json& j) {
    RunConfig::Axis a;
    a.lo = j.at("lo").get<double>();
    a.hi = j.at("hi").get<double>();
    a.n = j.at("n").get<int>();
    return a;
}

Mat mat_from_json(const json& re, const json& im, int d) {
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            m(i, j) = cxd(re.at(size_t(i)).at(size_t(j)).get<double>(),
                          im.is_null() ? 0.0 : im.at(size_t(i)).at(size_t(j)).get<double>());
    return m;
}
} // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(std::string("config parse error: ") + e.what());
    }
    RunConfig c;
    if (j.contains("model")) {
        const auto& m = j["model"];
        c.model.type = m.value("type", c.model.type);
        if (m.contains("omega"))
            for (int k = 0; k < 3; ++k) c.model.omega[size_t(k)] = m["omega"].at(size_t(k)).get<double>();
        c.model.gamma = m.value("gamma", c.model.gamma);
        if (m.contains("B_mT"))
            for (int k = 0; k < 3; ++k) c.model.B_mT[size_t(k)] = m["B_mT"].at(size_t(k)).get<double>();
        c.model.temperature_K = m.value("temperature_K", c.model.temperature_K);
        c.model.gamma_e_per_ns = m.value("gamma_e_per_ns", c.model.gamma_e_per_ns);
        c.model.gamma_n_per_ns = m.value("gamma_n_per_ns", c.model.gamma_n_per_ns);
        c.model.hyperfine = m.value("hyperfine", c.model.hyperfine);
        c.model.file = m.value("file", c.model.file);
    }
    if (j.contains("measurement")) {
        const auto& m = j["measurement"];
        c.measurement.beta = m.value("beta", c.measurement.beta);
        c.measurement.include_shot_noise = m.value("include_shot_noise", c.measurement.include_shot_noise);
        c.measurement.include_measurement_damping =
            m.value("include_measurement_damping", c.measurement.include_measurement_damping);
    }
    c.task = j.value("task", c.task);
    c.order = j.value("order", c.order);
    if (j.contains("grid")) {
        c.grid.f1 = axis_from_json(j["grid"].at("f1"));
        if (j["grid"].contains("f2")) c.grid.f2 = axis_from_json(j["grid"]["f2"]);
    }
    if (j.contains("sim")) {
        c.sim.dt = j["sim"].value("dt", c.sim.dt);
        c.sim.steps = j["sim"].value("steps", c.sim.steps);
        c.sim.seed = j["sim"].value("seed", c.sim.seed);
    }
    if (j.contains("estimate")) {
        const auto& e = j["estimate"];
        c.estimate.input = e.value("input", c.estimate.input);
        c.estimate.frame_len = e.value("frame_len", c.estimate.frame_len);
        c.estimate.m_per_group = e.value("m_per_group", c.estimate.m_per_group);
        c.estimate.window = e.value("window", c.estimate.window);
        c.estimate.kmax = e.value("kmax", c.estimate.kmax);
        if (e.contains("s4_pairs"))
            for (const auto& p : e["s4_pairs"])
                c.estimate.s4_pairs.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    if (j.contains("output")) {
        c.output.prefix = j["output"].value("prefix", c.output.prefix);
        c.output.format = j["output"].value("format", c.output.format);
    }
    const bool one_task = c.task == "spectrum" || c.task == "simulate" || c.task == "estimate" || c.task == "validate";
    if (!one_task) throw InvalidArgument("task must be one of spectrum|simulate|estimate|validate");
    if (!(c.grid.f1.hi > c.grid.f1.lo) || !std::isfinite(c.grid.f1.lo) || !std::isfinite(c.grid.f1.hi))
        throw InvalidArgument("grid.f1 range must be finite and ordered");
    if (c.grid.f2 && (!(c.grid.f2->hi > c.grid.f2->lo) || !std::isfinite(c.grid.f2->lo)))
        throw InvalidArgument("grid.f2 range must be finite and ordered");
    return c;
}

std::string RunConfig::to_json_text() const {
    json j;
    j["model"] = {{"type", model.type},
                  {"omega", model.omega},
                  {"gamma", model.gamma},
                  {"B_mT", model.B_mT},
                  {"temperature_K", model.temperature_K},
                  {"gamma_e_per_ns", model.gamma_e_per_ns},
                  {"gamma_n_per_ns", model.gamma_n_per_ns},
                  {"hyperfine", model.hyperfine},
                  {"file", model.file}};
    j["measurement"] = {{"beta", measurement.beta},
                        {"include_shot_noise", measurement.include_shot_noise},
                        {"include_measurement_damping", measurement.include_measurement_damping}};
    j["task"] = task;
    j["order"] = order;
    j["grid"]["f1"] = axis_to_json(grid.f1);
    if (grid.f2) j["grid"]["f2"] = axis_to_json(*grid.f2);
    j["sim"] = {{"dt", sim.dt}, {"steps", sim.steps}, {"seed", sim.seed}};
    json pairs = json::array();
    for (const auto& p : estimate.s4_pairs) pairs.push_back({p[0], p[1]});
    j["estimate"] = {{"input", estimate.input},   {"frame_len", estimate.frame_len},
                     {"m_per_group", estimate.m_per_group}, {"window", estimate.window},
                     {"kmax", estimate.kmax},     {"s4_pairs", pairs}};
    j["output"] = {{"prefix", output.prefix}, {"format", output.format}};
    return j.dump(2);
}

ModelBundle RunConfig::build_model() const {
    if (model.type == "single-spin") {
        SingleSpinParams p;
        p.omega = model.omega;
        p.gamma = model.gamma;
        return single_spin_model(p);
    }
    if (model.type == "zno") {
        SpinPairParams p;
        for (int k = 0; k < 3; ++k) p.B[size_t(k)] = model.B_mT[size_t(k)] * 1e-3;
        p.temperature = model.temperature_K;
        p.gamma_e = model.gamma_e_per_ns;
        p.gamma_n = model.gamma_n_per_ns;
        if (model.hyperfine == "x-only")
            p.hyperfine = HyperfineMode::XOnly;
        else if (model.hyperfine != "isotropic")
            throw InvalidArgument("hyperfine must be isotropic or x-only");
        return zno_indium_model(p);
    }
    if (model.type == "custom") return load_custom_model(model.file);
    throw InvalidArgument("unknown model type " + model.type);
}

FrameSpec RunConfig::frame_spec() const {
    FrameSpec fs;
    fs.frame_len = estimate.frame_len;
    fs.m_per_group = estimate.m_per_group;
    if (estimate.window == "hann")
        fs.window = Window::Hann;
    else if (estimate.window != "rectangular")
        throw InvalidArgument("window must be rectangular or hann");
    return fs;
}

ModelBundle load_custom_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open model file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw InvalidArgument("model file parse error: " + std::string(e.what()));
    }
    const int d = j.at("dim").get<int>();
    ModelBundle m;
    m.dim = d;
    m.H = mat_from_json(j.at("H_re"), j.value("H_im", json()), d);
    m.A = mat_from_json(j.at("A_re"), j.value("A_im", json()), d);
    if (j.contains("dissipators")) {
        for (const auto& dd : j["dissipators"]) {
            const double gamma = dd.at("gamma").get<double>();
            const Mat rho_f = mat_from_json(dd.at("rho_final_re"), dd.value("rho_final_im", json()), d);
            m.dissipators.push_back(DissipatorSpec::isotropic_single(d, gamma, rho_f));
        }
    }
    m.label = j.value("label", std::string("custom"));
    m.time_unit_seconds = j.value("time_unit_seconds", 1.0);
    m.freq_unit = j.value("freq_unit", std::string("1/time-unit"));
    return m;
}

namespace {

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") return name;
    return dir + "/" + name;
}

std::string run_meta(const RunConfig& cfg, const ModelBundle& m) {
    json j;
    j["beta"] = cfg.measurement.beta;
    j["include_shot_noise"] = cfg.measurement.include_shot_noise;
    j["include_measurement_damping"] = cfg.measurement.include_measurement_damping;
    j["model_hash"] = model_hash(m, cfg.measurement.beta);
    j["seed"] = cfg.sim.seed;
    j["grid"] = json::parse(R"({})");
    j["grid"]["f1"] = axis_to_json(cfg.grid.f1);
    if (cfg.grid.f2) j["grid"]["f2"] = axis_to_json(*cfg.grid.f2);
    return j.dump();
}

} // namespace

std::vector<std::string> run_spectrum(const RunConfig& cfg, const RunPaths& paths, int workers) {
    const ModelBundle bundle = cfg.build_model();
    const double beta = cfg.measurement.beta;
    const double beta_damp = cfg.measurement.include_measurement_damping ? beta : 0.0;
    const Liouvillian l = bundle.build(beta_damp);

    auto angular = [](const RunConfig::Axis& a) {
        std::vector<double> w = linspace(a.lo * kTwoPi, a.hi * kTwoPi, a.n);
        return w;
    };

    SpectrumGrid g;
    if (cfg.order == 2) {
        g = eval_s2_grid(l, angular(cfg.grid.f1), beta, cfg.measurement.include_shot_noise, workers);
    } else if (cfg.order == 3) {
        const auto f2 = cfg.grid.f2.value_or(cfg.grid.f1);
        g = eval_s3_grid(l, angular(cfg.grid.f1), angular(f2), beta, workers);
    } else if (cfg.order == 4) {
        const auto f2 = cfg.grid.f2.value_or(cfg.grid.f1);
        g = eval_s4cut_grid(l, angular(cfg.grid.f1), angular(f2), beta, workers);
    } else {
        throw InvalidArgument("order must be 2, 3, or 4");
    }
    g.model_hash = model_hash(bundle, beta);
    g.model_label = bundle.label;
    g.time_unit_seconds = bundle.time_unit_seconds;
    g.freq_unit = bundle.freq_unit;

    const std::string base = join_path(paths.out_dir, cfg.output.prefix + "_s" + std::to_string(cfg.order));
    std::vector<std::string> written;
    write_spectrum_csv(base + ".csv", g);
    written.push_back(base + ".csv");
    write_spectrum_json(base + ".json", g, run_meta(cfg, bundle));
    written.push_back(base + ".json");
    return written;
}

std::vector<std::string> run_simulate(const RunConfig& cfg, const RunPaths& paths) {
    const ModelBundle bundle = cfg.build_model();
    SimConfig sc;
    sc.dt = cfg.sim.dt;
    sc.steps = cfg.sim.steps;
    sc.seed = cfg.sim.seed;
    sc.beta = cfg.measurement.beta;
    const TrajectoryRecord rec = simulate(bundle, sc);
    const std::string path = join_path(paths.out_dir, cfg.output.prefix + ".traj");
    write_trajectory(path, rec);
    return {path, path + ".json"};
}

std::vector<std::string> run_estimate(const RunConfig& cfg, const RunPaths& paths) {
    const TrajectoryRecord rec = read_trajectory(cfg.estimate.input);
    const FrameSpec fs = cfg.frame_spec();
    const FrameSet frames = frame_fft(rec, fs);
    std::vector<std::string> written;
    const std::string base = join_path(paths.out_dir, cfg.output.prefix + "_est_s" + std::to_string(cfg.order));

    if (cfg.order == 2) {
        const auto est = estimate_s2(frames, fs);
        std::ofstream out(base + ".csv", std::ios::trunc);
        out << "# estimator=s2 frames=" << frames.frames.size() << " groups=" << est.n_groups
            << " model_hash=" << rec.model_hash << "\n";
        out << "frequency,value,stderr\n";
        // emit in frequency order, negative to positive
        const int n = frames.frame_len;
        for (int i = 0; i < n; ++i) {
            const int k = (i + n / 2 + n % 2) % n;
            out << est.omega[size_t(k)] / kTwoPi << "," << est.value[size_t(k)] << "," << est.se[size_t(k)] << "\n";
        }
        written.push_back(base + ".csv");
    } else if (cfg.order == 3) {
        const auto est = estimate_s3(frames, fs, cfg.estimate.kmax);
        std::ofstream out(base + ".csv", std::ios::trunc);
        out << "# estimator=s3 groups=" << est.n_groups << " model_hash=" << rec.model_hash << "\n";
        out << "f1,f2,re,im,se_re,se_im\n";
        const size_t nb = est.w1.size();
        for (size_t i = 0; i < nb; ++i)
            for (size_t j = 0; j < nb; ++j) {
                const size_t idx = i * nb + j;
                out << est.w1[i] / kTwoPi << "," << est.w2[j] / kTwoPi << "," << est.value[idx].real() << ","
                    << est.value[idx].imag() << "," << est.se_re[idx] << "," << est.se_im[idx] << "\n";
            }
        written.push_back(base + ".csv");
    } else if (cfg.order == 4) {
        if (cfg.estimate.s4_pairs.empty())
            throw InvalidArgument("order-4 estimation needs estimate.s4_pairs");
        std::ofstream out(base + ".csv", std::ios::trunc);
        out << "# estimator=s4-correlation groups per pair below, model_hash=" << rec.model_hash << "\n";
        out << "f1,f2,value,stderr,groups\n";
        for (const auto& p : cfg.estimate.s4_pairs) {
            const auto est = estimate_s4_corr(frames, fs, p[0] * kTwoPi, p[1] * kTwoPi);
            out << p[0] << "," << p[1] << "," << est.value << "," << est.se << "," << est.n_groups << "\n";
        }
        written.push_back(base + ".csv");
    } else {
        throw InvalidArgument("order must be 2, 3, or 4");
    }
    return written;
}

std::vector<std::string> run_validate(const RunConfig& cfg, const RunPaths& paths, int workers, bool* failed) {
    const auto results = run_validation_suite(cfg.sim.seed, workers);
    const std::string report = validation_report_json(results);
    const std::string path = join_path(paths.out_dir, cfg.output.prefix + "_validate.json");
    std::ofstream out(path, std::ios::trunc);
    out << report << "\n";
    std::cout << report << std::endl;
    bool all = true;
    for (const auto& r : results) all = all && r.pass;
    if (failed) *failed = !all;
    return {path};
}

} // namespace qns

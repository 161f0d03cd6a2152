#include "qns/grids.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>

namespace qns {

namespace {
constexpr double kTwoPi = 6.283185307179586;
}

void SpectrumGrid::validate() const {
    for (size_t i = 1; i < axis1.size(); ++i)
        if (!(axis1[i] > axis1[i - 1])) throw InvalidArgument("axis1 not strictly increasing");
    for (size_t i = 1; i < axis2.size(); ++i)
        if (!(axis2[i] > axis2[i - 1])) throw InvalidArgument("axis2 not strictly increasing");
    const size_t expect = axis2.empty() ? axis1.size() : axis1.size() * axis2.size();
    if (values.size() != expect) throw InvalidArgument("value count does not match axes");
    double vmax = 0;
    for (const cxd& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw Error("non-finite spectrum value");
        vmax = std::max(vmax, std::abs(v));
    }
    if (order == 2) {
        for (const cxd& v : values) {
            if (std::abs(v.imag()) > 1e-9 * std::max(vmax, 1e-300)) throw ImaginaryResidue("order-2 grid");
            if (v.real() < -1e-9 * std::max(vmax, 1.0)) throw Error("negative power spectral density");
        }
    }
}

SpectrumGrid eval_s2_grid(const Liouvillian& l, const std::vector<double>& omegas, double beta,
                          bool include_shot_noise, int workers) {
    SpectralCache cache(l);
    SpectrumGrid g;
    g.order = 2;
    g.axis1 = omegas;
    g.beta = beta;
    g.values.resize(omegas.size());
    const auto n = std::int64_t(omegas.size());
    if (workers > 1) {
#pragma omp parallel for schedule(static) num_threads(workers)
        for (std::int64_t i = 0; i < n; ++i)
            g.values[size_t(i)] = s2(cache, omegas[size_t(i)], beta, include_shot_noise);
    } else {
        for (std::int64_t i = 0; i < n; ++i)
            g.values[size_t(i)] = s2(cache, omegas[size_t(i)], beta, include_shot_noise);
    }
    g.validate();
    return g;
}

SpectrumGrid eval_s3_grid(const Liouvillian& l, const std::vector<double>& w1s,
                          const std::vector<double>& w2s, double beta, int workers) {
    SpectralCache cache(l);
    SpectrumGrid g;
    g.order = 3;
    g.axis1 = w1s;
    g.axis2 = w2s;
    g.beta = beta;
    const auto n1 = std::int64_t(w1s.size()), n2 = std::int64_t(w2s.size());
    g.values.resize(size_t(n1 * n2));
    if (workers > 1) {
#pragma omp parallel for schedule(dynamic, 4) num_threads(workers)
        for (std::int64_t i = 0; i < n1 * n2; ++i)
            g.values[size_t(i)] = s3(cache, w1s[size_t(i / n2)], w2s[size_t(i % n2)], beta);
    } else {
        for (std::int64_t i = 0; i < n1 * n2; ++i)
            g.values[size_t(i)] = s3(cache, w1s[size_t(i / n2)], w2s[size_t(i % n2)], beta);
    }
    g.validate();
    return g;
}

SpectrumGrid eval_s4cut_grid(const Liouvillian& l, const std::vector<double>& w1s,
                             const std::vector<double>& w2s, double beta, int workers) {
    SpectralCache cache(l);
    SpectrumGrid g;
    g.order = 4;
    g.kind = "s4-correlation-cut";
    g.axis1 = w1s;
    g.axis2 = w2s;
    g.beta = beta;
    const auto n1 = std::int64_t(w1s.size()), n2 = std::int64_t(w2s.size());
    g.values.resize(size_t(n1 * n2));
    if (workers > 1) {
#pragma omp parallel for schedule(dynamic, 2) num_threads(workers)
        for (std::int64_t i = 0; i < n1 * n2; ++i)
            g.values[size_t(i)] = s4_correlation_cut(cache, w1s[size_t(i / n2)], w2s[size_t(i % n2)], beta);
    } else {
        for (std::int64_t i = 0; i < n1 * n2; ++i)
            g.values[size_t(i)] = s4_correlation_cut(cache, w1s[size_t(i / n2)], w2s[size_t(i % n2)], beta);
    }
    g.validate();
    return g;
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 2) throw InvalidArgument("linspace needs n >= 2");
    if (!(hi > lo)) throw InvalidArgument("linspace needs hi > lo");
    std::vector<double> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) v[size_t(i)] = lo + (hi - lo) * i / (n - 1);
    return v;
}

namespace {
std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}
} // namespace

void write_spectrum_csv(const std::string& path, const SpectrumGrid& g) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open " + path);
    out << "# order=" << g.order << " kind=" << g.kind << " beta=" << fmt(g.beta)
        << " model=" << g.model_label << " model_hash=" << g.model_hash
        << " freq_unit=" << g.freq_unit << "\n";
    if (g.axis2.empty()) {
        out << "frequency,value\n";
        for (size_t i = 0; i < g.axis1.size(); ++i)
            out << fmt(g.axis1[i] / kTwoPi) << "," << fmt(g.values[i].real()) << "\n";
    } else {
        // matrix layout: first row = axis2 frequencies, first column = axis1
        out << "freq1\\freq2";
        for (double w : g.axis2) out << "," << fmt(w / kTwoPi);
        out << "\n";
        for (size_t i = 0; i < g.axis1.size(); ++i) {
            out << fmt(g.axis1[i] / kTwoPi);
            for (size_t j = 0; j < g.axis2.size(); ++j)
                out << "," << fmt(g.values[i * g.axis2.size() + j].real());
            out << "\n";
        }
    }
    if (!out) throw Error("write failed: " + path);
}

void write_spectrum_json(const std::string& path, const SpectrumGrid& g, const std::string& extra_meta_json) {
    nlohmann::json j;
    j["order"] = g.order;
    j["kind"] = g.kind;
    j["beta"] = g.beta;
    j["model_label"] = g.model_label;
    j["model_hash"] = g.model_hash;
    j["time_unit_seconds"] = g.time_unit_seconds;
    j["freq_unit"] = g.freq_unit;
    j["build"] = QNS_VERSION_STRING;
    auto freq = [](const std::vector<double>& ax) {
        std::vector<double> f;
        f.reserve(ax.size());
        for (double w : ax) f.push_back(w / kTwoPi);
        return f;
    };
    j["freq1"] = freq(g.axis1);
    if (!g.axis2.empty()) j["freq2"] = freq(g.axis2);
    std::vector<double> re, im;
    re.reserve(g.values.size());
    im.reserve(g.values.size());
    for (const cxd& v : g.values) {
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    j["re"] = re;
    if (g.order != 2) j["im"] = im;
    if (!extra_meta_json.empty()) j["run"] = nlohmann::json::parse(extra_meta_json);
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open " + path);
    out << j.dump(2) << "\n";
}

} // namespace qns

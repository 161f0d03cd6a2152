#include "qns/traj_io.hpp"

#include <nlohmann/json.hpp>

#include <cstring>
#include <fstream>

namespace qns {

namespace {
constexpr char kMagic[8] = {'Q', 'N', 'S', 'T', 'R', 'A', 'J', '1'};

template <typename T>
void put(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::ifstream& in) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw Error("trajectory file truncated");
    return v;
}
} // namespace

void write_trajectory(const std::string& path, const TrajectoryRecord& rec) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path);
    out.write(kMagic, sizeof kMagic);
    put(out, std::uint32_t(rec.dim));
    put(out, rec.dt);
    put(out, std::uint64_t(rec.z.size()));
    put(out, rec.seed);
    put(out, rec.beta);
    put(out, rec.model_hash);
    out.write(reinterpret_cast<const char*>(rec.z.data()), std::streamsize(rec.z.size() * sizeof(double)));
    if (!out) throw Error("write failed: " + path);
    out.close();

    nlohmann::json side;
    side["max_trace_deviation"] = rec.max_trace_deviation;
    side["min_eigenvalue_seen"] = rec.min_eigenvalue_seen;
    side["n_obs_records"] = rec.obs.size();
    side["dim"] = rec.dim;
    side["dt"] = rec.dt;
    side["steps"] = rec.z.size();
    side["seed"] = rec.seed;
    side["beta"] = rec.beta;
    side["model_hash"] = rec.model_hash;
    std::ofstream js(path + ".json", std::ios::trunc);
    js << side.dump(2) << "\n";
}

TrajectoryRecord read_trajectory(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw Error("bad trajectory magic in " + path);

    TrajectoryRecord rec;
    rec.dim = int(get<std::uint32_t>(in));
    rec.dt = get<double>(in);
    const auto steps = get<std::uint64_t>(in);
    rec.seed = get<std::uint64_t>(in);
    rec.beta = get<double>(in);
    rec.model_hash = get<std::uint64_t>(in);
    rec.z.resize(size_t(steps));
    in.read(reinterpret_cast<char*>(rec.z.data()), std::streamsize(steps * sizeof(double)));
    if (!in) throw Error("trajectory file truncated: " + path);
    return rec;
}

} // namespace qns

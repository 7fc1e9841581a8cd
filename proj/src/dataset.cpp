#include "dolq/dataset.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dolq/errors.hpp"
#include "dolq/rng.hpp"

namespace dolq {

const char* regime_label(Regime r) { return r == Regime::InDomain ? "ID" : "ID-Ext"; }

Regime regime_from_label(const std::string& label) {
    if (label == "ID" || label == "id") return Regime::InDomain;
    if (label == "ID-Ext" || label == "id-ext" || label == "id_ext" || label == "ext")
        return Regime::Extended;
    throw ConfigError("unknown regime '" + label + "' (expected ID or ID-Ext)");
}

TrajectoryDataset generate_dataset(int system_id, Regime regime, double sigma, int ic_index,
                                   std::uint64_t seed, std::size_t points) {
    const SystemSpec& spec = system_spec(system_id);
    const double t_end = (regime == Regime::InDomain) ? spec.t_end : spec.t_ood_end;

    TrajectoryDataset ds;
    ds.system_id = system_id;
    ds.regime = regime;
    ds.sigma = sigma;
    ds.seed = seed;
    ds.ic_index = ic_index;

    ds.time.resize(points);
    const double step = (t_end - spec.t_start) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i)
        ds.time[i] = spec.t_start + step * static_cast<double>(i);
    ds.time.back() = t_end;

    const std::vector<double>& ic = (ic_index == 0) ? spec.ic_default : spec.ic_alternate;
    const Matrix clean = integrate_rk4(ground_truth_rhs_fn(system_id), ic, ds.time);

    ds.gt_derivs = Matrix(points, clean.cols());
    for (std::size_t i = 0; i < points; ++i)
        ground_truth_rhs(system_id, ds.time[i], clean.row(i),
                         ds.gt_derivs.row(i));

    ds.states = clean;
    if (sigma > 0.0) {
        Rng rng = Rng(seed).fork("dataset-noise", static_cast<std::uint64_t>(system_id) * 16 +
                                                      static_cast<std::uint64_t>(ic_index) * 4 +
                                                      (regime == Regime::Extended ? 1 : 0));
        for (double& v : ds.states.flat()) v += sigma * rng.normal();
    }
    ds.fd_derivs = finite_difference(ds.states, ds.time);
    return ds;
}

// ---------------------------------------------------------------------------
// CSV + sidecar IO
// ---------------------------------------------------------------------------

namespace {

std::string shortest(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    p.replace_extension();
    p += ".meta.json";
    return p;
}

}  // namespace

void write_dataset_csv(const TrajectoryDataset& ds, const std::filesystem::path& csv_path) {
    std::ofstream out(csv_path);
    if (!out) throw ConfigError("cannot write " + csv_path.string());
    const int d = ds.dim();
    out << "t";
    for (int c = 0; c < d; ++c) out << ",x" << c;
    for (int c = 0; c < d; ++c) out << ",xdot" << c;
    out << "\n";
    for (std::size_t i = 0; i < ds.points(); ++i) {
        out << shortest(ds.time[i]);
        for (int c = 0; c < d; ++c) out << "," << shortest(ds.states.at(i, c));
        for (int c = 0; c < d; ++c) out << "," << shortest(ds.fd_derivs.at(i, c));
        out << "\n";
    }

    nlohmann::ordered_json meta;
    meta["system_id"] = ds.system_id;
    meta["regime"] = regime_label(ds.regime);
    meta["sigma"] = ds.sigma;
    meta["seed"] = ds.seed;
    meta["ic_index"] = ds.ic_index;
    meta["initial_condition"] = ds.initial_condition();
    meta["points"] = ds.points();
    std::ofstream side(sidecar_path(csv_path));
    side << meta.dump(2) << "\n";
}

TrajectoryDataset read_dataset_csv(const std::filesystem::path& csv_path) {
    std::ifstream side(sidecar_path(csv_path));
    if (!side) throw ConfigError("missing dataset sidecar " + sidecar_path(csv_path).string());
    nlohmann::json meta = nlohmann::json::parse(side);

    TrajectoryDataset ds;
    ds.system_id = meta.at("system_id").get<int>();
    ds.regime = regime_from_label(meta.at("regime").get<std::string>());
    ds.sigma = meta.at("sigma").get<double>();
    ds.seed = meta.at("seed").get<std::uint64_t>();
    ds.ic_index = meta.value("ic_index", 0);

    std::ifstream in(csv_path);
    if (!in) throw ConfigError("cannot read " + csv_path.string());
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty dataset file " + csv_path.string());
    const int d = system_spec(ds.system_id).dim;

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{}) throw ConfigError("bad number '" + cell + "' in dataset");
            row.push_back(v);
        }
        if (row.size() != static_cast<std::size_t>(1 + 2 * d))
            throw ConfigError("dataset row has wrong column count");
        rows.push_back(std::move(row));
    }

    const std::size_t n = rows.size();
    ds.time.resize(n);
    ds.states = Matrix(n, d);
    ds.fd_derivs = Matrix(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        ds.time[i] = rows[i][0];
        for (int c = 0; c < d; ++c) {
            ds.states.at(i, c) = rows[i][1 + c];
            ds.fd_derivs.at(i, c) = rows[i][1 + d + c];
        }
    }
    // the sidecar pins the system, so analytic derivatives are recoverable
    ds.gt_derivs = Matrix(n, d);
    for (std::size_t i = 0; i < n; ++i)
        ground_truth_rhs(ds.system_id, ds.time[i], ds.states.row(i), ds.gt_derivs.row(i));
    return ds;
}

}  // namespace dolq

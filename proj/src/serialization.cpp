#include "modeforge/serialization.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "field/stack binary formats are little-endian");

namespace modeforge {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    return in;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json complex_matrix_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXcd complex_matrix_from_json(const json& rows) {
    const Eigen::Index nr = rows.size();
    if (nr == 0) throw std::runtime_error("empty matrix in JSON");
    const Eigen::Index nc = rows.at(0).size();
    Eigen::MatrixXcd m(nr, nc);
    for (Eigen::Index i = 0; i < nr; ++i)
        for (Eigen::Index j = 0; j < nc; ++j) {
            const auto& cell = rows.at(i).at(j);
            m(i, j) = cplx(cell.at(0).get<double>(), cell.at(1).get<double>());
        }
    return m;
}

}  // namespace

void save_field(const ComplexField& field, const std::filesystem::path& path) {
    std::ofstream out = open_out(path, true);
    json header = {{"nx", field.grid.nx},
                   {"ny", field.grid.ny},
                   {"pitch_m", field.grid.pitch},
                   {"wavelength_m", field.grid.wavelength}};
    out << header.dump() << "\n";
    out.write(reinterpret_cast<const char*>(field.amp.data()),
              static_cast<std::streamsize>(sizeof(cplx) * field.amp.size()));
}

ComplexField load_field(const std::filesystem::path& path) {
    std::ifstream in = open_in(path, true);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("field file: missing header");
    json header = json::parse(line);
    GridSpec grid{header.at("nx").get<int>(), header.at("ny").get<int>(),
                  header.at("pitch_m").get<double>(), header.at("wavelength_m").get<double>()};
    grid.validate();
    ComplexField f(grid);
    in.read(reinterpret_cast<char*>(f.amp.data()),
            static_cast<std::streamsize>(sizeof(cplx) * f.amp.size()));
    if (!in) throw std::runtime_error("field file: truncated payload");
    return f;
}

void save_stack(const PhaseLayerStack& stack, const std::filesystem::path& manifest_path) {
    stack.validate();
    const std::filesystem::path dir = manifest_path.parent_path();
    const std::string stem = manifest_path.stem().string();

    json manifest;
    manifest["version"] = 1;
    manifest["grid"] = {{"nx", stack.grid.nx}, {"ny", stack.grid.ny},
                        {"pitch_m", stack.grid.pitch}};
    manifest["wavelength_m"] = stack.grid.wavelength;
    manifest["spacings_m"] = stack.spacings;
    json layer_files = json::array();
    for (std::size_t j = 0; j < stack.layers.size(); ++j) {
        const std::string name = stem + "_layer" + std::to_string(j) + ".f64";
        std::ofstream out = open_out(dir / name, true);
        out.write(reinterpret_cast<const char*>(stack.layers[j].phase.data()),
                  static_cast<std::streamsize>(sizeof(double) * stack.layers[j].phase.size()));
        layer_files.push_back(name);
    }
    manifest["layers"] = std::move(layer_files);
    open_out(manifest_path, false) << manifest.dump(2) << "\n";
}

PhaseLayerStack load_stack(const std::filesystem::path& manifest_path) {
    json manifest = json::parse(open_in(manifest_path, false));
    PhaseLayerStack stack;
    stack.grid.nx = manifest.at("grid").at("nx").get<int>();
    stack.grid.ny = manifest.at("grid").at("ny").get<int>();
    stack.grid.pitch = manifest.at("grid").at("pitch_m").get<double>();
    stack.grid.wavelength = manifest.at("wavelength_m").get<double>();
    stack.spacings = manifest.at("spacings_m").get<std::vector<double>>();

    const std::filesystem::path dir = manifest_path.parent_path();
    for (const auto& name : manifest.at("layers")) {
        PhaseLayer layer{stack.grid, std::vector<double>(stack.grid.size())};
        std::ifstream in = open_in(dir / name.get<std::string>(), true);
        in.read(reinterpret_cast<char*>(layer.phase.data()),
                static_cast<std::streamsize>(sizeof(double) * layer.phase.size()));
        if (!in) throw std::runtime_error("stack layer file truncated: " + name.get<std::string>());
        stack.layers.push_back(std::move(layer));
    }
    stack.validate();
    return stack;
}

void save_record_csv(const TomographyRecord& record, const std::filesystem::path& path) {
    std::ofstream out = open_out(path, false);
    out << "probe_index,projector_index,frequency\n";
    for (int m = 0; m < record.n_probes(); ++m)
        for (int n = 0; n < record.n_projectors(); ++n)
            out << m << "," << n << "," << fmt(record.frequencies(m, n)) << "\n";
}

TomographyRecord load_record_csv(const std::filesystem::path& path, int dim) {
    TomographyRecord rec;
    rec.dim = dim;
    rec.probe_bases = probe_set_for_dim(dim);
    rec.projector_bases = rec.probe_bases;
    const int n = static_cast<int>(flatten(rec.probe_bases).size());
    rec.frequencies = Eigen::MatrixXd::Zero(n, n);

    std::ifstream in = open_in(path, false);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        const int m = std::stoi(cell);
        std::getline(ss, cell, ',');
        const int p = std::stoi(cell);
        std::getline(ss, cell, ',');
        if (m < 0 || m >= n || p < 0 || p >= n)
            throw std::runtime_error("record CSV: index out of range");
        rec.frequencies(m, p) = std::stod(cell);
    }
    rec.validate();
    return rec;
}

void save_chi_json(const ProcessMatrix& chi, const std::filesystem::path& path) {
    json j;
    j["dim"] = chi.dim;
    j["basis"] = chi.basis == OperatorBasis::GellMann3 ? "gellmann" : "pauli2";
    j["chi"] = complex_matrix_json(chi.chi);
    open_out(path, false) << j.dump(2) << "\n";
}

void save_gate_json(const GateSpec& gate, const std::filesystem::path& path) {
    json j;
    j["name"] = gate.name;
    j["dim"] = gate.dim();
    j["matrix"] = complex_matrix_json(gate.matrix);
    open_out(path, false) << j.dump(2) << "\n";
}

GateSpec load_gate_json(const std::filesystem::path& path) {
    json j = json::parse(open_in(path, false));
    GateSpec gate;
    gate.name = j.value("name", path.stem().string());
    gate.matrix = complex_matrix_from_json(j.at("matrix"));
    if (gate.matrix.rows() != gate.matrix.cols())
        throw std::runtime_error("gate JSON: matrix must be square");
    if (unitarity_error(gate.matrix) > 1e-12)
        throw std::runtime_error("gate JSON: matrix is not unitary");
    return gate;
}

void save_history_csv(const std::vector<EpochStats>& history,
                      const std::filesystem::path& path) {
    std::ofstream out = open_out(path, false);
    out << "epoch,loss,mean_visibility,mean_energy_loss,wall_ms\n";
    for (const EpochStats& e : history)
        out << e.epoch << "," << fmt(e.loss) << "," << fmt(e.mean_visibility) << ","
            << fmt(e.mean_energy_loss) << "," << fmt(e.wall_ms) << "\n";
}

void save_metrics_json(const Metrics& metrics, const std::filesystem::path& path) {
    json j;
    j["visibility"] = metrics.visibility;
    j["energy_loss"] = metrics.energy_loss;
    j["mse"] = metrics.mse;
    j["mean_visibility"] = metrics.mean_visibility();
    j["mean_energy_loss"] = metrics.mean_energy_loss();
    open_out(path, false) << j.dump(2) << "\n";
}

void save_sweep_csv(const SweepReport& report, const std::filesystem::path& path) {
    std::ofstream out = open_out(path, false);
    out << "point_value,mean_visibility,min_visibility,max_visibility,"
           "mean_energy_loss,min_energy_loss,max_energy_loss\n";
    for (const SweepPoint& p : report.points)
        out << fmt(p.value) << "," << fmt(p.metrics.mean_visibility()) << ","
            << fmt(p.metrics.min_visibility()) << "," << fmt(p.metrics.max_visibility()) << ","
            << fmt(p.metrics.mean_energy_loss()) << "," << fmt(p.metrics.min_energy_loss())
            << "," << fmt(p.metrics.max_energy_loss()) << "\n";
}

}  // namespace modeforge

#include "tdkit/archive.hpp"

#include "tdkit/error.hpp"

#include <fstream>
#include <sstream>

namespace tdkit {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "tdkit-mrp/1";

json matrix(const std::vector<double>& flat, std::size_t rows, std::size_t cols) {
    json out = json::array();
    for (std::size_t r = 0; r < rows; ++r) {
        out.push_back(std::vector<double>(flat.begin() + static_cast<std::ptrdiff_t>(r * cols),
                                          flat.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols)));
    }
    return out;
}

std::vector<double> flatten(const json& j, std::size_t rows, std::size_t cols, const char* name) {
    if (!j.is_array() || j.size() != rows) {
        throw FormatError(std::string("archive: '") + name + "' must have " + std::to_string(rows) +
                          " rows");
    }
    std::vector<double> flat;
    flat.reserve(rows * cols);
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != cols) {
            throw FormatError(std::string("archive: '") + name + "' rows must have " +
                              std::to_string(cols) + " entries");
        }
        for (const auto& x : row) {
            if (!x.is_number()) throw FormatError(std::string("archive: '") + name + "' has a non-numeric entry");
            flat.push_back(x.get<double>());
        }
    }
    return flat;
}

template <class T>
T field(const json& j, const char* name) {
    if (!j.contains(name)) throw FormatError(std::string("archive: missing field '") + name + "'");
    try {
        return j.at(name).get<T>();
    } catch (const json::exception& e) {
        throw FormatError(std::string("archive: bad field '") + name + "': " + e.what());
    }
}

} // namespace

json to_json(const Mrp& mrp) {
    json j;
    j["format"] = kFormat;
    j["k"] = mrp.k;
    j["gamma"] = mrp.gamma;
    j["sigma"] = mrp.sigma;
    j["initial_state"] = mrp.initial_state;
    j["P"] = matrix(mrp.P, mrp.k, mrp.k);
    j["r_mean"] = matrix(mrp.r_mean, mrp.k, mrp.k);
    j["p_terminal"] = mrp.p_terminal;
    j["r_terminal"] = mrp.r_terminal;
    std::vector<bool> terminal(mrp.k);
    for (std::size_t s = 0; s < mrp.k; ++s) terminal[s] = mrp.p_terminal[s] > 0.0;
    j["terminal"] = terminal;
    return j;
}

Mrp mrp_from_json(const json& j) {
    Mrp m;
    m.k = field<std::size_t>(j, "k");
    m.gamma = field<double>(j, "gamma");
    m.sigma = field<double>(j, "sigma");
    m.initial_state = field<std::size_t>(j, "initial_state");
    m.P = flatten(field<json>(j, "P"), m.k, m.k, "P");
    m.r_mean = flatten(field<json>(j, "r_mean"), m.k, m.k, "r_mean");
    m.p_terminal = field<std::vector<double>>(j, "p_terminal");
    m.r_terminal = field<std::vector<double>>(j, "r_terminal");
    try {
        m.validate();
    } catch (const ContractError& e) {
        throw FormatError(std::string("archive: invalid MRP: ") + e.what());
    }
    return m;
}

json to_json(const Representation& rep) {
    json j;
    j["kind"] = std::string(to_string(rep.kind()));
    j["n"] = rep.dim();
    json rows = json::array();
    for (const auto& row : rep.rows()) rows.push_back(row.to_dense());
    j["rows"] = std::move(rows);
    return j;
}

Representation representation_from_json(const json& j) {
    const RepKind kind = parse_rep_kind(field<std::string>(j, "kind"));
    const auto n = field<std::size_t>(j, "n");
    const auto table = field<std::vector<std::vector<double>>>(j, "rows");
    std::vector<FeatureVector> rows;
    rows.reserve(table.size());
    for (const auto& dense : table) {
        if (dense.size() != n) throw FormatError("archive: representation row has wrong length");
        if (kind == RepKind::normal) {
            rows.push_back(FeatureVector::dense(dense));
        } else {
            std::vector<std::size_t> idx;
            std::vector<double> val;
            for (std::size_t i = 0; i < dense.size(); ++i) {
                if (dense[i] != 0.0) {
                    idx.push_back(i);
                    val.push_back(dense[i]);
                }
            }
            rows.push_back(FeatureVector::sparse(n, std::move(idx), std::move(val)));
        }
    }
    return Representation(kind, n, std::move(rows));
}

json to_json(const MrpArchive& archive) {
    json j = to_json(archive.mrp);
    if (archive.rep) j["representation"] = to_json(*archive.rep);
    j["meta"] = archive.meta;
    return j;
}

MrpArchive archive_from_json(const json& j) {
    if (j.value("format", std::string()) != kFormat) {
        throw FormatError(std::string("archive: expected format '") + kFormat + "'");
    }
    MrpArchive a{mrp_from_json(j), std::nullopt, j.value("meta", json::object())};
    if (j.contains("representation")) {
        a.rep = representation_from_json(j.at("representation"));
        if (a.rep->num_states() != a.mrp.k) {
            throw FormatError("archive: representation row count differs from k");
        }
    }
    return a;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
    out << text;
}

void write_archive(const std::filesystem::path& path, const MrpArchive& archive) {
    write_text_file(path, to_json(archive).dump(2) + "\n");
}

MrpArchive read_archive(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open archive '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw FormatError("archive '" + path.string() + "': " + e.what());
    }
    return archive_from_json(j);
}

} // namespace tdkit

#include "projlat/json_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>

namespace projlat {

using nlohmann::json;

json cmatrix_to_json(const CMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix cmatrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw_invalid("json: matrix must be a nonempty array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) throw_invalid("json: matrix rows must be nonempty arrays");
    CMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw_invalid("json: ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c) {
            const json& z = j[i][c];
            if (!z.is_array() || z.size() != 2)
                throw_invalid("json: complex entries must be [re, im] pairs");
            m(i, c) = cplx{z[0].get<double>(), z[1].get<double>()};
        }
    }
    m.require_finite("json matrix");
    return m;
}

json operator_to_json(const Operator& op) {
    json j;
    j["shape"] = op.shape.block_dims;
    json blocks = json::array();
    for (const CMatrix& b : op.blocks) blocks.push_back(cmatrix_to_json(b));
    j["blocks"] = std::move(blocks);
    return j;
}

Operator operator_from_json(const json& j) {
    if (!j.contains("shape") || !j.contains("blocks"))
        throw_invalid("json: operator needs \"shape\" and \"blocks\"");
    AlgebraShape shape;
    shape.block_dims = j["shape"].get<std::vector<std::size_t>>();
    shape.validate();
    const json& blocks = j["blocks"];
    if (!blocks.is_array() || blocks.size() != shape.block_count())
        throw_invalid("json: block count does not match shape");
    Operator op(shape);
    for (std::size_t b = 0; b < shape.block_count(); ++b) {
        op.blocks[b] = cmatrix_from_json(blocks[b]);
        if (op.blocks[b].rows() != shape.block_dims[b] ||
            op.blocks[b].cols() != shape.block_dims[b])
            throw_invalid("json: block dimensions do not match shape");
    }
    return op;
}

json projection_to_json(const Projection& p) { return operator_to_json(p.op); }

Projection projection_from_json(const json& j, const Tolerance& tol) {
    return validate_projection(operator_from_json(j), tol);
}

json halmos_to_json(const HalmosData& h) {
    json j;
    j["p_and_q"] = projection_to_json(h.p_and_q);
    j["p_and_qperp"] = projection_to_json(h.p_and_qperp);
    j["pperp_and_q"] = projection_to_json(h.pperp_and_q);
    j["pperp_and_qperp"] = projection_to_json(h.pperp_and_qperp);
    j["e1"] = projection_to_json(h.e1);
    j["e2"] = projection_to_json(h.e2);
    j["v"] = operator_to_json(h.v);
    j["a"] = operator_to_json(h.a);
    j["b"] = operator_to_json(h.b);
    j["angles"] = h.angles;
    return j;
}

json factorization_to_json(const Factorization& f) {
    json j;
    j["source_shape"] = f.source_shape.block_dims;
    json maps = json::array();
    for (const BlockSymmetry& bs : f.block_maps) {
        json m;
        m["target_block"] = bs.target_block;
        m["antilinear"] = bs.antilinear;
        m["u"] = cmatrix_to_json(bs.u);
        maps.push_back(std::move(m));
    }
    j["block_maps"] = std::move(maps);
    j["r"] = std::vector<int>(f.r.mask.begin(), f.r.mask.end());
    return j;
}

Factorization factorization_from_json(const json& j, const Tolerance& tol) {
    Factorization f;
    f.source_shape.block_dims = j.at("source_shape").get<std::vector<std::size_t>>();
    for (const json& m : j.at("block_maps")) {
        BlockSymmetry bs;
        bs.target_block = m.at("target_block").get<std::size_t>();
        bs.antilinear = m.at("antilinear").get<bool>();
        bs.u = cmatrix_from_json(m.at("u"));
        f.block_maps.push_back(std::move(bs));
    }
    std::vector<int> mask = j.at("r").get<std::vector<int>>();
    f.r.shape = f.target_shape();
    f.r.mask.assign(mask.begin(), mask.end());
    f.validate(tol);
    return f;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_invalid("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw_invalid("cannot parse " + path + ": " + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw_invalid("cannot open file for writing: " + path);
    out << j.dump(2) << '\n';
}

MapOracle file_oracle(const std::string& dir, const Tolerance& tol) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw_invalid("oracle directory does not exist: " + dir);

    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        constexpr const char* suffix = ".in.json";
        if (name.size() > 8 && name.ends_with(suffix))
            names.push_back(name.substr(0, name.size() - 8));
    }
    std::sort(names.begin(), names.end());
    if (names.empty()) throw_invalid("oracle directory holds no *.in.json probes: " + dir);

    auto probes = std::make_shared<std::vector<std::pair<Projection, Projection>>>();
    for (const std::string& name : names) {
        const std::string in_path = dir + "/" + name + ".in.json";
        const std::string out_path = dir + "/" + name + ".out.json";
        if (!fs::exists(out_path)) throw_invalid("probe has no output file: " + out_path);
        probes->emplace_back(projection_from_json(load_json_file(in_path), tol),
                             projection_from_json(load_json_file(out_path), tol));
    }

    const GrassmannSignature source = signature_of(probes->front().first);
    const GrassmannSignature target = signature_of(probes->front().second);
    for (const auto& [in, out] : *probes) {
        if (signature_of(in) != source || signature_of(out) != target)
            throw_invalid("oracle directory mixes Grassmann signatures");
    }

    const double eq = tol.eq_abs;
    return MapOracle(source, target, [probes, eq](const Projection& p) -> Projection {
        for (const auto& [in, out] : *probes)
            if (op_norm(in.op - p.op) <= eq) return out;
        throw Error(errc::invalid_input,
                    "file oracle: needed probe is absent; missing probe input:\n" +
                        projection_to_json(p).dump(2));
    });
}

}  // namespace projlat

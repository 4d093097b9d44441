#ifndef PROJLAT_JSON_IO_HPP
#define PROJLAT_JSON_IO_HPP

//
// JSON formats shared by the CLI and the file-oracle mode.
//
// Operator / projection files:
//   {"shape": [n1, ...], "blocks": [ [[ [re,im], ... ], ...], ... ]}
// one row-major matrix per block, complex entries as [re, im] pairs.
// Projections are re-validated on load.
//

#include <string>

#include <json.hpp>

#include "projlat/algebra.hpp"
#include "projlat/halmos.hpp"
#include "projlat/symmetry.hpp"

namespace projlat {

nlohmann::json cmatrix_to_json(const CMatrix& m);
CMatrix cmatrix_from_json(const nlohmann::json& j);

nlohmann::json operator_to_json(const Operator& op);
Operator operator_from_json(const nlohmann::json& j);

nlohmann::json projection_to_json(const Projection& p);
Projection projection_from_json(const nlohmann::json& j, const Tolerance& tol = Tolerance{});

nlohmann::json halmos_to_json(const HalmosData& h);

nlohmann::json factorization_to_json(const Factorization& f);
Factorization factorization_from_json(const nlohmann::json& j, const Tolerance& tol = Tolerance{});

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

// Oracle backed by probe files `<name>.in.json` / `<name>.out.json` in a
// directory. A query matches a stored input within eq_abs; a query with no
// stored probe raises invalid-input and carries the missing probe as JSON
// in the error message.
MapOracle file_oracle(const std::string& dir, const Tolerance& tol = Tolerance{});

}  // namespace projlat

#endif

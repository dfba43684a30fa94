// SPDX-License-Identifier: Apache-2.0
//
// JSON (de)serialisation for the file formats shared by the CLI and library:
// matrices as {dim, re, im}, channels as {dim_in, dim_out, superoperator}
// with column-stacking vectorisation, groups as element arrays, plus report
// serialisers. The first tensor factor is always the most significant index.
#pragma once

#include "qres/bounds.hpp"
#include "qres/codesim.hpp"
#include "qres/entropy.hpp"
#include "qres/qcore.hpp"
#include "qres/schurweyl.hpp"
#include "qres/twirl.hpp"

#include <json.hpp>

#include <string>

namespace qres::io {

using nlohmann::json;

/// Parse failure in a user-supplied document (CLI exit code 2).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

json matrix_to_json(const qcore::Matrix& m);
qcore::Matrix matrix_from_json(const json& j);

json density_to_json(const qcore::DensityMatrix& rho);
qcore::DensityMatrix density_from_json(const json& j);

json channel_to_json(const qcore::QuantumChannel& channel);
qcore::QuantumChannel channel_from_json(const json& j);

json group_to_json(const twirl::FiniteUnitaryGroup& group);
twirl::FiniteUnitaryGroup group_from_json(const json& j);

json ext_real_to_json(const entropy::ExtReal& value);
json bound_report_to_json(const bounds::BoundReport& report);
json rate_to_json(const bounds::Rate& rate);
json simulation_to_json(const codesim::SimulationResult& result);
json achievability_to_json(const codesim::AchievabilityReport& report);
json demo_to_json(const schurweyl::ThreeQubitDemo& demo);
json schur_weyl_table_to_json(const schurweyl::SchurWeylTable& table);

json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace qres::io

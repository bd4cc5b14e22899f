#pragma once

#include <string>

#include <json.hpp>

#include "vallab/kernel.hpp"
#include "vallab/lattice.hpp"
#include "vallab/measure_space.hpp"
#include "vallab/valuation.hpp"

namespace vallab::io {

using json = nlohmann::json;

// {atoms:[{id,weight}], chunks:[[int]], nonatomic_surrogate:bool}
// plus optional "mass_declared_infinite". Atom ids must be 0..n-1 in order.
json space_to_json(const MeasureSpace& space);
MeasureSpace space_from_json(const json& j);

// JSON array of numbers.
json function_to_json(const LatticeFunction& f);
LatticeFunction function_from_json(const json& j);

json set_to_json(const MeasurableSet& a);
MeasurableSet set_from_json(const json& j);

// {"variant":"lp","p":2} | {"variant":"sup"} |
// {"variant":"orlicz","phi":"power_p","p":2} |
// {"variant":"orlicz","phi":"exp_minus_one"}
json norm_to_json(const NormSpec& spec);
NormSpec norm_from_json(const json& j);

// {lambda_grid:[...], tables:[[...],...]} for tables,
// {closed_form:"...", params:{...}} for named closed forms. Anonymous
// closed-form kernels do not serialize.
json kernel_to_json(const Kernel& kernel);
Kernel kernel_from_json(const json& j, std::size_t atom_count_hint = 0);

json defect_report_to_json(const DefectReport& r);

json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

} // namespace vallab::io

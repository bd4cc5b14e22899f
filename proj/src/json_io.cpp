#include "vallab/json_io.hpp"

#include <fstream>

#include "vallab/errors.hpp"

namespace vallab::io {

json space_to_json(const MeasureSpace& space) {
    json atoms = json::array();
    for (std::size_t i = 0; i < space.atom_count(); ++i)
        atoms.push_back({{"id", i}, {"weight", space.weight(i)}});
    json chunks = json::array();
    for (std::size_t prefix : space.chunk_prefixes()) {
        json chunk = json::array();
        for (std::size_t i = 0; i < prefix; ++i) chunk.push_back(i);
        chunks.push_back(std::move(chunk));
    }
    json j{{"atoms", std::move(atoms)},
           {"chunks", std::move(chunks)},
           {"nonatomic_surrogate", space.nonatomic_surrogate()}};
    if (space.mass_declared_infinite()) j["mass_declared_infinite"] = true;
    return j;
}

MeasureSpace space_from_json(const json& j) {
    if (!j.is_object() || !j.contains("atoms") || !j["atoms"].is_array())
        throw InvalidInput("space JSON: expected {atoms:[{id,weight}], ...}");
    std::vector<double> weights;
    weights.reserve(j["atoms"].size());
    std::size_t expected_id = 0;
    for (const auto& atom : j["atoms"]) {
        if (!atom.contains("weight")) throw InvalidInput("space JSON: atom without weight");
        if (atom.contains("id") && atom["id"].get<std::size_t>() != expected_id)
            throw InvalidInput("space JSON: atom ids must be 0..n-1 in order");
        ++expected_id;
        weights.push_back(atom["weight"].get<double>());
    }
    std::vector<std::size_t> prefixes;
    if (j.contains("chunks")) {
        for (const auto& chunk : j["chunks"]) {
            if (!chunk.is_array() || chunk.empty())
                throw InvalidInput("space JSON: chunks must be nonempty index arrays");
            for (std::size_t i = 0; i < chunk.size(); ++i)
                if (chunk[i].get<std::size_t>() != i)
                    throw InvalidInput("space JSON: each chunk must be a prefix 0..k-1");
            prefixes.push_back(chunk.size());
        }
    }
    const bool nonatomic = j.value("nonatomic_surrogate", false);
    const bool infinite = j.value("mass_declared_infinite", false);
    return MeasureSpace(std::move(weights), std::move(prefixes), nonatomic, infinite);
}

json function_to_json(const LatticeFunction& f) { return json(f.values); }

LatticeFunction function_from_json(const json& j) {
    if (!j.is_array()) throw InvalidInput("function JSON: expected an array of numbers");
    return LatticeFunction(j.get<std::vector<double>>());
}

json set_to_json(const MeasurableSet& a) { return json(a.indices()); }

MeasurableSet set_from_json(const json& j) {
    if (!j.is_array()) throw InvalidInput("set JSON: expected an array of indices");
    return MeasurableSet(j.get<std::vector<std::size_t>>());
}

json norm_to_json(const NormSpec& spec) {
    switch (spec.variant()) {
        case NormSpec::Variant::lp:
            return json{{"variant", "lp"}, {"p", spec.p()}};
        case NormSpec::Variant::sup:
            return json{{"variant", "sup"}};
        case NormSpec::Variant::orlicz:
            if (spec.phi().kind == OrliczPhi::Kind::power)
                return json{{"variant", "orlicz"}, {"phi", "power_p"}, {"p", spec.phi().p}};
            return json{{"variant", "orlicz"}, {"phi", "exp_minus_one"}};
    }
    throw InvalidInput("norm JSON: unknown variant");
}

NormSpec norm_from_json(const json& j) {
    const std::string variant = j.value("variant", "");
    if (variant == "lp") return NormSpec::lp(j.value("p", 2.0));
    if (variant == "sup") return NormSpec::sup();
    if (variant == "orlicz") {
        const std::string phi = j.value("phi", "");
        if (phi == "power_p") return NormSpec::orlicz(OrliczPhi::power(j.value("p", 2.0)));
        if (phi == "exp_minus_one") return NormSpec::orlicz(OrliczPhi::exp_minus_one());
        throw InvalidInput("norm JSON: unknown Orlicz phi '" + phi + "'");
    }
    throw InvalidInput("norm JSON: unknown variant '" + variant + "'");
}

json kernel_to_json(const Kernel& kernel) {
    if (kernel.is_table())
        return json{{"lambda_grid", kernel.lambda_grid()}, {"tables", kernel.table_values()}};
    if (!kernel.has_closed_form_spec())
        throw InvalidInput("kernel JSON: anonymous closed-form kernels do not serialize");
    json params = json::object();
    for (const auto& [key, values] : kernel.closed_form_spec().params) {
        if (values.size() == 1)
            params[key] = values[0];
        else
            params[key] = values;
    }
    return json{{"closed_form", kernel.closed_form_spec().name}, {"params", std::move(params)}};
}

Kernel kernel_from_json(const json& j, std::size_t atom_count_hint) {
    if (j.contains("lambda_grid")) {
        if (!j.contains("tables")) throw InvalidInput("kernel JSON: table kernel without tables");
        return Kernel::table(j["lambda_grid"].get<std::vector<double>>(),
                             j["tables"].get<std::vector<std::vector<double>>>());
    }
    if (j.contains("closed_form")) {
        ClosedFormSpec spec;
        spec.name = j["closed_form"].get<std::string>();
        if (j.contains("params")) {
            for (const auto& [key, value] : j["params"].items()) {
                if (value.is_array())
                    spec.params[key] = value.get<std::vector<double>>();
                else
                    spec.params[key] = {value.get<double>()};
            }
        }
        std::size_t atoms = atom_count_hint;
        if (spec.name == "tent_phi_n") {
            auto it = spec.params.find("n_blocks");
            if (it == spec.params.end() || it->second.empty())
                throw InvalidInput("kernel JSON: tent_phi_n requires n_blocks");
            atoms = static_cast<std::size_t>(it->second[0]) + 1;
        } else if (auto it = spec.params.find("coeffs");
                   it != spec.params.end() && it->second.size() > 1) {
            atoms = it->second.size();
        }
        if (atoms == 0) throw InvalidInput("kernel JSON: atom count unknown for closed form");
        return Kernel::from_closed_form(spec, atoms);
    }
    throw InvalidInput("kernel JSON: expected a table or a closed_form object");
}

json defect_report_to_json(const DefectReport& r) {
    json witnesses = json::array();
    for (const auto& w : r.witness) witnesses.push_back(function_to_json(w));
    return json{{"max_defect", r.max_defect},
                {"witness", std::move(witnesses)},
                {"trials", r.trials},
                {"seed", r.seed}};
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw InvalidInput("JSON parse error in " + path + ": " + e.what());
    }
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot open file for writing: " + path);
    out << j.dump(2) << "\n";
}

} // namespace vallab::io

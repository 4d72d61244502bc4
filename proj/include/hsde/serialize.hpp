#pragma once

#include "hsde/classify.hpp"
#include "hsde/density.hpp"
#include "hsde/ldp.hpp"
#include "hsde/model.hpp"
#include "hsde/scale.hpp"
#include "hsde/sim.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hsde {

using json = nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

/// Shortest round-trip decimal; "inf", "-inf", "nan" for non-finite values.
std::string format_double(double v);

/// JSON number, or the strings "inf" / "-inf" / "nan".
json number(double v);
/// Reads a number or one of the strings "inf", "-inf", "infinity", "-infinity".
double to_double(const json& j, const std::string& field);

json to_json(const Interval& iv);
Interval interval_from_json(const json& j, const std::string& field);

json to_json(const ModelSpec& m);
/// Throws InvalidInput naming the field.
ModelSpec model_from_json(const json& j);

json to_json(const AssumptionReport& r);
json to_json(const Condition& c);
json to_json(const RegimeReport& r);
json to_json(const LocalForm& l);
json to_json(const Limit& l);
json to_json(const BoundaryReport& r);
json to_json(const ScaleTable& t);
json to_json(const DensityProfile& d);
json to_json(const ExtReal& v);
json to_json(const QuasipotentialReport& r);
json to_json(const SimConfig& c);
json summary_json(const EnsembleStats& s);

struct Metadata {
    std::string command;
    json config;  // effective configuration
    std::uint64_t seed = 0;
    std::string version;

    /// FNV-1a of the canonical dump of `config`.
    std::string config_hash() const;
    json to_json() const;
    /// Comment lines ("# key: value") for CSV artifacts.
    std::string csv_header() const;
};

std::string scale_csv(const ScaleTable& t);
std::string density_csv(const DensityProfile& d);
std::string histogram_csv(const EnsembleStats& s);
std::string absorption_csv(const EnsembleStats& s);
std::string quasipotential_csv(const std::vector<double>& x, const std::vector<double>& u);
std::string exit_csv(const std::vector<ExitFrequency>& f);

}  // namespace hsde

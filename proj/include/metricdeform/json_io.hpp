#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "metricdeform/analysis.hpp"
#include "metricdeform/deform.hpp"
#include "metricdeform/generators.hpp"
#include "metricdeform/report.hpp"
#include "metricdeform/space.hpp"

namespace metricdeform {

class JsonFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Space files: {"ids", "base", "masses", "distance": {"kind": "matrix",
// "rows": [[..]]} | {"kind": "euclidean", "coords": [[..]]}, "flags"?}.
// Serialization always emits the matrix kind so round trips are bit-exact.
nlohmann::json space_to_json(const FiniteMetricMeasureSpace& space);
FiniteMetricMeasureSpace space_from_json(const nlohmann::json& j);

// Same space layout on the retained points plus a "transform" block with the
// density parameters, the per-point density values, and certified constants.
nlohmann::json deformed_to_json(const DeformedSpace& d);

nlohmann::json generator_spec_to_json(const GeneratorSpec& spec);
GeneratorSpec generator_spec_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const ComparabilityReport& report);

// {"C_nu", "kappa", "alpha", "Lambda", "witnesses"}; infinite kappa maps to
// null, as do alpha and Lambda when no fit is supplied.
nlohmann::json analysis_fragment(const FiniteMetricMeasureSpace& space,
                                 const DoublingEstimate& doubling,
                                 const PerfectnessEstimate& perfectness,
                                 const ReverseDoublingFit* fit);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace metricdeform

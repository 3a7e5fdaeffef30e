#include "metricdeform/json_io.hpp"

#include <cmath>
#include <fstream>

namespace metricdeform {
namespace {

using nlohmann::json;

const json& need(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw JsonFormatError(std::string("missing field: ") + key);
    return *it;
}

std::vector<double> euclidean_matrix(const json& coords) {
    const std::size_t n = coords.size();
    std::vector<std::vector<double>> pts;
    pts.reserve(n);
    std::size_t dim = 0;
    for (const auto& row : coords) {
        std::vector<double> p = row.get<std::vector<double>>();
        if (pts.empty()) dim = p.size();
        if (p.size() != dim) throw JsonFormatError("coords rows have mixed dimensions");
        pts.push_back(std::move(p));
    }
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j2 = i + 1; j2 < n; ++j2) {
            double s = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                const double diff = pts[i][k] - pts[j2][k];
                s += diff * diff;
            }
            const double v = std::sqrt(s);
            d[i * n + j2] = v;
            d[j2 * n + i] = v;
        }
    }
    return d;
}

json certified_to_json(const CertifiedValue& v) {
    return json{{"value", v.value}, {"witness", v.witness}, {"samples", v.samples}};
}

json ledger_to_json(const ConstantsLedger& ledger) {
    return json{
        {"c0", certified_to_json(ledger.c0)},
        {"a1", certified_to_json(ledger.a1)},
        {"a2", certified_to_json(ledger.a2)},
        {"small_ball_rho_lo", ledger.small_ball_rho_lo},
        {"small_ball_rho_hi", ledger.small_ball_rho_hi},
        {"c1_comp", certified_to_json(ledger.c1_comp)},
        {"C1_comp", certified_to_json(ledger.C1_comp)},
        {"c2", certified_to_json(ledger.c2)},
        {"C2", certified_to_json(ledger.C2)},
        {"c_prime", ledger.c_prime},
        {"window", json::array({ledger.window.lo, ledger.window.hi})},
        {"excluded_pairs", ledger.excluded_pairs},
        {"has_comparable_pairs", ledger.has_comparable_pairs},
        {"has_separated_pairs", ledger.has_separated_pairs},
    };
}

}  // namespace

json space_to_json(const FiniteMetricMeasureSpace& space) {
    const std::size_t n = space.size();
    json rows = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < n; ++j) row.push_back(space.distance(i, j));
        rows.push_back(std::move(row));
    }
    json out{
        {"ids", space.ids()},
        {"base", space.id_of(space.base())},
        {"masses", space.masses()},
        {"distance", json{{"kind", "matrix"}, {"rows", std::move(rows)}}},
    };
    if (space.unbounded_truncation()) out["flags"] = json{{"unbounded_truncation", true}};
    return out;
}

FiniteMetricMeasureSpace space_from_json(const json& j) {
    try {
        std::vector<std::string> ids = need(j, "ids").get<std::vector<std::string>>();
        std::vector<double> masses = need(j, "masses").get<std::vector<double>>();
        const std::string base_id = need(j, "base").get<std::string>();
        std::size_t base = ids.size();
        for (std::size_t i = 0; i < ids.size(); ++i)
            if (ids[i] == base_id) {
                base = i;
                break;
            }
        if (base == ids.size()) throw JsonFormatError("base id not present in ids");

        const json& dist = need(j, "distance");
        const std::string kind = need(dist, "kind").get<std::string>();
        std::vector<double> matrix;
        const std::size_t n = ids.size();
        if (kind == "matrix") {
            const json& rows = need(dist, "rows");
            if (rows.size() != n) throw JsonFormatError("distance rows do not match ids");
            matrix.reserve(n * n);
            for (const auto& row : rows) {
                std::vector<double> r = row.get<std::vector<double>>();
                if (r.size() != n) throw JsonFormatError("distance row length mismatch");
                matrix.insert(matrix.end(), r.begin(), r.end());
            }
        } else if (kind == "euclidean") {
            const json& coords = need(dist, "coords");
            if (coords.size() != n) throw JsonFormatError("coords do not match ids");
            matrix = euclidean_matrix(coords);
        } else {
            throw JsonFormatError("unknown distance kind: " + kind);
        }

        bool unbounded = false;
        if (auto it = j.find("flags"); it != j.end())
            unbounded = it->value("unbounded_truncation", false);
        return build_space(std::move(ids), std::move(matrix), std::move(masses), base,
                           unbounded);
    } catch (const json::exception& e) {
        throw JsonFormatError(std::string("malformed space JSON: ") + e.what());
    }
}

json deformed_to_json(const DeformedSpace& d) {
    const std::size_t n = d.size();
    json rows = json::array();
    json ids = json::array();
    json masses = json::array();
    json rho = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        ids.push_back(d.id_of(i));
        masses.push_back(d.nuhat[i]);
        rho.push_back(d.rho[i]);
        json row = json::array();
        for (std::size_t j = 0; j < n; ++j) row.push_back(d.dhat_at(i, j));
        rows.push_back(std::move(row));
    }

    // Bounded targets keep the source base; unbounded ones drop it, and the
    // farthest surviving point takes over as the new base.
    const std::size_t base_local = natural_base(d);

    json transform{
        {"sigma", d.sigma},
        {"density_kind", d.density.kind() == DensityKind::Canonical ? "canonical"
                                                                    : "tabulated"},
        {"rho", std::move(rho)},
        {"kappa", d.kappa_finite ? json(d.kappa) : json(nullptr)},
        {"perfectness_warning", d.perfectness_warning},
    };
    transform["m0"] = d.m0 ? json(*d.m0) : json(nullptr);
    transform["ledger"] = d.density.kind() == DensityKind::Canonical
                              ? ledger_to_json(certify_constants(d))
                              : json(nullptr);
    if (d.infinity) {
        json intervals = json::array();
        for (const auto& iv : d.infinity->intervals)
            intervals.push_back(json::array({iv.lo, iv.hi}));
        transform["infinity_estimates"] = json{
            {"far_point", d.id_of(d.infinity->far_point)},
            {"spread", d.infinity->spread},
            {"empty_far_annulus", d.infinity->empty_far_annulus},
            {"intervals", std::move(intervals)},
        };
    } else {
        transform["infinity_estimates"] = nullptr;
    }

    json out{
        {"ids", std::move(ids)},
        {"base", d.id_of(base_local)},
        {"masses", std::move(masses)},
        {"distance", json{{"kind", "matrix"}, {"rows", std::move(rows)}}},
        {"transform", std::move(transform)},
    };
    if (d.density.infinite_at_zero()) out["flags"] = json{{"unbounded_truncation", true}};
    return out;
}

namespace {

const char* family_name(Family f) {
    switch (f) {
        case Family::GridSegment: return "grid-segment";
        case Family::Cantor: return "cantor";
        case Family::WeightedHalfLine: return "weighted-half-line";
        case Family::GridPatch2D: return "grid-patch-2d";
        case Family::ClusterCounterexample: return "cluster-counterexample";
        case Family::PuncturedGrid: return "punctured-grid";
    }
    return "unknown";
}

const char* policy_name(MassPolicy p) {
    switch (p) {
        case MassPolicy::FamilyDefault: return "family-default";
        case MassPolicy::Uniform: return "uniform";
        case MassPolicy::Profile: return "profile";
    }
    return "unknown";
}

}  // namespace

json generator_spec_to_json(const GeneratorSpec& spec) {
    json out{{"family", family_name(spec.family)}, {"mass_policy", policy_name(spec.mass_policy)}};
    switch (spec.family) {
        case Family::GridSegment:
            out["n"] = spec.n;
            out["spacing"] = spec.spacing;
            break;
        case Family::Cantor:
            out["depth"] = spec.depth;
            out["ratio"] = spec.ratio;
            break;
        case Family::WeightedHalfLine:
            out["n"] = spec.n;
            out["exponent"] = spec.exponent;
            break;
        case Family::GridPatch2D:
            out["side"] = spec.side;
            break;
        case Family::ClusterCounterexample:
            out["gap"] = spec.gap;
            break;
        case Family::PuncturedGrid:
            out["n"] = spec.n;
            out["depth"] = spec.depth;
            break;
    }
    return out;
}

GeneratorSpec generator_spec_from_json(const json& j) {
    try {
        GeneratorSpec spec;
        const std::string fam = need(j, "family").get<std::string>();
        if (fam == "grid-segment")
            spec.family = Family::GridSegment;
        else if (fam == "cantor")
            spec.family = Family::Cantor;
        else if (fam == "weighted-half-line")
            spec.family = Family::WeightedHalfLine;
        else if (fam == "grid-patch-2d")
            spec.family = Family::GridPatch2D;
        else if (fam == "cluster-counterexample")
            spec.family = Family::ClusterCounterexample;
        else if (fam == "punctured-grid")
            spec.family = Family::PuncturedGrid;
        else
            throw JsonFormatError("unknown family: " + fam);

        spec.n = j.value("n", spec.n);
        spec.depth = j.value("depth", spec.depth);
        spec.ratio = j.value("ratio", spec.ratio);
        spec.spacing = j.value("spacing", spec.spacing);
        spec.exponent = j.value("exponent", spec.exponent);
        spec.side = j.value("side", spec.side);
        spec.gap = j.value("gap", spec.gap);
        const std::string policy = j.value("mass_policy", std::string("family-default"));
        if (policy == "family-default")
            spec.mass_policy = MassPolicy::FamilyDefault;
        else if (policy == "uniform")
            spec.mass_policy = MassPolicy::Uniform;
        else if (policy == "profile")
            spec.mass_policy = MassPolicy::Profile;
        else
            throw JsonFormatError("unknown mass_policy: " + policy);
        return spec;
    } catch (const json::exception& e) {
        throw JsonFormatError(std::string("malformed generator spec: ") + e.what());
    }
}

json report_to_json(const ComparabilityReport& report) {
    json out{
        {"statement", report.statement},
        {"min_ratio", report.min_ratio},
        {"max_ratio", report.max_ratio},
        {"witness_min", json::array({report.witness_min[0], report.witness_min[1]})},
        {"witness_max", json::array({report.witness_max[0], report.witness_max[1]})},
        {"cases", report.cases},
        {"excluded", report.excluded},
        {"degenerate", report.degenerate},
    };
    if (!report.extra.empty()) out["extra"] = report.extra;
    return out;
}

json analysis_fragment(const FiniteMetricMeasureSpace& space,
                       const DoublingEstimate& doubling,
                       const PerfectnessEstimate& perfectness,
                       const ReverseDoublingFit* fit) {
    json witnesses{
        {"doubling", json{{"point", space.id_of(doubling.witness_point)},
                          {"radius", doubling.witness_radius}}},
        {"perfectness", json{{"floor", perfectness.floor},
                             {"radius", perfectness.witness_radius}}},
    };
    witnesses["fit_range"] =
        fit ? json::array({fit->range_lo, fit->range_hi}) : json(nullptr);
    return json{
        {"C_nu", doubling.constant},
        {"kappa", perfectness.finite ? json(perfectness.kappa) : json(nullptr)},
        {"alpha", fit ? json(fit->alpha) : json(nullptr)},
        {"Lambda", fit ? json(fit->lambda) : json(nullptr)},
        {"witnesses", std::move(witnesses)},
    };
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw JsonFormatError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw JsonFormatError(path + ": " + e.what());
    }
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw JsonFormatError("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace metricdeform

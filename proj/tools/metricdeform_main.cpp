#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "metricdeform/analysis.hpp"
#include "metricdeform/besov.hpp"
#include "metricdeform/deform.hpp"
#include "metricdeform/generators.hpp"
#include "metricdeform/json_io.hpp"
#include "metricdeform/numeric.hpp"
#include "metricdeform/space.hpp"
#include "metricdeform/verify.hpp"

namespace md = metricdeform;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRegression = 3;

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty())
        std::cout << j.dump(2) << "\n";
    else
        md::save_json_file(out_path, j);
}

md::FiniteMetricMeasureSpace load_space(const json& j) { return md::space_from_json(j); }

std::string pick_transform(const std::string& requested,
                           const md::FiniteMetricMeasureSpace& space) {
    if (requested != "auto") return requested;
    // Truncations of unbounded spaces get bounded, bounded spaces get flattened.
    return space.unbounded_truncation() ? "sphericalize" : "flatten";
}

md::DeformedSpace apply_transform(const md::FiniteMetricMeasureSpace& space,
                                  const std::string& kind, double sigma,
                                  const md::TransformOptions& opts) {
    if (kind == "sphericalize") return md::sphericalize(space, sigma, opts);
    if (kind == "flatten") return md::flatten(space, sigma, opts);
    if (kind == "invert") return md::invert(space, sigma, opts);
    throw std::invalid_argument("unknown transform '" + kind + "'");
}

std::string digest_of(const json& space_json, const std::string& config) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(md::fnv1a64(space_json.dump() + "|" + config)));
    return buf;
}

md::Family parse_family(const std::string& name) {
    if (name == "grid-segment") return md::Family::GridSegment;
    if (name == "cantor") return md::Family::Cantor;
    if (name == "weighted-half-line") return md::Family::WeightedHalfLine;
    if (name == "grid-patch-2d") return md::Family::GridPatch2D;
    if (name == "cluster-counterexample") return md::Family::ClusterCounterexample;
    if (name == "punctured-grid") return md::Family::PuncturedGrid;
    throw std::invalid_argument("unknown family '" + name + "'");
}

md::MassPolicy parse_mass_policy(const std::string& name) {
    if (name == "family-default") return md::MassPolicy::FamilyDefault;
    if (name == "uniform") return md::MassPolicy::Uniform;
    if (name == "profile") return md::MassPolicy::Profile;
    throw std::invalid_argument("unknown mass policy '" + name + "'");
}

std::vector<md::ComparabilityReport> run_all_checks(
    const md::FiniteMetricMeasureSpace& space, const md::DeformedSpace& deformed,
    const md::BesovParams& params, bool allow_sigma_mismatch, std::uint64_t seed) {
    std::vector<md::ComparabilityReport> out = md::check_sandwich_and_bounds(space, deformed);
    const auto fields = md::standard_test_fields(space, seed);
    for (auto& r :
         md::check_energy_comparability(space, deformed, fields, params, allow_sigma_mismatch))
        out.push_back(std::move(r));
    out.push_back(md::check_doubling_preservation(deformed));
    for (auto& r : md::check_ball_volume_regimes(deformed)) out.push_back(std::move(r));
    out.push_back(md::check_perfectness_preservation(deformed));
    return out;
}

using KeyedReports = std::map<std::string, const md::ComparabilityReport*>;

json bless_baseline(const KeyedReports& reports, double window) {
    json statements = json::object();
    for (const auto& [key, rep] : reports)
        statements[key] = {{"min_ratio", rep->min_ratio}, {"max_ratio", rep->max_ratio}};
    return {{"window", window}, {"windows", json::object()}, {"statements", statements}};
}

std::vector<std::string> compare_baseline(const json& base, const KeyedReports& reports) {
    std::vector<std::string> regressions;
    if (!base.contains("statements") || !base["statements"].is_object())
        throw md::JsonFormatError("baseline: missing 'statements' object");
    const double default_window = base.value("window", 0.25);
    const json windows = base.value("windows", json::object());
    for (const auto& [key, entry] : base["statements"].items()) {
        const auto it = reports.find(key);
        if (it == reports.end()) {
            regressions.push_back(key + ": statement missing from this run");
            continue;
        }
        const double window =
            windows.contains(key) ? windows.at(key).get<double>() : default_window;
        const std::pair<const char*, double> sides[] = {
            {"min_ratio", it->second->min_ratio}, {"max_ratio", it->second->max_ratio}};
        for (const auto& [name, got] : sides) {
            const double want = entry.at(name).get<double>();
            if (got == want) continue;
            if (std::abs(got - want) > window * std::abs(want))
                regressions.push_back(key + "." + name + ": got " + fmt_g(got) + ", blessed " +
                                      fmt_g(want) + " (window " + fmt_g(window) + ")");
        }
    }
    return regressions;
}

int finish_with_baseline(const json& out, const std::string& out_path,
                         const std::string& baseline_path, bool bless, double window,
                         const KeyedReports& keyed) {
    emit(out, out_path);
    if (baseline_path.empty()) return 0;
    if (bless) {
        md::save_json_file(baseline_path, bless_baseline(keyed, window));
        std::cerr << "blessed " << keyed.size() << " statements into " << baseline_path << "\n";
        return 0;
    }
    const json base = md::load_json_file(baseline_path);
    const auto regressions = compare_baseline(base, keyed);
    for (const auto& r : regressions) std::cerr << "regression: " << r << "\n";
    return regressions.empty() ? 0 : kExitRegression;
}

struct CommonOptions {
    std::string input;
    std::string output;
    std::string transform = "auto";
    double sigma = 1.0;
    double p = 2.0;
    double theta = 0.5;
    bool allow_sigma_mismatch = false;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string baseline;
    bool bless = false;
    double window = 0.25;
};

void add_besov_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--sigma", opt.sigma, "Transform exponent");
    cmd->add_option("--p", opt.p, "Energy integrability exponent");
    cmd->add_option("--theta", opt.theta, "Energy smoothness exponent");
    cmd->add_flag("--allow-sigma-mismatch", opt.allow_sigma_mismatch,
                  "Run energy checks even when sigma != p*theta (negative controls)");
}

void add_baseline_flags(CLI::App* cmd, CommonOptions& opt) {
    auto* baseline =
        cmd->add_option("--baseline", opt.baseline, "Baseline JSON to compare reports against");
    cmd->add_flag("--bless", opt.bless, "Write the baseline instead of comparing")
        ->needs(baseline);
    cmd->add_option("--window", opt.window,
                    "Relative regression window used when blessing (default 0.25)");
}

json reports_to_json(const std::vector<md::ComparabilityReport>& reports,
                     const std::string& digest) {
    json arr = json::array();
    for (const auto& r : reports) {
        json j = md::report_to_json(r);
        j["digest"] = digest;
        arr.push_back(std::move(j));
    }
    return arr;
}

int cmd_generate(const std::string& family, md::GeneratorSpec spec,
                 const std::string& mass_policy, const std::string& out_path) {
    spec.family = parse_family(family);
    spec.mass_policy = parse_mass_policy(mass_policy);
    const md::FiniteMetricMeasureSpace space = md::generate(spec);
    json j = md::space_to_json(space);
    j["generator"] = md::generator_spec_to_json(spec);
    emit(j, out_path);
    return 0;
}

int cmd_transform(const std::string& kind, const CommonOptions& opt, double kappa_max,
                  bool hard_gate) {
    const json space_json = md::load_json_file(opt.input);
    const md::FiniteMetricMeasureSpace space = load_space(space_json);
    md::TransformOptions topts;
    topts.threads = opt.threads;
    topts.kappa_max = kappa_max;
    topts.hard_perfectness_gate = hard_gate;
    const md::DeformedSpace deformed = apply_transform(space, kind, opt.sigma, topts);
    emit(md::deformed_to_json(deformed), opt.output);
    if (deformed.perfectness_warning)
        std::cerr << "warning: large-scale perfectness estimate exceeded kappa-max\n";
    return 0;
}

int cmd_energy(const CommonOptions& opt, const std::string& transform) {
    const json space_json = md::load_json_file(opt.input);
    const md::FiniteMetricMeasureSpace space = load_space(space_json);
    const md::BesovParams params{opt.p, opt.theta};
    const auto fields = md::standard_test_fields(space, opt.seed);

    json out;
    out["params"] = {{"p", opt.p}, {"theta", opt.theta}};
    std::string kind;
    std::optional<md::DeformedSpace> deformed;
    if (transform != "none") {
        kind = pick_transform(transform, space);
        md::TransformOptions topts;
        topts.threads = opt.threads;
        deformed = apply_transform(space, kind, opt.sigma, topts);
        if (!opt.allow_sigma_mismatch &&
            std::abs(opt.sigma - params.sigma()) > 1e-12 * std::max(1.0, std::abs(opt.sigma)))
            throw md::SigmaMismatch("sigma " + fmt_g(opt.sigma) + " differs from p*theta = " +
                                    fmt_g(params.sigma()) +
                                    "; pass --allow-sigma-mismatch for negative controls");
        out["transform"] = {{"kind", kind}, {"sigma", opt.sigma}};
    }

    json per_field = json::object();
    for (const auto& [name, u] : fields) {
        const md::BesovEnergy src = md::besov_energy(space, u, params);
        json entry = {{"source", {{"power", src.power}, {"root", src.root}}},
                      {"norm", md::besov_norm(space, u, params)}};
        if (deformed) {
            md::ScalarField restricted(deformed->size());
            for (std::size_t i = 0; i < deformed->size(); ++i)
                restricted[i] = u[deformed->retained[i]];
            const md::BesovEnergy def = md::besov_energy(*deformed, restricted, params);
            entry["deformed"] = {{"power", def.power}, {"root", def.root}};
            entry["power_ratio"] = (src.power > 0.0 && def.power > 0.0) ? def.power / src.power
                                   : (src.power == 0.0 && def.power == 0.0) ? 1.0
                                                                            : 0.0;
        }
        per_field[name] = std::move(entry);
    }
    out["fields"] = std::move(per_field);
    out["digest"] = digest_of(space_json, "energy|" + kind + "|" + fmt_g(opt.sigma) + "|" +
                                              fmt_g(opt.p) + "|" + fmt_g(opt.theta));
    emit(out, opt.output);
    return 0;
}

int cmd_verify(const std::string& statement, const CommonOptions& opt) {
    const json space_json = md::load_json_file(opt.input);
    const md::FiniteMetricMeasureSpace space = load_space(space_json);
    const std::string kind = pick_transform(opt.transform, space);
    md::TransformOptions topts;
    topts.threads = opt.threads;
    const md::DeformedSpace deformed = apply_transform(space, kind, opt.sigma, topts);
    const md::BesovParams params{opt.p, opt.theta};
    std::vector<md::ComparabilityReport> reports =
        run_all_checks(space, deformed, params, opt.allow_sigma_mismatch, opt.seed);

    if (statement != "all") {
        std::vector<md::ComparabilityReport> filtered;
        std::string known;
        for (auto& r : reports) {
            known += (known.empty() ? "" : ", ") + r.statement;
            if (r.statement == statement) filtered.push_back(std::move(r));
        }
        if (filtered.empty()) {
            std::cerr << "unknown statement '" << statement << "'; known: all, " << known << "\n";
            return kExitValidation;
        }
        reports = std::move(filtered);
    }

    const std::string digest =
        digest_of(space_json, kind + "|" + fmt_g(opt.sigma) + "|" + fmt_g(opt.p) + "|" +
                                  fmt_g(opt.theta) + "|" + std::to_string(opt.seed));
    json out = {{"digest", digest},
                {"transform", {{"kind", kind}, {"sigma", opt.sigma}}},
                {"params", {{"p", opt.p}, {"theta", opt.theta}}},
                {"reports", reports_to_json(reports, digest)}};

    KeyedReports keyed;
    for (const auto& r : reports) keyed[r.statement] = &r;
    return finish_with_baseline(out, opt.output, opt.baseline, opt.bless, opt.window, keyed);
}

int cmd_duality(const std::string& direction, const CommonOptions& opt) {
    const json space_json = md::load_json_file(opt.input);
    const md::FiniteMetricMeasureSpace space = load_space(space_json);
    std::vector<std::pair<std::string, md::DualityDirection>> runs;
    if (direction == "sphere-then-flatten" || direction == "both")
        runs.emplace_back("sphere-then-flatten", md::DualityDirection::SphereThenFlatten);
    if (direction == "flatten-then-sphere" || direction == "both")
        runs.emplace_back("flatten-then-sphere", md::DualityDirection::FlattenThenSphere);
    if (runs.empty()) {
        std::cerr << "unknown direction '" << direction
                  << "'; known: sphere-then-flatten, flatten-then-sphere, both\n";
        return kExitValidation;
    }

    const std::string digest =
        digest_of(space_json, "duality|" + direction + "|" + fmt_g(opt.sigma));
    json directions = json::object();
    std::vector<std::pair<std::string, std::vector<md::ComparabilityReport>>> held;
    held.reserve(runs.size());
    for (const auto& [name, dir] : runs) {
        try {
            held.emplace_back(name, md::duality_report(space, opt.sigma, dir, opt.threads));
            directions[name] = reports_to_json(held.back().second, digest);
        } catch (const std::exception& e) {
            // With --direction both, a direction whose preconditions the input
            // does not meet is reported as skipped instead of failing the run.
            if (direction != "both") throw;
            directions[name] = {{"skipped", e.what()}};
        }
    }
    json out = {{"digest", digest}, {"sigma", opt.sigma}, {"directions", directions}};

    KeyedReports keyed;
    for (const auto& [name, reports] : held)
        for (const auto& r : reports) keyed[name + ":" + r.statement] = &r;
    return finish_with_baseline(out, opt.output, opt.baseline, opt.bless, opt.window, keyed);
}

md::GeneratorSpec spec_for_level(const std::string& family, unsigned level,
                                 const md::GeneratorSpec& base) {
    md::GeneratorSpec spec = base;
    spec.family = parse_family(family);
    switch (spec.family) {
        case md::Family::Cantor:
            spec.depth = level;
            break;
        case md::Family::GridSegment:
        case md::Family::WeightedHalfLine:
            spec.n = level;
            break;
        case md::Family::GridPatch2D:
            spec.side = level;
            break;
        case md::Family::PuncturedGrid:
            spec.depth = level;
            spec.n = std::size_t{1} << level;
            break;
        case md::Family::ClusterCounterexample:
            spec.gap = level;
            break;
    }
    return spec;
}

int cmd_sweep(const std::string& family, const std::vector<unsigned>& levels,
              const md::GeneratorSpec& base_spec, const std::string& mass_policy,
              const std::string& csv_path, const CommonOptions& opt) {
    if (levels.empty()) {
        std::cerr << "sweep: need at least one --levels entry\n";
        return kExitValidation;
    }
    md::GeneratorSpec tmpl = base_spec;
    tmpl.mass_policy = parse_mass_policy(mass_policy);

    json levels_json = json::object();
    std::vector<std::vector<md::ComparabilityReport>> held;
    held.reserve(levels.size());
    std::string csv = "family,depth,statement,min_ratio,max_ratio\n";
    KeyedReports keyed;

    for (const unsigned level : levels) {
        const md::GeneratorSpec spec = spec_for_level(family, level, tmpl);
        const md::FiniteMetricMeasureSpace space = md::generate(spec);
        const std::string kind = pick_transform(opt.transform, space);
        md::TransformOptions topts;
        topts.threads = opt.threads;
        const md::DeformedSpace deformed = apply_transform(space, kind, opt.sigma, topts);
        const md::BesovParams params{opt.p, opt.theta};
        held.push_back(
            run_all_checks(space, deformed, params, opt.allow_sigma_mismatch, opt.seed));
        const std::string digest =
            digest_of(md::space_to_json(space), family + "|" + std::to_string(level) + "|" +
                                                    kind + "|" + fmt_g(opt.sigma));
        levels_json[std::to_string(level)] = {
            {"transform", kind}, {"reports", reports_to_json(held.back(), digest)}};
        for (const auto& r : held.back()) {
            csv += family + "," + std::to_string(level) + "," + r.statement + "," +
                   fmt_g(r.min_ratio) + "," + fmt_g(r.max_ratio) + "\n";
            keyed[family + ":" + std::to_string(level) + ":" + r.statement] = &r;
        }
    }

    if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + csv_path);
        out << csv;
    }
    json out = {{"family", family},
                {"params", {{"sigma", opt.sigma}, {"p", opt.p}, {"theta", opt.theta}}},
                {"levels", levels_json}};
    return finish_with_baseline(out, opt.output, opt.baseline, opt.bless, opt.window, keyed);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Metric-measure space deformation toolkit"};
    app.require_subcommand(1);

    CommonOptions opt;
    md::GeneratorSpec gspec;
    std::string family, mass_policy = "family-default", statement = "all";
    std::string transform_kind, energy_transform = "none", direction = "both", csv_path;
    std::vector<unsigned> levels;
    double kappa_max = 64.0;
    bool hard_gate = false;

    auto* gen = app.add_subcommand("generate", "Build a test-family space and write its JSON");
    gen->add_option("--family", family,
                    "grid-segment | cantor | weighted-half-line | grid-patch-2d | "
                    "cluster-counterexample | punctured-grid")
        ->required();
    gen->add_option("--n", gspec.n, "Point count (grid-segment, weighted-half-line, "
                                    "punctured-grid)");
    gen->add_option("--depth", gspec.depth, "Construction depth (cantor, punctured-grid)");
    gen->add_option("--ratio", gspec.ratio, "Cantor contraction ratio (default 1/3)");
    gen->add_option("--spacing", gspec.spacing, "Grid spacing");
    gen->add_option("--exponent", gspec.exponent, "Half-line mass growth exponent");
    gen->add_option("--side", gspec.side, "2d patch side length");
    gen->add_option("--gap", gspec.gap, "Cluster separation gap");
    gen->add_option("--mass-policy", mass_policy, "family-default | uniform | profile");
    gen->add_option("-o,--output", opt.output, "Output path (default stdout)");

    auto* tra = app.add_subcommand("transform", "Apply a canonical deformation to a space");
    tra->add_option("kind", transform_kind, "sphericalize | flatten | invert")->required();
    tra->add_option("-i,--input", opt.input, "Space JSON")->required();
    tra->add_option("-o,--output", opt.output, "Output path (default stdout)");
    tra->add_option("--sigma", opt.sigma, "Transform exponent");
    tra->add_option("--threads", opt.threads, "Worker threads (0: METRICDEFORM_THREADS or 1)");
    tra->add_option("--kappa-max", kappa_max, "Perfectness gate threshold");
    tra->add_flag("--hard-gate", hard_gate, "Fail instead of warning on the perfectness gate");

    auto* ene = app.add_subcommand("energy", "Besov energies of the standard test fields");
    ene->add_option("-i,--input", opt.input, "Space JSON")->required();
    ene->add_option("-o,--output", opt.output, "Output path (default stdout)");
    ene->add_option("--transform", energy_transform,
                    "none | auto | sphericalize | flatten | invert (default none)");
    ene->add_option("--seed", opt.seed, "Seed for the random Lipschitz field");
    ene->add_option("--threads", opt.threads, "Worker threads");
    add_besov_flags(ene, opt);

    auto* ver = app.add_subcommand("verify", "Run comparability checkers and report ratios");
    ver->add_option("statement", statement, "Statement id or 'all'");
    ver->add_option("-i,--input", opt.input, "Space JSON")->required();
    ver->add_option("-o,--output", opt.output, "Report path (default stdout)");
    ver->add_option("--transform", opt.transform,
                    "auto | sphericalize | flatten | invert (auto follows the truncation flag)");
    ver->add_option("--seed", opt.seed, "Seed for the random Lipschitz field");
    ver->add_option("--threads", opt.threads, "Worker threads");
    add_besov_flags(ver, opt);
    add_baseline_flags(ver, opt);

    auto* dua = app.add_subcommand("duality", "Compose the two transforms and compare to the "
                                              "identity");
    dua->add_option("-i,--input", opt.input, "Space JSON")->required();
    dua->add_option("-o,--output", opt.output, "Report path (default stdout)");
    dua->add_option("--sigma", opt.sigma, "Transform exponent");
    dua->add_option("--direction", direction,
                    "sphere-then-flatten | flatten-then-sphere | both");
    dua->add_option("--threads", opt.threads, "Worker threads");
    add_baseline_flags(dua, opt);

    auto* swe = app.add_subcommand("sweep", "Verify a family across refinement levels");
    swe->add_option("--family", family, "Family name (see generate)")->required();
    swe->add_option("--levels", levels, "Refinement levels (depth, n, or side per family)")
        ->required()
        ->delimiter(',');
    swe->add_option("--ratio", gspec.ratio, "Cantor contraction ratio");
    swe->add_option("--spacing", gspec.spacing, "Grid spacing");
    swe->add_option("--exponent", gspec.exponent, "Half-line mass growth exponent");
    swe->add_option("--mass-policy", mass_policy, "family-default | uniform | profile");
    swe->add_option("--transform", opt.transform, "auto | sphericalize | flatten | invert");
    swe->add_option("--csv", csv_path, "Write family,depth,statement,min_ratio,max_ratio rows");
    swe->add_option("-o,--output", opt.output, "Report path (default stdout)");
    swe->add_option("--seed", opt.seed, "Seed for the random Lipschitz field");
    swe->add_option("--threads", opt.threads, "Worker threads");
    add_besov_flags(swe, opt);
    add_baseline_flags(swe, opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_generate(family, gspec, mass_policy, opt.output);
        if (tra->parsed()) return cmd_transform(transform_kind, opt, kappa_max, hard_gate);
        if (ene->parsed()) return cmd_energy(opt, energy_transform);
        if (ver->parsed()) return cmd_verify(statement, opt);
        if (dua->parsed()) return cmd_duality(direction, opt);
        if (swe->parsed())
            return cmd_sweep(family, levels, gspec, mass_policy, csv_path, opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return 0;
}

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "magpair/hamiltonian.hpp"

namespace magpair {

enum class UnitMode { SI, Dimensionless };
enum class SweepAxis { None, Distance, Detuning, FrequencyRatio, OrientationAngle };
enum class OutputKind { J, K, Tensor, Hamiltonian, Classical, Dicke, RwaCompare };

const char* sweep_axis_name(SweepAxis a);
const char* output_kind_name(OutputKind k);

struct SweepSpec {
    SweepAxis axis = SweepAxis::None;
    double min = 0.0;
    double max = 0.0;
    int points = 1;
    bool log_spacing = false;
};

struct OracleSpec {
    bool enable = false;
    RegulatorPlan plan;
    int quad_points = 64;
};

struct ScenarioConfig {
    UnitMode unit_mode;
    PhysicalConstants constants;
    DipoleSpec dipole1;
    DipoleSpec dipole2;
    PairGeometry geometry;
    SweepSpec sweep;
    std::vector<OutputKind> outputs;
    OracleSpec oracle;
    Tolerances tolerances;
};

// Validation failure with a field path like "dipole1.moments[0][1]".
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(const std::string& field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// Strict parse: unknown keys are fatal, every error names its field path.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& text, const std::string& origin);

// Rescale an SI scenario to mu0 = hbar = c = 1 units, preserving every
// eta = Omega r / c. The reference frequency is the largest transition
// frequency (c / r when all vanish).
ScenarioConfig to_dimensionless(const ScenarioConfig& config);

// Sweep grids; endpoints are hit exactly, a symmetric linear range
// (min == -max, odd point count) contains 0 exactly.
std::vector<double> sweep_grid(const SweepSpec& sweep);

// Canonical config hash (sorted-key JSON dump, FNV-1a 64).
std::string scenario_config_hash(const ScenarioConfig& config);

struct RunSummary {
    std::vector<std::string> files;  // emitted file names, manifest last
    int flagged_rows = 0;            // oracle non-convergence rows
    std::optional<double> dicke_slope;
    std::string manifest_text;
};

// Executes the scenario: one CSV per scalar quantity, one matrix file per
// Hamiltonian-valued output per sweep point, manifest.json with content
// hashes. Oracle failures flag the row and continue; I/O failures throw.
RunSummary run_scenario(const ScenarioConfig& config, const std::string& out_dir, int threads = 1);

struct OracleCheckRow {
    std::string quantity;
    std::string where;
    Complex closed;
    Complex oracle;
    double rel_err;
    bool pass;
    std::string status;  // "ok" or "no_convergence"
};

// Closed-form vs oracle comparisons for J and K at the scenario's sweep
// points (base geometry when no sweep).
std::vector<OracleCheckRow> oracle_check(const ScenarioConfig& config);

}  // namespace magpair

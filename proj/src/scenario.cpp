#include "magpair/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "magpair/textio.hpp"

namespace magpair {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;
using textio::csv_field;
using textio::format_double;

constexpr const char* kLibraryVersion = "0.1.0";

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw ScenarioError(field, message);
}

std::string sub(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : keys)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) fail(sub(path, it.key()), "unknown key (strict mode rejects unrecognized fields)");
    }
}

const json& require(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(sub(path, key), "missing required key");
    return *it;
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

int get_integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

bool get_boolean(const json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected a boolean");
    return j.get<bool>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

Complex get_complex(const json& j, const std::string& path) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    fail(path, "expected a number or a [re, im] pair");
}

PhysicalConstants parse_constants(const json& root, UnitMode mode) {
    PhysicalConstants consts =
        mode == UnitMode::SI ? PhysicalConstants::si() : PhysicalConstants::dimensionless();
    if (!root.contains("constants")) return consts;
    const json& j = root["constants"];
    if (!j.is_object()) fail("constants", "expected an object");
    reject_unknown(j, "constants", {"mu0", "hbar", "c"});
    if (j.contains("mu0")) consts.mu0 = get_number(j["mu0"], "constants.mu0");
    if (j.contains("hbar")) consts.hbar = get_number(j["hbar"], "constants.hbar");
    if (j.contains("c")) consts.c = get_number(j["c"], "constants.c");
    try {
        consts.validate();
    } catch (const std::invalid_argument& e) {
        fail("constants", e.what());
    }
    return consts;
}

DipoleSpec parse_dipole(const json& j, const std::string& path, const PhysicalConstants& consts,
                        double hermiticity_tol) {
    if (!j.is_object()) fail(path, "expected an object");
    reject_unknown(j, path, {"energies", "transition_frequency", "moments", "moment_unit"});

    const bool has_energies = j.contains("energies");
    const bool has_frequency = j.contains("transition_frequency");
    if (has_energies == has_frequency)
        fail(path, "exactly one of 'energies' or 'transition_frequency' is required");

    std::vector<double> energies;
    if (has_energies) {
        const json& je = j["energies"];
        if (!je.is_array() || je.size() < 2)
            fail(sub(path, "energies"), "expected an array of at least two level energies");
        for (size_t i = 0; i < je.size(); ++i)
            energies.push_back(get_number(je[i], sub(path, "energies[" + std::to_string(i) + "]")));
    } else {
        const double w = get_number(j["transition_frequency"], sub(path, "transition_frequency"));
        energies = {0.0, consts.hbar * w};  // ground level pinned at zero; only differences matter
    }
    const int d = static_cast<int>(energies.size());

    double unit = 1.0;
    if (j.contains("moment_unit")) {
        unit = get_number(j["moment_unit"], sub(path, "moment_unit"));
        if (!(unit > 0.0)) fail(sub(path, "moment_unit"), "must be > 0");
    }

    const json& jm = require(j, "moments", path);
    if (!jm.is_array() || static_cast<int>(jm.size()) != d)
        fail(sub(path, "moments"), "expected a " + std::to_string(d) + "x" + std::to_string(d) +
                                       " matrix of 3-component vectors");
    std::vector<CVec3> moments(static_cast<size_t>(d) * d);
    for (int x = 0; x < d; ++x) {
        const std::string row_path = sub(path, "moments[" + std::to_string(x) + "]");
        const json& row = jm[static_cast<size_t>(x)];
        if (!row.is_array() || static_cast<int>(row.size()) != d)
            fail(row_path, "expected " + std::to_string(d) + " columns");
        for (int y = 0; y < d; ++y) {
            const std::string cell_path = row_path + "[" + std::to_string(y) + "]";
            const json& cell = row[static_cast<size_t>(y)];
            if (!cell.is_array() || cell.size() != 3) fail(cell_path, "expected a 3-component vector");
            CVec3 m;
            for (int i = 0; i < 3; ++i)
                m[i] = unit * get_complex(cell[static_cast<size_t>(i)],
                                          cell_path + "[" + std::to_string(i) + "]");
            moments[static_cast<size_t>(x) * d + y] = m;
        }
    }

    try {
        return DipoleSpec(std::move(energies), std::move(moments), hermiticity_tol);
    } catch (const std::invalid_argument& e) {
        fail(sub(path, "moments"), e.what());
    }
}

PairGeometry parse_geometry(const json& j, const std::string& path, double unit_tol) {
    if (!j.is_object()) fail(path, "expected an object");
    reject_unknown(j, path, {"r", "e_r", "positions"});
    const bool has_pos = j.contains("positions");
    if (has_pos && (j.contains("r") || j.contains("e_r")))
        fail(path, "give either 'positions' or ('r', 'e_r'), not both");
    try {
        if (has_pos) {
            const json& jp = j["positions"];
            if (!jp.is_array() || jp.size() != 2) fail(sub(path, "positions"), "expected two 3-vectors");
            RVec3 p[2];
            for (int k = 0; k < 2; ++k) {
                const json& v = jp[static_cast<size_t>(k)];
                const std::string vp = sub(path, "positions[" + std::to_string(k) + "]");
                if (!v.is_array() || v.size() != 3) fail(vp, "expected a 3-vector");
                for (int i = 0; i < 3; ++i)
                    p[k][i] = get_number(v[static_cast<size_t>(i)], vp + "[" + std::to_string(i) + "]");
            }
            return PairGeometry::from_positions(p[0], p[1]);
        }
        const double r = get_number(require(j, "r", path), sub(path, "r"));
        const json& je = require(j, "e_r", path);
        if (!je.is_array() || je.size() != 3) fail(sub(path, "e_r"), "expected a 3-vector");
        RVec3 e_r;
        for (int i = 0; i < 3; ++i)
            e_r[i] = get_number(je[static_cast<size_t>(i)], sub(path, "e_r[" + std::to_string(i) + "]"));
        return PairGeometry(r, e_r, unit_tol);
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
}

SweepSpec parse_sweep(const json& j, const std::string& path) {
    if (j.is_array()) fail(path, "exactly one sweep axis is allowed (got an array of sweeps)");
    if (!j.is_object()) fail(path, "expected an object");
    reject_unknown(j, path, {"axis", "min", "max", "points", "spacing"});

    SweepSpec sweep;
    const std::string axis = get_string(require(j, "axis", path), sub(path, "axis"));
    if (axis == "distance") sweep.axis = SweepAxis::Distance;
    else if (axis == "detuning") sweep.axis = SweepAxis::Detuning;
    else if (axis == "frequency_ratio") sweep.axis = SweepAxis::FrequencyRatio;
    else if (axis == "orientation_angle") sweep.axis = SweepAxis::OrientationAngle;
    else fail(sub(path, "axis"), "unknown axis '" + axis +
                                     "' (distance | detuning | frequency_ratio | orientation_angle)");

    sweep.min = get_number(require(j, "min", path), sub(path, "min"));
    sweep.max = get_number(require(j, "max", path), sub(path, "max"));
    sweep.points = get_integer(require(j, "points", path), sub(path, "points"));
    if (sweep.points < 1) fail(sub(path, "points"), "must be >= 1");
    if (j.contains("spacing")) {
        const std::string s = get_string(j["spacing"], sub(path, "spacing"));
        if (s == "log") sweep.log_spacing = true;
        else if (s != "linear") fail(sub(path, "spacing"), "expected 'linear' or 'log'");
    }
    if (!(sweep.min <= sweep.max)) fail(path, "min must be <= max");
    if (sweep.points >= 2 && !(sweep.min < sweep.max)) fail(path, "empty range for points >= 2");
    if (sweep.log_spacing && !(sweep.min > 0.0)) fail(path, "log spacing requires min > 0");
    if (sweep.axis == SweepAxis::Distance && !(sweep.min > 0.0)) fail(path, "distances must be > 0");
    return sweep;
}

std::vector<OutputKind> parse_outputs(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of output names");
    std::vector<OutputKind> outputs;
    std::set<std::string> seen;
    for (size_t i = 0; i < j.size(); ++i) {
        const std::string ip = path + "[" + std::to_string(i) + "]";
        const std::string name = get_string(j[i], ip);
        if (!seen.insert(name).second) fail(ip, "duplicate output '" + name + "'");
        if (name == "J") outputs.push_back(OutputKind::J);
        else if (name == "K") outputs.push_back(OutputKind::K);
        else if (name == "tensor") outputs.push_back(OutputKind::Tensor);
        else if (name == "hamiltonian") outputs.push_back(OutputKind::Hamiltonian);
        else if (name == "classical") outputs.push_back(OutputKind::Classical);
        else if (name == "dicke") outputs.push_back(OutputKind::Dicke);
        else if (name == "rwa_compare") outputs.push_back(OutputKind::RwaCompare);
        else fail(ip, "unknown output '" + name +
                          "' (J | K | tensor | hamiltonian | classical | dicke | rwa_compare)");
    }
    return outputs;
}

OracleSpec parse_oracle(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    reject_unknown(j, path,
                   {"enable", "epsilons", "eta_max", "extrapolation_order", "tolerance", "quad_points"});
    OracleSpec oracle;
    oracle.enable = true;  // the block's presence enables it unless told otherwise
    if (j.contains("enable")) oracle.enable = get_boolean(j["enable"], sub(path, "enable"));
    if (j.contains("epsilons")) {
        const json& je = j["epsilons"];
        if (!je.is_array() || je.empty()) fail(sub(path, "epsilons"), "expected a nonempty array");
        oracle.plan.epsilons.clear();
        for (size_t i = 0; i < je.size(); ++i)
            oracle.plan.epsilons.push_back(
                get_number(je[i], sub(path, "epsilons[" + std::to_string(i) + "]")));
    }
    if (j.contains("eta_max")) oracle.plan.eta_max = get_number(j["eta_max"], sub(path, "eta_max"));
    if (j.contains("extrapolation_order"))
        oracle.plan.extrapolation_order =
            get_integer(j["extrapolation_order"], sub(path, "extrapolation_order"));
    if (j.contains("tolerance")) oracle.plan.tolerance = get_number(j["tolerance"], sub(path, "tolerance"));
    if (j.contains("quad_points")) oracle.quad_points = get_integer(j["quad_points"], sub(path, "quad_points"));
    try {
        oracle.plan.validate();
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
    if (oracle.quad_points < 32) fail(sub(path, "quad_points"), "must be >= 32");
    return oracle;
}

Tolerances parse_tolerances(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    reject_unknown(j, path,
                   {"hermiticity_rel", "unit_vector_abs", "pairing_rel", "self_adjoint_rel",
                    "resonance_rel", "angular_oracle_rel", "pv_oracle_rel"});
    Tolerances tol;
    auto grab = [&](const char* key, double& out) {
        if (!j.contains(key)) return;
        out = get_number(j[key], sub(path, key));
        if (!(out > 0.0)) fail(sub(path, key), "must be > 0");
    };
    grab("hermiticity_rel", tol.hermiticity_rel);
    grab("unit_vector_abs", tol.unit_vector_abs);
    grab("pairing_rel", tol.pairing_rel);
    grab("self_adjoint_rel", tol.self_adjoint_rel);
    grab("resonance_rel", tol.resonance_rel);
    grab("angular_oracle_rel", tol.angular_oracle_rel);
    grab("pv_oracle_rel", tol.pv_oracle_rel);
    return tol;
}

bool wants(const ScenarioConfig& config, OutputKind k) {
    return std::find(config.outputs.begin(), config.outputs.end(), k) != config.outputs.end();
}

}  // namespace

const char* sweep_axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::None: return "none";
        case SweepAxis::Distance: return "distance";
        case SweepAxis::Detuning: return "detuning";
        case SweepAxis::FrequencyRatio: return "frequency_ratio";
        case SweepAxis::OrientationAngle: return "orientation_angle";
    }
    return "unknown";
}

const char* output_kind_name(OutputKind k) {
    switch (k) {
        case OutputKind::J: return "J";
        case OutputKind::K: return "K";
        case OutputKind::Tensor: return "tensor";
        case OutputKind::Hamiltonian: return "hamiltonian";
        case OutputKind::Classical: return "classical";
        case OutputKind::Dicke: return "dicke";
        case OutputKind::RwaCompare: return "rwa_compare";
    }
    return "unknown";
}

ScenarioConfig parse_scenario(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        fail("", origin + ": " + e.what());
    }
    if (!root.is_object()) fail("", origin + ": top level must be an object");
    reject_unknown(root, "",
                   {"unit_mode", "constants", "dipole1", "dipole2", "geometry", "sweep", "outputs",
                    "oracle", "tolerances"});

    UnitMode mode = UnitMode::SI;
    if (root.contains("unit_mode")) {
        const std::string m = get_string(root["unit_mode"], "unit_mode");
        if (m == "si") mode = UnitMode::SI;
        else if (m == "dimensionless") mode = UnitMode::Dimensionless;
        else fail("unit_mode", "expected 'si' or 'dimensionless'");
    }

    const PhysicalConstants consts = parse_constants(root, mode);
    const Tolerances tol =
        root.contains("tolerances") ? parse_tolerances(root["tolerances"], "tolerances") : Tolerances{};

    DipoleSpec d1 = parse_dipole(require(root, "dipole1", ""), "dipole1", consts, tol.hermiticity_rel);
    DipoleSpec d2 = parse_dipole(require(root, "dipole2", ""), "dipole2", consts, tol.hermiticity_rel);
    PairGeometry geom = parse_geometry(require(root, "geometry", ""), "geometry", tol.unit_vector_abs);

    SweepSpec sweep;
    if (root.contains("sweep")) sweep = parse_sweep(root["sweep"], "sweep");

    std::vector<OutputKind> outputs = parse_outputs(require(root, "outputs", ""), "outputs");

    OracleSpec oracle;
    if (root.contains("oracle")) oracle = parse_oracle(root["oracle"], "oracle");

    ScenarioConfig config{mode, consts, std::move(d1), std::move(d2), geom, sweep,
                          std::move(outputs), std::move(oracle), tol};

    if ((sweep.axis == SweepAxis::Detuning || sweep.axis == SweepAxis::FrequencyRatio) &&
        (config.dipole1.dim() != 2 || config.dipole2.dim() != 2))
        fail("sweep.axis", "detuning and frequency_ratio sweeps require two-level dipoles");
    if (wants(config, OutputKind::Dicke) && sweep.axis != SweepAxis::Distance)
        fail("outputs", "'dicke' requires a distance sweep");
    return config;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("", "cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

ScenarioConfig to_dimensionless(const ScenarioConfig& config) {
    if (config.unit_mode == UnitMode::Dimensionless) return config;
    const PhysicalConstants& c0 = config.constants;

    double w0 = 0.0;
    for (const DipoleSpec* d : {&config.dipole1, &config.dipole2})
        for (int y = 0; y < d->dim(); ++y)
            for (int x = 0; x < d->dim(); ++x)
                w0 = std::max(w0, std::abs(transition_frequency(*d, y, x, c0)));
    if (w0 == 0.0) w0 = c0.c / config.geometry.r;

    const double energy_scale = c0.hbar * w0;
    const double moment_scale = std::sqrt(c0.mu0 / (c0.hbar * c0.c)) * (w0 / c0.c);

    auto convert_dipole = [&](const DipoleSpec& d) {
        std::vector<double> energies;
        for (double e : d.energies()) energies.push_back(e / energy_scale);
        std::vector<CVec3> moments;
        for (const CVec3& m : d.moments()) moments.push_back(m * moment_scale);
        return DipoleSpec(std::move(energies), std::move(moments), config.tolerances.hermiticity_rel);
    };

    ScenarioConfig out{UnitMode::Dimensionless,
                       PhysicalConstants::dimensionless(),
                       convert_dipole(config.dipole1),
                       convert_dipole(config.dipole2),
                       PairGeometry(config.geometry.r * w0 / c0.c, config.geometry.e_r),
                       config.sweep,
                       config.outputs,
                       config.oracle,
                       config.tolerances};
    if (out.sweep.axis == SweepAxis::Distance) {
        out.sweep.min = config.sweep.min * w0 / c0.c;
        out.sweep.max = config.sweep.max * w0 / c0.c;
    } else if (out.sweep.axis == SweepAxis::Detuning) {
        out.sweep.min = config.sweep.min / w0;
        out.sweep.max = config.sweep.max / w0;
    }
    return out;
}

std::vector<double> sweep_grid(const SweepSpec& sweep) {
    const int n = sweep.points;
    if (n == 1) return {sweep.min};
    std::vector<double> grid(static_cast<size_t>(n));
    if (sweep.log_spacing) {
        const double la = std::log(sweep.min), lb = std::log(sweep.max);
        for (int i = 0; i < n; ++i) grid[static_cast<size_t>(i)] = std::exp(la + (lb - la) * i / (n - 1));
    } else if (sweep.min == -sweep.max) {
        // symmetric form hits the midpoint (and both endpoints) exactly
        for (int i = 0; i < n; ++i) {
            double v = sweep.min * (1.0 - 2.0 * i / (n - 1));
            grid[static_cast<size_t>(i)] = v == 0.0 ? 0.0 : v;  // normalize -0
        }
    } else {
        for (int i = 0; i < n; ++i)
            grid[static_cast<size_t>(i)] = sweep.min + (sweep.max - sweep.min) * i / (n - 1);
    }
    grid.front() = sweep.min;
    grid.back() = sweep.max;
    return grid;
}

namespace {

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json config_to_json(const ScenarioConfig& c) {
    json j;
    j["unit_mode"] = c.unit_mode == UnitMode::SI ? "si" : "dimensionless";
    j["constants"] = {{"mu0", c.constants.mu0}, {"hbar", c.constants.hbar}, {"c", c.constants.c}};
    auto dipole_to_json = [](const DipoleSpec& d) {
        json jd;
        jd["energies"] = d.energies();
        json rows = json::array();
        for (int x = 0; x < d.dim(); ++x) {
            json row = json::array();
            for (int y = 0; y < d.dim(); ++y) {
                const CVec3& m = d.moment(x, y);
                row.push_back(json::array({complex_to_json(m[0]), complex_to_json(m[1]),
                                           complex_to_json(m[2])}));
            }
            rows.push_back(row);
        }
        jd["moments"] = rows;
        return jd;
    };
    j["dipole1"] = dipole_to_json(c.dipole1);
    j["dipole2"] = dipole_to_json(c.dipole2);
    j["geometry"] = {{"r", c.geometry.r},
                     {"e_r", {c.geometry.e_r[0], c.geometry.e_r[1], c.geometry.e_r[2]}}};
    if (c.sweep.axis == SweepAxis::None) {
        j["sweep"] = nullptr;
    } else {
        j["sweep"] = {{"axis", sweep_axis_name(c.sweep.axis)},
                      {"min", c.sweep.min},
                      {"max", c.sweep.max},
                      {"points", c.sweep.points},
                      {"spacing", c.sweep.log_spacing ? "log" : "linear"}};
    }
    json names = json::array();
    for (OutputKind k : c.outputs) names.push_back(output_kind_name(k));
    j["outputs"] = names;
    j["oracle"] = {{"enable", c.oracle.enable},
                   {"epsilons", c.oracle.plan.epsilons},
                   {"eta_max", c.oracle.plan.eta_max},
                   {"extrapolation_order", c.oracle.plan.extrapolation_order},
                   {"tolerance", c.oracle.plan.tolerance},
                   {"quad_points", c.oracle.quad_points}};
    j["tolerances"] = {{"hermiticity_rel", c.tolerances.hermiticity_rel},
                       {"unit_vector_abs", c.tolerances.unit_vector_abs},
                       {"pairing_rel", c.tolerances.pairing_rel},
                       {"self_adjoint_rel", c.tolerances.self_adjoint_rel},
                       {"resonance_rel", c.tolerances.resonance_rel},
                       {"angular_oracle_rel", c.tolerances.angular_oracle_rel},
                       {"pv_oracle_rel", c.tolerances.pv_oracle_rel}};
    return j;
}

CVec3 rotate_about(const RVec3& axis, const CVec3& v, double angle) {
    const double ca = std::cos(angle), sa = std::sin(angle);
    const CVec3 cross(axis[1] * v[2] - axis[2] * v[1], axis[2] * v[0] - axis[0] * v[2],
                      axis[0] * v[1] - axis[1] * v[0]);
    const Complex along = axis[0] * v[0] + axis[1] * v[1] + axis[2] * v[2];
    CVec3 out;
    for (int i = 0; i < 3; ++i) out[i] = ca * v[i] + sa * cross[i] + (1.0 - ca) * along * axis[i];
    return out;
}

RVec3 orientation_axis(const RVec3& e_r) {
    RVec3 ax = e_r.cross(RVec3::UnitX());
    if (ax.norm() <= 0.1) ax = e_r.cross(RVec3::UnitY());
    return ax.normalized();
}

struct PointState {
    double sweep_value;
    PairGeometry geom;
    DipoleSpec d2;
};

PointState materialize_point(const ScenarioConfig& config, double value) {
    switch (config.sweep.axis) {
        case SweepAxis::Distance:
            return {value, PairGeometry(value, config.geometry.e_r), config.dipole2};
        case SweepAxis::Detuning: {
            const double gap1 = config.dipole1.energy(1) - config.dipole1.energy(0);
            // rebased ground level keeps the resonance point exact: at value == 0 the
            // gap is bit-for-bit equal to dipole 1's
            std::vector<double> energies{0.0, gap1 + config.constants.hbar * value};
            return {value, config.geometry, DipoleSpec(std::move(energies), config.dipole2.moments())};
        }
        case SweepAxis::FrequencyRatio: {
            const double gap1 = config.dipole1.energy(1) - config.dipole1.energy(0);
            std::vector<double> energies{0.0, value * gap1};
            return {value, config.geometry, DipoleSpec(std::move(energies), config.dipole2.moments())};
        }
        case SweepAxis::OrientationAngle: {
            const RVec3 axis = orientation_axis(config.geometry.e_r);
            const DipoleSpec& d2 = config.dipole2;
            std::vector<CVec3> moments;
            moments.reserve(d2.moments().size());
            for (const CVec3& m : d2.moments()) moments.push_back(rotate_about(axis, m, value));
            return {value, config.geometry, DipoleSpec(d2.energies(), std::move(moments))};
        }
        case SweepAxis::None:
        default:
            return {value, config.geometry, config.dipole2};
    }
}

std::string fmt_complex_cols(const Complex& z) {
    return format_double(z.real()) + "," + format_double(z.imag());
}

struct PointOutput {
    std::vector<std::string> rows_j, rows_k, rows_tensor;
    std::string file_ham, file_cl, file_rwa;
    std::string rwa_summary_row;
    int flagged = 0;
};

std::string matrix_csv(const HamiltonianMatrix& h) {
    std::string out = "basis";
    const int n = static_cast<int>(h.matrix.rows());
    for (int j = 0; j < n; ++j) {
        const std::string label = h.basis_label(j);
        out += "," + csv_field(label + ":re") + "," + csv_field(label + ":im");
    }
    out += "\n";
    for (int i = 0; i < n; ++i) {
        out += csv_field(h.basis_label(i));
        for (int j = 0; j < n; ++j) out += "," + fmt_complex_cols(h.matrix(i, j));
        out += "\n";
    }
    return out;
}

PointOutput compute_point(const ScenarioConfig& config, const PointState& point) {
    PointOutput out;
    const DipoleSpec& d1 = config.dipole1;
    const DipoleSpec& d2 = point.d2;
    const PairGeometry& geom = point.geom;
    const PhysicalConstants& consts = config.constants;
    const std::string sv = format_double(point.sweep_value);

    const bool want_j = wants(config, OutputKind::J);
    const bool want_k = wants(config, OutputKind::K);
    const bool want_tensor = wants(config, OutputKind::Tensor);

    if (want_j || want_k) {
        for (int y = 0; y < d1.dim(); ++y)
            for (int x = 0; x < d1.dim(); ++x)
                for (int u = 0; u < d2.dim(); ++u)
                    for (int v = 0; v < d2.dim(); ++v) {
                        const CVec3& m1 = d1.moment(y, x);
                        const CVec3& m2 = d2.moment(u, v);
                        const double w1 = transition_frequency(d1, y, x, consts);
                        const double eta = w1 * geom.r / consts.c;
                        const char* cls = term_class_label(
                            classify(d1, d2, y, x, u, v, consts, config.tolerances.resonance_rel));
                        std::string idx = std::to_string(y) + "," + std::to_string(x) + "," +
                                          std::to_string(u) + "," + std::to_string(v);
                        std::string base = sv + "," + idx + "," + format_double(w1) + "," +
                                           format_double(eta) + ",";
                        if (want_j) {
                            const Complex closed = j_coupling(w1, geom, m1, m2, consts);
                            std::string row = base + fmt_complex_cols(closed) + "," + cls;
                            if (config.oracle.enable) {
                                Complex oracle = 0.0;
                                if (w1 > 0.0)
                                    oracle = j_coupling_oracle(w1, geom, m1, m2, consts,
                                                               config.oracle.quad_points);
                                else if (w1 < 0.0)
                                    oracle = -j_coupling_oracle(-w1, geom, m1, m2, consts,
                                                                config.oracle.quad_points);
                                const double rel = std::abs(oracle - closed) /
                                                   std::max(std::abs(closed), 1e-300);
                                row += "," + fmt_complex_cols(oracle) + "," +
                                       format_double(closed == 0.0 && oracle == 0.0 ? 0.0 : rel) + ",ok";
                            }
                            out.rows_j.push_back(std::move(row));
                        }
                        if (want_k) {
                            const Complex closed = k_kernel(w1, geom, m1, m2, consts);
                            std::string row = base + fmt_complex_cols(closed) + "," + cls;
                            if (config.oracle.enable) {
                                try {
                                    const PvResult pv =
                                        k_kernel_oracle(w1, geom, m1, m2, consts, config.oracle.plan);
                                    const double rel = std::abs(pv.value - closed) /
                                                       std::max(std::abs(closed), 1e-300);
                                    row += "," + fmt_complex_cols(pv.value) + "," +
                                           format_double(closed == 0.0 && pv.value == 0.0 ? 0.0 : rel) +
                                           ",ok";
                                } catch (const ExtrapolationError&) {
                                    row += ",,,,no_convergence";
                                    ++out.flagged;
                                }
                            }
                            out.rows_k.push_back(std::move(row));
                        }
                    }
    }

    if (want_tensor) {
        const CouplingTensor tensor = coupling_tensor(d1, d2, geom, consts, config.tolerances);
        for (const auto& e : tensor.entries()) {
            const double w1 = transition_frequency(d1, e.y, e.x, consts);
            const double w2 = transition_frequency(d2, e.u, e.v, consts);
            out.rows_tensor.push_back(
                sv + "," + std::to_string(e.y) + "," + std::to_string(e.x) + "," + std::to_string(e.u) +
                "," + std::to_string(e.v) + "," + format_double(w1) + "," + format_double(w2) + "," +
                fmt_complex_cols(e.g_principal) + "," + fmt_complex_cols(e.g_dissipative) + "," +
                term_class_label(e.term_class));
        }
    }

    const bool want_ham = wants(config, OutputKind::Hamiltonian);
    const bool want_cl = wants(config, OutputKind::Classical);
    const bool want_rwa = wants(config, OutputKind::RwaCompare);
    if (want_ham || want_rwa) {
        const HamiltonianMatrix full = assemble(d1, d2, geom, consts, {}, config.tolerances);
        if (want_ham) out.file_ham = matrix_csv(full);
        if (want_rwa) {
            const HamiltonianMatrix filtered =
                rwa_filter(full, d1, d2, consts, config.tolerances.resonance_rel);
            out.file_rwa = matrix_csv(filtered);
            out.rwa_summary_row = sv + "," + format_double(frobenius_norm(full.matrix)) + "," +
                                  format_double(frobenius_norm(filtered.matrix)) + "," +
                                  format_double(frobenius_norm(full.matrix - filtered.matrix));
        }
    }
    if (want_cl) out.file_cl = matrix_csv(classical_hamiltonian(d1, d2, geom, consts));
    return out;
}

std::string point_file_name(const char* stem, size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%06zu.csv", stem, index);
    return std::string(buf);
}

}  // namespace

std::string scenario_config_hash(const ScenarioConfig& config) {
    return textio::fnv1a64_hex(config_to_json(config).dump());
}

RunSummary run_scenario(const ScenarioConfig& config, const std::string& out_dir, int threads) {
    fs::create_directories(out_dir);

    std::vector<double> grid =
        config.sweep.axis == SweepAxis::None ? std::vector<double>{0.0} : sweep_grid(config.sweep);
    std::vector<PointState> points;
    points.reserve(grid.size());
    for (double v : grid) points.push_back(materialize_point(config, v));

    // Dicke scan needs the whole radius list at once.
    std::optional<DickeScan> dicke;
    if (wants(config, OutputKind::Dicke))
        dicke = dicke_deviation(config.dipole1, config.dipole2, config.geometry.e_r, config.constants, grid);

    std::vector<PointOutput> results(points.size());
    const int n_threads = std::max(1, std::min<int>(threads, static_cast<int>(points.size())));
    if (n_threads == 1) {
        for (size_t i = 0; i < points.size(); ++i) results[i] = compute_point(config, points[i]);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    size_t i;
                    while ((i = next.fetch_add(1)) < points.size())
                        results[i] = compute_point(config, points[i]);
                } catch (...) {
                    errors[static_cast<size_t>(t)] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    RunSummary summary;
    ordered_json manifest;
    manifest["schema"] = "magpair-manifest/1";
    manifest["library_version"] = kLibraryVersion;
    manifest["config_hash"] = scenario_config_hash(config);
    manifest["unit_mode"] = config.unit_mode == UnitMode::SI ? "si" : "dimensionless";
    manifest["constants"] = {{"mu0", config.constants.mu0},
                             {"hbar", config.constants.hbar},
                             {"c", config.constants.c}};
    if (config.sweep.axis == SweepAxis::None) {
        manifest["sweep"] = nullptr;
    } else {
        manifest["sweep"] = {{"axis", sweep_axis_name(config.sweep.axis)},
                             {"min", config.sweep.min},
                             {"max", config.sweep.max},
                             {"points", config.sweep.points},
                             {"spacing", config.sweep.log_spacing ? "log" : "linear"}};
    }
    manifest["outputs"] = ordered_json::array();

    int flagged = 0;
    for (const auto& r : results) flagged += r.flagged;

    auto emit = [&](const std::string& name, const std::string& body, long rows,
                    std::optional<double> sweep_value = std::nullopt) {
        const fs::path path = fs::path(out_dir) / name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("run_scenario: cannot write " + path.string());
        f << body;
        f.close();
        if (!f) throw std::runtime_error("run_scenario: failed writing " + path.string());
        ordered_json entry;
        entry["file"] = name;
        entry["hash"] = textio::fnv1a64_hex(body);
        entry["rows"] = rows;
        if (sweep_value) entry["sweep_value"] = *sweep_value;
        manifest["outputs"].push_back(entry);
        summary.files.push_back(name);
    };

    const std::string oracle_cols =
        config.oracle.enable ? ",oracle_re,oracle_im,oracle_rel_err,oracle_status" : "";
    if (wants(config, OutputKind::J)) {
        std::string body = "sweep_value,y,x,u,v,omega1,eta,re,im,class" + oracle_cols + "\n";
        long rows = 0;
        for (const auto& r : results)
            for (const auto& row : r.rows_j) {
                body += row + "\n";
                ++rows;
            }
        emit("J.csv", body, rows);
    }
    if (wants(config, OutputKind::K)) {
        std::string body = "sweep_value,y,x,u,v,omega1,eta,re,im,class" + oracle_cols + "\n";
        long rows = 0;
        for (const auto& r : results)
            for (const auto& row : r.rows_k) {
                body += row + "\n";
                ++rows;
            }
        emit("K.csv", body, rows);
    }
    if (wants(config, OutputKind::Tensor)) {
        std::string body = "sweep_value,y,x,u,v,omega1,omega2,gp_re,gp_im,gd_re,gd_im,class\n";
        long rows = 0;
        for (const auto& r : results)
            for (const auto& row : r.rows_tensor) {
                body += row + "\n";
                ++rows;
            }
        emit("tensor.csv", body, rows);
    }
    if (wants(config, OutputKind::Hamiltonian))
        for (size_t i = 0; i < results.size(); ++i)
            emit(point_file_name("hamiltonian", i), results[i].file_ham,
                 static_cast<long>(config.dipole1.dim()) * config.dipole2.dim(), grid[i]);
    if (wants(config, OutputKind::Classical))
        for (size_t i = 0; i < results.size(); ++i)
            emit(point_file_name("classical", i), results[i].file_cl,
                 static_cast<long>(config.dipole1.dim()) * config.dipole2.dim(), grid[i]);
    if (wants(config, OutputKind::RwaCompare)) {
        for (size_t i = 0; i < results.size(); ++i)
            emit(point_file_name("rwa", i), results[i].file_rwa,
                 static_cast<long>(config.dipole1.dim()) * config.dipole2.dim(), grid[i]);
        std::string body = "sweep_value,frobenius_full,frobenius_rwa,frobenius_diff\n";
        for (const auto& r : results) body += r.rwa_summary_row + "\n";
        emit("rwa_compare.csv", body, static_cast<long>(results.size()));
    }
    if (dicke) {
        std::string body = "r,deviation\n";
        for (const auto& [r, dev] : dicke->points)
            body += format_double(r) + "," + format_double(dev) + "\n";
        emit("dicke.csv", body, static_cast<long>(dicke->points.size()));
        summary.dicke_slope = dicke->small_r_slope;
    }

    if (summary.dicke_slope) manifest["fields"] = {{"dicke_slope", *summary.dicke_slope}};
    manifest["flagged_rows"] = flagged;
    summary.flagged_rows = flagged;

    summary.manifest_text = manifest.dump(2) + "\n";
    const fs::path mpath = fs::path(out_dir) / "manifest.json";
    std::ofstream mf(mpath, std::ios::binary);
    if (!mf) throw std::runtime_error("run_scenario: cannot write " + mpath.string());
    mf << summary.manifest_text;
    mf.close();
    if (!mf) throw std::runtime_error("run_scenario: failed writing " + mpath.string());
    summary.files.push_back("manifest.json");
    return summary;
}

std::vector<OracleCheckRow> oracle_check(const ScenarioConfig& config) {
    std::vector<double> grid =
        config.sweep.axis == SweepAxis::None ? std::vector<double>{0.0} : sweep_grid(config.sweep);

    std::vector<OracleCheckRow> rows;
    for (size_t i = 0; i < grid.size(); ++i) {
        const PointState point = materialize_point(config, grid[i]);
        const DipoleSpec& d1 = config.dipole1;
        const DipoleSpec& d2 = point.d2;
        const CVec3& m1 = d1.moment(1, 0);
        const CVec3& m2 = d2.moment(1, 0);
        const double w1 = transition_frequency(d1, 1, 0, config.constants);
        std::ostringstream where;
        where << sweep_axis_name(config.sweep.axis) << "[" << i << "] = " << grid[i];

        if (w1 != 0.0) {
            const Complex closed = j_coupling(w1, point.geom, m1, m2, config.constants);
            const Complex oracle =
                w1 > 0.0
                    ? j_coupling_oracle(w1, point.geom, m1, m2, config.constants, config.oracle.quad_points)
                    : -j_coupling_oracle(-w1, point.geom, m1, m2, config.constants,
                                         config.oracle.quad_points);
            const double rel = std::abs(oracle - closed) / std::max(std::abs(closed), 1e-300);
            const double err = (closed == 0.0 && oracle == 0.0) ? 0.0 : rel;
            rows.push_back({"J", where.str(), closed, oracle, err,
                            err <= config.tolerances.angular_oracle_rel, "ok"});
        }

        for (double omega : {w1, 0.0}) {
            const Complex closed = k_kernel(omega, point.geom, m1, m2, config.constants);
            OracleCheckRow row{omega == 0.0 ? "K(0)" : "K", where.str(), closed, 0.0, 0.0, false, "ok"};
            try {
                const PvResult pv = k_kernel_oracle(omega, point.geom, m1, m2, config.constants,
                                                    config.oracle.plan);
                row.oracle = pv.value;
                const double rel = std::abs(pv.value - closed) / std::max(std::abs(closed), 1e-300);
                row.rel_err = (closed == 0.0 && pv.value == 0.0) ? 0.0 : rel;
                row.pass = row.rel_err <= config.tolerances.pv_oracle_rel;
            } catch (const ExtrapolationError&) {
                row.status = "no_convergence";
                row.pass = false;
            }
            rows.push_back(std::move(row));
            if (w1 == 0.0) break;  // avoid duplicating the K(0) row
        }
    }
    return rows;
}

}  // namespace magpair

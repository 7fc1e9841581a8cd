#include "dolq/systems.hpp"

#include <array>
#include <cmath>

#include "dolq/errors.hpp"

namespace dolq {

namespace {

std::vector<SystemSpec> build_specs() {
    std::vector<SystemSpec> s(kSystemCount);

    s[0] = {1,
            "SIR(2D)",
            "SIR infection model only for healthy and sick",
            2,
            0.0,
            2.0,
            4.0,
            {7.0, 2.0},
            {4.0, 1.0},
            "This model describes disease spread by dividing the population into susceptible "
            "and infected groups, with transmission proportional to their contact and infected "
            "individuals recovering at a constant rate. An epidemic occurs only when the "
            "transmission rate exceeds a threshold, revealing a critical condition for outbreak "
            "or extinction",
            {{"x0*x1"}, {"x0*x1", "x1"}}};

    s[1] = {2,
            "Glider(2D)",
            "Glider (dimensionless)",
            2,
            0.0,
            5.0,
            10.0,
            {5.0, 0.7},
            {2.0, -0.5},
            "The glider is viewed as an idealized system whose motion is expected to arise from "
            "the interplay of gravity and aerodynamic forces, with speed and flight path angle "
            "evolving from assumed initial conditions",
            {{"x0*x0", "sin(x1)"}, {"x0", "cos(x1)/x0"}}};

    s[2] = {3,
            "CDIMA(2D)",
            "Reduced model for chlorine dioxide-iodine-malonic acid reaction (dimensionless)",
            2,
            0.0,
            5.0,
            10.0,
            {1.0, 2.0},
            {2.5, 0.5},
            "One state variable represents the activator species concentration, which "
            "autocatalytically accelerates the reaction and has limited spatial mobility due to "
            "polymer indicator binding. Another represents the inhibitor species concentration "
            "that suppresses activator production. The activator production rate shows "
            "saturation beyond a certain level due to substrate limitations. The consumption "
            "process is negligible at low activator concentrations but changes sharply above a "
            "specific range. External halide addition directly reacts with the inhibitor, "
            "reducing its amount.",
            {{"x0*x1/(x0*x0+1)", "x0"}, {"x0", "x0*x1/(x0*x0+1)"}}};

    s[3] = {4,
            "GrayScott(2D)",
            "Isothermal autocatalytic reaction model by Gray and Scott 1985 (dimensionless)",
            2,
            0.0,
            2.0,
            4.0,
            {1.0, 0.5},
            {0.6, 1.2},
            "This describes an open chemical system where a precursor is continuously supplied "
            "and an autocatalytic species both self-amplifies and decays. The interplay of local "
            "activation and global depletion leads to spontaneous pattern formation such as "
            "spots, waves, spirals, and chaotic spatial behavior arising from instability of an "
            "initially uniform state",
            {{"x0", "x0*x1*x1"}, {"x1", "x0*x1*x1"}}};

    s[4] = {5,
            "BarMagnets(2D)",
            "Interacting bar magnets",
            2,
            0.0,
            2.0,
            4.0,
            {0.8, -0.4},
            {2.0, 0.5},
            "This system describes two nearby bar magnets whose orientations influence each "
            "other through distance-dependent magnetic interactions. Depending on initial "
            "conditions and external effects, the magnets may settle into stable alignments, "
            "oscillate, rotate together, or follow complex motion patterns",
            {{"sin(x0-x1)", "sin(x0)"}, {"sin(x0-x1)", "sin(x1)"}}};

    s[5] = {6,
            "BinocularRivalry(2D)",
            "Binocular rivalry model (no oscillations)",
            2,
            0.0,
            2.0,
            4.0,
            {0.3, 0.6},
            {0.9, 0.1},
            "This describes binocular rivalry, where two competing neural populations represent "
            "different images seen by each eye and suppress each other. Depending on initial "
            "conditions and input strength, one population becomes dominant, leading to stable "
            "perception of only one image at a time",
            {{"x0", "1/(exp(4.89*x1-1.4)+1)"}, {"x1", "1/(exp(4.89*x0-1.4)+1)"}}};

    s[6] = {7,
            "OscillatorDeath(2D)",
            "Oscillator death model by Ermentrout and Kopell (1990)",
            2,
            0.0,
            4.0,
            8.0,
            {1.0, 2.0},
            {0.25, 1.5},
            "This describes a counterintuitive effect where coupling two identical oscillating "
            "systems can completely suppress their oscillations. Strong symmetric interaction "
            "forces both systems into a shared steady state, causing oscillatory activity to "
            "disappear regardless of initial motion",
            {{"sin(x1)*cos(x0)"}, {"sin(x1)*cos(x0)"}}};

    s[7] = {8,
            "Glider(4D)",
            "Glider (physical units)",
            4,
            0.0,
            5.0,
            10.0,
            {6.0, 0.3, 0.0, 10.0},
            {5.0, -0.1, 1.0, 8.0},
            "This is conducted to measure the physical motion characteristics of a glider in "
            "actual flight. The experimenter sets the glider's travel speed, flight path angle "
            "relative to the horizontal plane, horizontal distance, and altitude as main "
            "measurement variables. Specifically, the state variables are defined as forward "
            "velocity, flight path angle, horizontal position, and vertical altitude. The "
            "experiment is based on an aircraft of specific mass moving through the atmosphere "
            "under constant gravitational acceleration, experiencing lift and drag determined "
            "by wing configuration and air density. The aircraft's mass, wing area, and "
            "atmospheric conditions are defined beforehand, and the flight trajectory is "
            "recorded by setting initial launch velocity and altitude.",
            {{"sin(x1)", "x0*x0"}, {"cos(x1)/x0", "x0"}, {"x0*cos(x1)"}, {"x0*sin(x1)"}}};

    return s;
}

const std::vector<SystemSpec>& specs() {
    static const std::vector<SystemSpec> s = build_specs();
    return s;
}

}  // namespace

const SystemSpec& system_spec(int id) {
    if (id < 1 || id > kSystemCount)
        throw UnknownSystem("benchmark system id must be 1..8, got " + std::to_string(id));
    return specs()[static_cast<std::size_t>(id - 1)];
}

void ground_truth_rhs(int id, double /*t*/, std::span<const double> x, std::span<double> dxdt) {
    switch (id) {
        case 1:
            dxdt[0] = -0.4 * x[0] * x[1];
            dxdt[1] = 0.4 * x[0] * x[1] - 0.314 * x[1];
            return;
        case 2:
            dxdt[0] = -x[0] * x[0] / 5.0 - std::sin(x[1]);
            dxdt[1] = x[0] - std::cos(x[1]) / x[0];
            return;
        case 3: {
            const double sat = x[0] * x[0] + 1.0;
            dxdt[0] = 8.9 - 4.0 * x[0] * x[1] / sat - x[0];
            dxdt[1] = 1.4 * x[0] * (1.0 - x[1] / sat);
            return;
        }
        case 4:
            dxdt[0] = 0.5 * (1.0 - x[0]) - x[0] * x[1] * x[1];
            dxdt[1] = -0.02 * x[1] + x[0] * x[1] * x[1];
            return;
        case 5: {
            const double coupling = std::sin(x[0] - x[1]);
            dxdt[0] = 0.33 * coupling - std::sin(x[0]);
            dxdt[1] = -0.33 * coupling - std::sin(x[1]);
            return;
        }
        case 6:
            dxdt[0] = -x[0] + 1.0 / (std::exp(4.89 * x[1] - 1.4) + 1.0);
            dxdt[1] = -x[1] + 1.0 / (std::exp(4.89 * x[0] - 1.4) + 1.0);
            return;
        case 7: {
            const double s = std::sin(x[1]) * std::cos(x[0]);
            dxdt[0] = 1.432 + s;
            dxdt[1] = 0.972 + s;
            return;
        }
        case 8:
            dxdt[0] = -9.81 * std::sin(x[1]) - 0.030625 * x[0] * x[0];
            dxdt[1] = -9.81 * std::cos(x[1]) / x[0] + 0.6125 * x[0];
            dxdt[2] = x[0] * std::cos(x[1]);
            dxdt[3] = x[0] * std::sin(x[1]);
            return;
        default:
            throw UnknownSystem("benchmark system id must be 1..8, got " + std::to_string(id));
    }
}

RhsFn ground_truth_rhs_fn(int id) {
    system_spec(id);  // validate id up front
    return [id](double t, std::span<const double> x, std::span<double> dxdt) {
        ground_truth_rhs(id, t, x, dxdt);
    };
}

}  // namespace dolq

#pragma once

#include <Eigen/Core>

namespace sdenkf {

struct ShallowWaterConfig {
  int nx = 64;
  int ny = 64;
  double dx = 150000.0;       // grid spacing [m]
  double dt = 1.0;            // [s]
  double gravity = 9.8;       // [m/s^2]
  double base_height = 10000.0;   // [m]
  double bump_height = 1000.0;    // [m]
  double bump_width = 32.0;       // nodes; full width at the e^{-1} level
  double background_offset_x = 8.0;  // bump offset of the background run, nodes
  double background_offset_y = 0.0;
};

/// Conservative fields on the interior grid; (i, j) indexes (x, y).
struct ShallowWaterState {
  Eigen::MatrixXd h;   // water level [m]
  Eigen::MatrixXd hu;  // x momentum
  Eigen::MatrixXd hv;  // y momentum
};

enum class InitialCondition { Truth, Background };

ShallowWaterState make_initial_conditions(const ShallowWaterConfig& cfg,
                                          InitialCondition which);

/// One two-step (Richtmyer) Lax-Wendroff update with reflective walls
/// (h mirrored, normal momentum negated). Throws on CFL violation or
/// nonpositive h.
ShallowWaterState shallow_water_step(const ShallowWaterState& s,
                                     const ShallowWaterConfig& cfg);

ShallowWaterState shallow_water_advance(ShallowWaterState s,
                                        const ShallowWaterConfig& cfg,
                                        int steps);

double total_mass(const ShallowWaterState& s, const ShallowWaterConfig& cfg);

/// Variable-major flat layout [h; hu; hv], row-major per variable
/// (index = ix*ny + iy). Matches the taper and 2-D transform layouts.
Eigen::VectorXd flatten(const ShallowWaterState& s);
ShallowWaterState unflatten(const Eigen::VectorXd& v,
                            const ShallowWaterConfig& cfg);

}  // namespace sdenkf

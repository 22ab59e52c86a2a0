// Grids, field states, parameters and trajectory containers for the
// one-dimensional plane-MHD solver.
//
// Layout is staggered on Omega = [0, 1]:
//   - rho, theta live at cell centers  x_i = (i + 1/2) dx,  i = 0..N-1
//   - u, w, b    live at nodes         x_j = j dx,          j = 0..N
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace planemhd {

using Vec2 = std::array<double, 2>;

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm_sq(const Vec2& a) { return dot(a, a); }
inline double norm(const Vec2& a) { return std::sqrt(norm_sq(a)); }
inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a[0], s * a[1]}; }

/// Raised when an input violates a documented precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GridSpec {
  int n_cells = 0;
  double dx = 0.0;
  std::vector<double> cell_centers;
  std::vector<double> node_positions;

  static GridSpec uniform(int n_cells);

  int n_nodes() const { return n_cells + 1; }
};

struct KappaModel {
  double kappa1 = 1.0;
  double kappa2 = 0.0;
  double q = 2.0;

  void validate() const;
};

struct PhysParams {
  double lambda = 1.0;
  double mu = 1e-3;
  double nu = 1.0;
  double gamma = 1.4;
  double c_v = 1.0;
  KappaModel kappa_model;

  void validate() const;
  bool is_limit() const { return mu == 0.0; }
};

enum class BoundaryPreset { zero, constant, cosine_ramp, custom };

std::string to_string(BoundaryPreset p);
BoundaryPreset boundary_preset_from_string(const std::string& s);

/// Transverse wall velocities w^-(t) at x = 0 and w^+(t) at x = 1.  The
/// homogeneous conditions u = b = theta_x = 0 at both walls are implied.
struct BoundaryData {
  std::function<Vec2(double)> w_minus;
  std::function<Vec2(double)> w_plus;
  BoundaryPreset preset = BoundaryPreset::zero;
  double amplitude = 0.0;
  double ramp_period = 0.0;

  static BoundaryData zero();
  /// w^- = w^+ = (amplitude, 0) for all t.
  static BoundaryData constant(double amplitude);
  /// w^- = w^+ = amplitude * r(t) (1, 0) with r(t) = (1 - cos(pi t / ramp)) / 2
  /// for t < ramp and r = 1 afterwards.  Vanishes at t = 0.
  static BoundaryData cosine_ramp(double amplitude, double ramp_period);
  static BoundaryData custom(std::function<Vec2(double)> w_minus, std::function<Vec2(double)> w_plus);

  /// Largest |w^-|, |w^+| sampled on [0, t_end].
  double max_amplitude(double t_end, int samples = 257) const;
};

struct FlowState {
  double t = 0.0;
  std::vector<double> rho;    // n_cells
  std::vector<double> u;      // n_cells + 1
  std::vector<Vec2> w;        // n_cells + 1
  std::vector<Vec2> b;        // n_cells + 1
  std::vector<double> theta;  // n_cells

  int n_cells() const { return static_cast<int>(rho.size()); }
};

/// Checks sizes, positivity of rho and theta, and the wall conditions.  When
/// `bdry` is given, w at the wall nodes must equal the boundary data at s.t
/// (skipped for the mu = 0 limit system, which carries no wall condition on w).
void validate_state(const FlowState& s, const GridSpec& grid, const BoundaryData* bdry = nullptr,
                    double wall_tol = 1e-12);

struct DiagnosticsRecord {
  double t = 0.0;
  double dt = 0.0;  // step that produced this record (0 for the initial one)
  double mass = 0.0;
  double total_energy = 0.0;
  double total_entropy = 0.0;
  double min_rho = 0.0, max_rho = 0.0;
  double min_theta = 0.0, max_theta = 0.0;
  double dissipation_integral = 0.0;
  double w_grad_l2 = 0.0;  // squared L2 norm of w_x
  double w_grad_l1 = 0.0;
  double boundary_work_rate = 0.0;  // (w . w_x)|_{x=0}^{x=1}, one-sided w_x
  std::map<int, double> weighted_w_grad;
};

struct Trajectory {
  std::vector<FlowState> snapshots;
  std::vector<double> snapshot_times;
  std::vector<DiagnosticsRecord> diagnostics;

  double t_end() const { return snapshot_times.empty() ? 0.0 : snapshot_times.back(); }
  double max_step() const;
};

enum class InitialPreset { uniform, bump, wb_zero };

std::string to_string(InitialPreset p);
InitialPreset initial_preset_from_string(const std::string& s);

/// Node-sampled fields.  Cell quantities are obtained by averaging the two
/// adjacent node samples.
struct TabulatedProfile {
  std::vector<double> rho;
  std::vector<double> u;
  std::vector<Vec2> w;
  std::vector<Vec2> b;
  std::vector<double> theta;
};

/// Presets:
///   uniform  rho = 1, u = w = b = 0, theta = 1
///   bump     rho = 1 + 0.2 cos(pi x), theta = 1 + 0.2 cos(2 pi x), u = b = 0,
///            w linear between the wall values at t = 0
///   wb_zero  bump density/temperature with w = b = 0; the boundary data must
///            vanish at t = 0
FlowState make_initial_state(const GridSpec& grid, InitialPreset preset, const BoundaryData& bdry);
FlowState make_initial_state(const GridSpec& grid, const TabulatedProfile& table, const BoundaryData& bdry);

/// Arithmetic mean of the neighbouring cells at interior nodes, one-sided copy
/// at the two wall nodes.
std::vector<double> interpolate_to_nodes(std::span<const double> cell_values);

/// Trapezoid weights for node quantities: dx inside, dx/2 at the walls.
inline double node_weight(const GridSpec& g, int j) {
  return (j == 0 || j == g.n_cells) ? 0.5 * g.dx : g.dx;
}

}  // namespace planemhd

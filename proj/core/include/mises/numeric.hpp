#ifndef MISES_NUMERIC_HPP
#define MISES_NUMERIC_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mises/equations.hpp"
#include "mises/eval.hpp"

namespace mises {

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Grid {
    enum class Bc { Periodic, DirichletExact };
    double x_lo = 0.0;
    double x_hi = 1.0;
    int nx = 64;           // grid nodes including both ends
    double t_end = 0.1;
    int nt = 33;           // snapshot count including t = 0
    Bc bc = Bc::DirichletExact;

    double dx() const { return (x_hi - x_lo) / (nx - 1); }
    double x(int i) const { return x_lo + i * dx(); }
};

using ScalarField = std::function<double(double t, double x)>;

struct NumericSolution {
    Grid grid;
    std::vector<double> times;
    std::vector<std::vector<double>> u; // u[k][i] at times[k], grid.x(i)
    std::string equation_id;
    long steps = 0;
    long rejected = 0;
    double min_abs_ux = 0.0; // over retained snapshots
    bool monotone = false;   // strictly monotone in x at every snapshot
};

struct MolOptions {
    double local_error_tol = 1e-8;
    double dt_max = 0.0;      // 0: unlimited (the error controller finds the stable step)
    double dt_initial = 1e-6;
    double blowup = 1e6;
    double monotonicity_floor = 1e-3;
};

/// Method-of-lines solver for u_t = rhs(t, x, u, u_x, u_xx, u_xxx): second
/// order central differences in x, adaptive Dormand-Prince 5(4) in time.
/// Dirichlet data and the ghost values of wide stencils come from `exact`.
NumericSolution solve_mol(const Expr& rhs, const std::map<std::string, Polynomial>& funcs,
                          const ScalarField& initial, const Grid& grid,
                          const ScalarField& exact = nullptr, const MolOptions& opts = {});

/// Sampled eta(t, u) on a rectangular grid: the Mises image of a monotone
/// numeric solution, built by differentiating in x (4th-order) and
/// resampling (u, u_x) onto a uniform u-grid with shape-preserving cubic
/// interpolation.
struct EtaField {
    std::vector<double> times;
    std::vector<double> ugrid;
    std::vector<std::vector<double>> eta; // eta[k][j]
    std::vector<std::vector<double>> x_of_u; // matching x positions (for closure checks)
};

EtaField build_eta(const NumericSolution& sol, int n_u, double margin = 0.02);

/// Analytic eta-field sampler, for exact-derivative checks.
EtaField sample_eta(const std::function<double(double t, double u)>& eta, double t_lo, double t_hi,
                    int nt, double u_lo, double u_hi, int nu);

struct VerificationReport {
    std::string id;
    double max_residual = 0.0;
    double l2_residual = 0.0;
    double tolerance = 0.0;
    std::optional<double> convergence_order;
    bool pass = false;
    std::vector<std::string> notes;
};

struct ResidualSample {
    double t, u, value;
};

/// Finite-difference residual of a transformed equation on an eta-field:
/// 2nd-order central differences for eta_t and up to eta_uuu. When `map` is
/// given, the per-node residuals are collected for CSV export.
VerificationReport residual_on_field(const MisesEquation& eq, const EtaField& field,
                                     const std::map<std::string, Polynomial>& funcs,
                                     double tolerance,
                                     std::vector<ResidualSample>* map = nullptr);

/// Shape-preserving cubic interpolation (Fritsch-Carlson limited Hermite with
/// 4th-order slope estimates). Abscissas must be strictly increasing.
class MonotoneCubic {
public:
    MonotoneCubic(std::vector<double> xs, std::vector<double> ys);
    MonotoneCubic(std::vector<double> xs, std::vector<double> ys, std::vector<double> slopes);
    double operator()(double x) const;
    double x_min() const { return xs_.front(); }
    double x_max() const { return xs_.back(); }

private:
    std::vector<double> xs_, ys_, ms_;
    void limit_slopes();
};

// --- named verification scenarios ---------------------------------------------

/// Burgers front checked against its closed form; returns max |u - exact|.
double mol_max_error(const NumericSolution& sol, const ScalarField& exact);

struct BurgersCorrespondence {
    std::vector<VerificationReport> levels; // residual reports per refinement level
    double order_12 = 0.0;                  // observed order, level 0 -> 1
    double order_23 = 0.0;                  // observed order, level 1 -> 2
    bool pass = false;
};

/// Criterion run: solve the Burgers front at three paired (solver, field)
/// resolutions and verify the transformed equation eta_t = eta^2 eta_uu - eta^2.
BurgersCorrespondence burgers_correspondence(const std::vector<int>& levels = {64, 128, 256},
                                             double tol_finest = 5e-3, double min_order = 1.5);

/// Exact-solution check: eta = sqrt(2 t u + 1) satisfies (eta eta_u)_t = 1
/// with analytically exact derivatives on an (t, u) grid.
VerificationReport example3_exact(int n = 128, double tolerance = 1e-10);

/// Quadrature closure: along every snapshot, int du/eta recovers x up to an
/// additive constant.
VerificationReport eta_quadrature_closure(const NumericSolution& sol, const EtaField& field,
                                          double tolerance = 1e-3);

struct ShiftCheck {
    std::string id;
    double baseline = 0.0;
    double shifted = 0.0;
    bool expect_invariant = true;
    bool pass = false;
};

/// Characteristic-property suite: x-shift invariance for the two equation
/// classes, plus a wrong-shift negative control.
std::vector<ShiftCheck> characteristic_shift_suite();

/// Shift check on a numeric Burgers solution (constant shift, s = 0).
ShiftCheck burgers_shift_check(const NumericSolution& sol, double shift);

/// Prandtl manufactured-solution checks for the given viscosity (0 or 1),
/// evaluated with exact derivatives of the manufactured fields.
std::vector<VerificationReport> prandtl_manufactured(double nu, double tolerance = 1e-10);

/// Reference Burgers setup shared by the acceptance suite and the CLI.
NumericSolution solve_burgers_front(int nx, int nt, double t_end = 0.5, double x_lo = 0.6,
                                    double x_hi = 4.2);

void write_field_csv(const std::string& path, const EtaField& field);
void write_residual_csv(const std::string& path, const std::vector<ResidualSample>& map);
void write_solution_csv(const std::string& path, const NumericSolution& sol);

} // namespace mises

#endif

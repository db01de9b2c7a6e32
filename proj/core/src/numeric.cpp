#include "mises/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace mises {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = 35.0 / 384 - 5179.0 / 57600, E3 = 500.0 / 1113 - 7571.0 / 16695,
                 E4 = 125.0 / 192 - 393.0 / 640, E5 = -2187.0 / 6784 + 92097.0 / 339200,
                 E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;

struct SpatialOperator {
    Grid grid;
    CompiledExpr rhs;
    int s_t, s_x, s_u, s_ux, s_uxx, s_uxxx;
    bool needs_uxxx;
    ScalarField boundary; // Dirichlet / ghost data
    mutable std::vector<double> work;          // nodes with 2 ghost cells per side
    mutable std::vector<double> slots;

    SpatialOperator(const Expr& rhs_expr, const std::map<std::string, Polynomial>& funcs,
                    const Grid& g, ScalarField bnd)
        : grid(g),
          rhs(rhs_expr, {"t", "x", "u", "u_x", "u_xx", "u_xxx"}, funcs),
          boundary(std::move(bnd)) {
        s_t = 0; s_x = 1; s_u = 2; s_ux = 3; s_uxx = 4; s_uxxx = 5;
        needs_uxxx = contains_symbol(rhs_expr, "u_xxx");
        work.assign(grid.nx + 4, 0.0);
        slots.assign(6, 0.0);
    }

    int interior() const { return grid.nx - 2; }

    // y holds the interior nodes; dy receives du/dt there.
    void operator()(double t, const std::vector<double>& y, std::vector<double>& dy) const {
        const double h = grid.dx();
        double* w = work.data() + 2; // w[i] = u at node i, ghosts at w[-1], w[-2], ...
        if (grid.bc == Grid::Bc::DirichletExact) {
            for (int i = 0; i < interior(); ++i) w[i + 1] = y[i];
            w[0] = boundary(t, grid.x(0));
            w[grid.nx - 1] = boundary(t, grid.x(grid.nx - 1));
            w[-1] = boundary(t, grid.x(0) - h);
            w[-2] = boundary(t, grid.x(0) - 2 * h);
            w[grid.nx] = boundary(t, grid.x(grid.nx - 1) + h);
            w[grid.nx + 1] = boundary(t, grid.x(grid.nx - 1) + 2 * h);
        } else {
            for (int i = 0; i < grid.nx; ++i) w[i] = y[i];
            w[-1] = y[grid.nx - 1];
            w[-2] = y[grid.nx - 2];
            w[grid.nx] = y[0];
            w[grid.nx + 1] = y[1];
        }

        slots[s_t] = t;
        auto eval_at = [&](int i) {
            slots[s_x] = grid.x(i);
            slots[s_u] = w[i];
            slots[s_ux] = (w[i + 1] - w[i - 1]) / (2 * h);
            slots[s_uxx] = (w[i + 1] - 2 * w[i] + w[i - 1]) / (h * h);
            slots[s_uxxx] =
                needs_uxxx ? (w[i + 2] - 2 * w[i + 1] + 2 * w[i - 1] - w[i - 2]) / (2 * h * h * h)
                           : 0.0;
            return rhs.eval(slots);
        };
        if (grid.bc == Grid::Bc::DirichletExact) {
            for (int i = 1; i <= interior(); ++i) dy[i - 1] = eval_at(i);
        } else {
            for (int i = 0; i < grid.nx; ++i) dy[i] = eval_at(i);
        }
    }
};

} // namespace

NumericSolution solve_mol(const Expr& rhs, const std::map<std::string, Polynomial>& funcs,
                          const ScalarField& initial, const Grid& grid, const ScalarField& exact,
                          const MolOptions& opts) {
    if (grid.nx < 16) throw NumericError("grid below the minimum of 16 points");
    if (grid.t_end <= 0) throw NumericError("t_end must be positive");
    if (grid.nt < 3) throw NumericError("need at least 3 snapshots");

    ScalarField boundary = exact;
    if (!boundary) boundary = [&initial](double, double x) { return initial(0.0, x); };
    SpatialOperator op(rhs, funcs, grid, boundary);

    const int n = grid.bc == Grid::Bc::DirichletExact ? op.interior() : grid.nx;
    std::vector<double> y(n), k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y5(n);
    for (int i = 0; i < n; ++i) {
        int node = grid.bc == Grid::Bc::DirichletExact ? i + 1 : i;
        y[i] = initial(0.0, grid.x(node));
    }

    NumericSolution sol;
    sol.grid = grid;

    auto snapshot = [&](double t) {
        std::vector<double> full(grid.nx);
        if (grid.bc == Grid::Bc::DirichletExact) {
            full[0] = boundary(t, grid.x(0));
            full[grid.nx - 1] = boundary(t, grid.x(grid.nx - 1));
            for (int i = 0; i < n; ++i) full[i + 1] = y[i];
        } else {
            full = y;
        }
        sol.times.push_back(t);
        sol.u.push_back(std::move(full));
    };

    double t = 0.0;
    snapshot(t);
    double dt = opts.dt_initial;
    if (opts.dt_max > 0) dt = std::min(dt, opts.dt_max);
    const double atol = opts.local_error_tol, rtol = opts.local_error_tol;

    op(t, y, k1);
    int next_snap = 1;
    const double snap_dt = grid.t_end / (grid.nt - 1);
    while (next_snap < grid.nt) {
        double t_target = next_snap * snap_dt;
        double dt_step = dt;
        bool clipped = false;
        if (t + dt_step >= t_target - 1e-15) {
            dt_step = t_target - t;
            clipped = true;
        }

        for (int i = 0; i < n; ++i) ytmp[i] = y[i] + dt_step * A21 * k1[i];
        op(t + dt_step / 5, ytmp, k2);
        for (int i = 0; i < n; ++i) ytmp[i] = y[i] + dt_step * (A31 * k1[i] + A32 * k2[i]);
        op(t + 3 * dt_step / 10, ytmp, k3);
        for (int i = 0; i < n; ++i)
            ytmp[i] = y[i] + dt_step * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        op(t + 4 * dt_step / 5, ytmp, k4);
        for (int i = 0; i < n; ++i)
            ytmp[i] = y[i] + dt_step * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        op(t + 8 * dt_step / 9, ytmp, k5);
        for (int i = 0; i < n; ++i)
            ytmp[i] = y[i] + dt_step * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] +
                                        A65 * k5[i]);
        op(t + dt_step, ytmp, k6);
        for (int i = 0; i < n; ++i)
            y5[i] = y[i] +
                    dt_step * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        op(t + dt_step, y5, k7);

        double errsq = 0.0;
        for (int i = 0; i < n; ++i) {
            double e = dt_step * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] +
                                  E7 * k7[i]);
            double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            errsq += (e / scale) * (e / scale);
        }
        double err = std::sqrt(errsq / n);
        bool accepted = err <= 1.0;

        if (accepted) {
            t += dt_step;
            y.swap(y5);
            k1.swap(k7); // FSAL
            sol.steps += 1;
            for (double v : y)
                if (std::abs(v) > opts.blowup) throw NumericError("solution blow-up detected");
            if (clipped && std::abs(t - t_target) < 1e-12) {
                snapshot(t);
                next_snap += 1;
            }
        } else {
            sol.rejected += 1;
        }
        double factor = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
        double dt_new = dt_step * factor;
        // a step clipped to land on a snapshot must not shrink the candidate
        dt = (clipped && accepted) ? std::max(dt, dt_new) : dt_new;
        if (opts.dt_max > 0) dt = std::min(dt, opts.dt_max);
        if (dt < 1e-14) throw NumericError("time step collapsed");
    }

    // monotonicity scan over retained snapshots
    sol.monotone = true;
    sol.min_abs_ux = std::numeric_limits<double>::infinity();
    const double h = grid.dx();
    for (const auto& row : sol.u) {
        double sgn = row[1] > row[0] ? 1.0 : -1.0;
        for (size_t i = 0; i + 1 < row.size(); ++i) {
            double d = (row[i + 1] - row[i]) / h;
            if (d * sgn <= 0) sol.monotone = false;
            sol.min_abs_ux = std::min(sol.min_abs_ux, std::abs(d));
        }
    }
    if (sol.min_abs_ux < opts.monotonicity_floor) sol.monotone = false;
    return sol;
}

// --- shape-preserving interpolation -----------------------------------------

namespace {

// Derivative at x0 of the interpolating polynomial through (xs, ys).
double lagrange_derivative(const double* xs, const double* ys, int n, double x0) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        double term = 0.0;
        for (int m = 0; m < n; ++m) {
            if (m == j) continue;
            double prod = 1.0;
            for (int k = 0; k < n; ++k) {
                if (k == j || k == m) continue;
                prod *= (x0 - xs[k]);
            }
            term += prod;
        }
        double denom = 1.0;
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            denom *= (xs[j] - xs[k]);
        }
        acc += ys[j] * term / denom;
    }
    return acc;
}

} // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    const int n = static_cast<int>(xs_.size());
    if (n < 5) throw NumericError("interpolation needs at least 5 points");
    ms_.resize(n);
    for (int i = 0; i < n; ++i) {
        int lo = std::clamp(i - 2, 0, n - 5);
        ms_[i] = lagrange_derivative(xs_.data() + lo, ys_.data() + lo, 5, xs_[i]);
    }
    limit_slopes();
}

MonotoneCubic::MonotoneCubic(std::vector<double> xs, std::vector<double> ys,
                             std::vector<double> slopes)
    : xs_(std::move(xs)), ys_(std::move(ys)), ms_(std::move(slopes)) {
    if (xs_.size() < 2 || xs_.size() != ys_.size() || xs_.size() != ms_.size())
        throw NumericError("inconsistent interpolation data");
    limit_slopes();
}

void MonotoneCubic::limit_slopes() {
    const int n = static_cast<int>(xs_.size());
    std::vector<double> sec(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
        if (xs_[i + 1] <= xs_[i]) throw NumericError("abscissas must be strictly increasing");
        sec[i] = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
    }
    for (int i = 0; i < n; ++i) {
        double sl = i > 0 ? sec[i - 1] : sec[0];
        double sr = i + 1 < n ? sec[i] : sec[n - 2];
        if (i > 0 && i + 1 < n && sl * sr <= 0.0) {
            ms_[i] = 0.0; // local extremum of the data
            continue;
        }
        double bound = 3.0 * std::min(std::abs(sl), std::abs(sr));
        double ref = std::abs(sl) > 0 ? sl : sr;
        if (ms_[i] * ref < 0.0) ms_[i] = 0.0;
        else if (std::abs(ms_[i]) > bound) ms_[i] = std::copysign(bound, ms_[i]);
    }
}

double MonotoneCubic::operator()(double x) const {
    const int n = static_cast<int>(xs_.size());
    if (x < xs_.front() - 1e-12 || x > xs_.back() + 1e-12)
        throw NumericError("interpolation point outside the data range");
    int lo = static_cast<int>(std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin()) - 1;
    lo = std::clamp(lo, 0, n - 2);
    double h = xs_[lo + 1] - xs_[lo];
    double s = (x - xs_[lo]) / h;
    double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    double h10 = s * (1 - s) * (1 - s);
    double h01 = s * s * (3 - 2 * s);
    double h11 = s * s * (s - 1);
    return h00 * ys_[lo] + h10 * h * ms_[lo] + h01 * ys_[lo + 1] + h11 * h * ms_[lo + 1];
}

// --- eta field ----------------------------------------------------------------

EtaField build_eta(const NumericSolution& sol, int n_u, double margin) {
    if (!sol.monotone)
        throw NumericError("solution is not strictly monotone; the Mises map is not invertible");
    const int nx = sol.grid.nx;
    const double h = sol.grid.dx();

    struct SnapshotData {
        std::vector<double> u, eta, x;
    };
    std::vector<SnapshotData> snaps;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    for (const auto& row : sol.u) {
        SnapshotData s;
        for (int i = 2; i < nx - 2; ++i) {
            double ux = (-row[i + 2] + 8 * row[i + 1] - 8 * row[i - 1] + row[i - 2]) / (12 * h);
            s.u.push_back(row[i]);
            s.eta.push_back(ux);
            s.x.push_back(sol.grid.x(i));
        }
        if (s.u.front() > s.u.back()) {
            std::reverse(s.u.begin(), s.u.end());
            std::reverse(s.eta.begin(), s.eta.end());
            std::reverse(s.x.begin(), s.x.end());
        }
        lo = std::max(lo, s.u.front());
        hi = std::min(hi, s.u.back());
        snaps.push_back(std::move(s));
    }
    if (!(hi > lo)) throw NumericError("snapshot u-ranges do not overlap");
    double pad = margin * (hi - lo);
    lo += pad;
    hi -= pad;

    EtaField field;
    field.times = sol.times;
    field.ugrid.resize(n_u);
    for (int j = 0; j < n_u; ++j) field.ugrid[j] = lo + (hi - lo) * j / (n_u - 1);

    for (const auto& s : snaps) {
        MonotoneCubic eta_interp(s.u, s.eta);
        std::vector<double> xslopes(s.u.size());
        for (size_t i = 0; i < s.u.size(); ++i) xslopes[i] = 1.0 / s.eta[i]; // dx/du = 1/u_x
        MonotoneCubic x_interp(s.u, s.x, xslopes);
        std::vector<double> erow(n_u), xrow(n_u);
        for (int j = 0; j < n_u; ++j) {
            erow[j] = eta_interp(field.ugrid[j]);
            xrow[j] = x_interp(field.ugrid[j]);
        }
        field.eta.push_back(std::move(erow));
        field.x_of_u.push_back(std::move(xrow));
    }
    return field;
}

EtaField sample_eta(const std::function<double(double, double)>& eta, double t_lo, double t_hi,
                    int nt, double u_lo, double u_hi, int nu) {
    EtaField field;
    field.times.resize(nt);
    field.ugrid.resize(nu);
    for (int k = 0; k < nt; ++k) field.times[k] = t_lo + (t_hi - t_lo) * k / (nt - 1);
    for (int j = 0; j < nu; ++j) field.ugrid[j] = u_lo + (u_hi - u_lo) * j / (nu - 1);
    for (int k = 0; k < nt; ++k) {
        std::vector<double> row(nu);
        for (int j = 0; j < nu; ++j) row[j] = eta(field.times[k], field.ugrid[j]);
        field.eta.push_back(std::move(row));
    }
    return field;
}

VerificationReport residual_on_field(const MisesEquation& eq, const EtaField& field,
                                     const std::map<std::string, Polynomial>& funcs,
                                     double tolerance, std::vector<ResidualSample>* map) {
    VerificationReport rep;
    rep.id = "residual";
    rep.tolerance = tolerance;

    const int nt = static_cast<int>(field.times.size());
    const int nu = static_cast<int>(field.ugrid.size());
    if (nt < 3 || nu < 5) throw NumericError("field too coarse for finite differences");

    // reject unsupported jets
    JetContext jc = eq.jet_context();
    for (const auto& name : free_symbols(eq.residual())) {
        auto counts = match_jet(name, eq.dep, eq.independents);
        if (!counts) continue;
        int tu = 0, uu = 0;
        for (size_t d = 0; d < counts->size(); ++d) {
            if (eq.independents[d] == "t") tu = (*counts)[d];
            else uu += (*counts)[d];
        }
        if (tu > 1 || uu > 3 || (tu == 1 && uu > 1)) {
            rep.notes.push_back("unsupported derivative " + name + "; check skipped");
            rep.pass = false;
            return rep;
        }
    }

    std::vector<std::string> slots = {"t", "u", eq.dep, eq.dep + "_t", eq.dep + "_u",
                                      eq.dep + "_uu", eq.dep + "_uuu", eq.dep + "_tu"};
    CompiledExpr res(eq.residual(), slots, funcs);

    const double dt = field.times[1] - field.times[0];
    const double du = field.ugrid[1] - field.ugrid[0];
    double maxr = 0.0, sumsq = 0.0;
    long count = 0;
    std::vector<double> v(slots.size());
    for (int k = 1; k + 1 < nt; ++k) {
        const auto& e0 = field.eta[k - 1];
        const auto& e1 = field.eta[k];
        const auto& e2 = field.eta[k + 1];
        for (int j = 2; j + 2 < nu; ++j) {
            v[0] = field.times[k];
            v[1] = field.ugrid[j];
            v[2] = e1[j];
            v[3] = (e2[j] - e0[j]) / (2 * dt);
            v[4] = (e1[j + 1] - e1[j - 1]) / (2 * du);
            v[5] = (e1[j + 1] - 2 * e1[j] + e1[j - 1]) / (du * du);
            v[6] = (e1[j + 2] - 2 * e1[j + 1] + 2 * e1[j - 1] - e1[j - 2]) / (2 * du * du * du);
            v[7] = (e2[j + 1] - e2[j - 1] - e0[j + 1] + e0[j - 1]) / (4 * dt * du);
            double r = std::abs(res.eval(v));
            if (map != nullptr) map->push_back({v[0], v[1], r});
            maxr = std::max(maxr, r);
            sumsq += r * r;
            count += 1;
        }
    }
    rep.max_residual = maxr;
    rep.l2_residual = std::sqrt(sumsq / count);
    rep.pass = maxr <= tolerance;
    return rep;
}

// --- named scenarios ----------------------------------------------------------

double mol_max_error(const NumericSolution& sol, const ScalarField& exact) {
    double worst = 0.0;
    for (size_t k = 0; k < sol.times.size(); ++k)
        for (int i = 0; i < sol.grid.nx; ++i)
            worst = std::max(worst, std::abs(sol.u[k][i] - exact(sol.times[k], sol.grid.x(i))));
    return worst;
}

NumericSolution solve_burgers_front(int nx, int nt, double t_end, double x_lo, double x_hi) {
    auto exact = [](double t, double x) { return 1.0 - std::tanh((x - t) / 2); };
    Grid grid{x_lo, x_hi, nx, t_end, nt, Grid::Bc::DirichletExact};
    Expr rhs = symbol("u_xx") - symbol("u") * symbol("u_x");
    MolOptions opts;
    opts.dt_max = 0.5 * grid.dx() * grid.dx();
    NumericSolution sol = solve_mol(rhs, {}, exact, grid, exact, opts);
    sol.equation_id = "burgers-front";
    return sol;
}

BurgersCorrespondence burgers_correspondence(const std::vector<int>& levels, double tol_finest,
                                             double min_order) {
    MisesEquation eq;
    eq.lhs = symbol("eta_t");
    Expr eta = symbol("eta");
    eq.rhs = simplify(eta * eta * symbol("eta_uu") - eta * eta);

    BurgersCorrespondence out;
    for (int n : levels) {
        NumericSolution sol = solve_burgers_front(2 * n + 1, n + 1);
        EtaField field = build_eta(sol, n);
        VerificationReport rep = residual_on_field(eq, field, {}, tol_finest);
        rep.id = "burgers-correspondence-" + std::to_string(n);
        out.levels.push_back(rep);
    }
    if (out.levels.size() >= 3) {
        out.order_12 = std::log2(out.levels[0].max_residual / out.levels[1].max_residual);
        out.order_23 = std::log2(out.levels[1].max_residual / out.levels[2].max_residual);
        out.levels.back().convergence_order = out.order_23;
        out.pass = out.levels.back().max_residual <= tol_finest && out.order_12 >= min_order &&
                   out.order_23 >= min_order;
    }
    return out;
}

VerificationReport example3_exact(int n, double tolerance) {
    VerificationReport rep;
    rep.id = "example3-exact";
    rep.tolerance = tolerance;
    double maxr = 0.0, sumsq = 0.0;
    for (int k = 0; k < n; ++k) {
        double t = 0.2 + k * 1.0 / (n - 1);
        for (int j = 0; j < n; ++j) {
            double u = 0.3 + j * 1.0 / (n - 1);
            double eta = std::sqrt(2 * t * u + 1);
            double eta_t = u / eta;
            double eta_u = t / eta;
            double eta_tu = 1.0 / eta - u * t / (eta * eta * eta);
            // (eta eta_u)_t = eta_t eta_u + eta eta_tu, expected to equal 1
            double r = std::abs(eta_t * eta_u + eta * eta_tu - 1.0);
            maxr = std::max(maxr, r);
            sumsq += r * r;
        }
    }
    rep.max_residual = maxr;
    rep.l2_residual = std::sqrt(sumsq / (double(n) * n));
    rep.pass = maxr <= tolerance;
    return rep;
}

VerificationReport eta_quadrature_closure(const NumericSolution&, const EtaField& field,
                                          double tolerance) {
    VerificationReport rep;
    rep.id = "eta-quadrature-closure";
    rep.tolerance = tolerance;
    const int nu = static_cast<int>(field.ugrid.size());
    const double du = field.ugrid[1] - field.ugrid[0];
    double worst = 0.0;
    for (size_t k = 0; k < field.times.size(); ++k) {
        std::vector<double> q(nu, 0.0);
        for (int j = 0; j + 1 < nu; ++j)
            q[j + 1] = q[j] + 0.5 * du * (1.0 / field.eta[k][j] + 1.0 / field.eta[k][j + 1]);
        double mean = 0.0;
        for (int j = 0; j < nu; ++j) mean += q[j] - (field.x_of_u[k][j] - field.x_of_u[k][0]);
        mean /= nu;
        for (int j = 0; j < nu; ++j)
            worst = std::max(worst,
                             std::abs(q[j] - (field.x_of_u[k][j] - field.x_of_u[k][0]) - mean));
    }
    rep.max_residual = worst;
    rep.pass = worst <= tolerance;
    return rep;
}

namespace {

// FD residual of u_x u_tx - u_t u_xx = u_xx for a closed-form field.
double bl_class_residual(const std::function<double(double, double)>& u, double shift) {
    auto us = [&](double t, double x) { return u(t, x + shift); };
    const int nt = 41, nx = 41;
    const double t0 = 0.05, t1 = 0.45, x0 = 0.1, x1 = 0.9;
    const double dt = (t1 - t0) / (nt - 1), dx = (x1 - x0) / (nx - 1);
    double worst = 0.0;
    for (int k = 1; k + 1 < nt; ++k)
        for (int i = 1; i + 1 < nx; ++i) {
            double t = t0 + k * dt, x = x0 + i * dx;
            double ux = (us(t, x + dx) - us(t, x - dx)) / (2 * dx);
            double ut = (us(t + dt, x) - us(t - dt, x)) / (2 * dt);
            double uxx = (us(t, x + dx) - 2 * us(t, x) + us(t, x - dx)) / (dx * dx);
            double utx = (us(t + dt, x + dx) - us(t + dt, x - dx) - us(t - dt, x + dx) +
                          us(t - dt, x - dx)) /
                         (4 * dt * dx);
            worst = std::max(worst, std::abs(ux * utx - ut * uxx - uxx));
        }
    return worst;
}

// FD residual of u_t = x u_x for a closed-form field with an arbitrary shift law.
double evolution_class_residual(const std::function<double(double)>& phi) {
    auto u = [&](double t, double x) { return std::tanh((x + phi(t)) * std::exp(t)); };
    const int nt = 41, nx = 41;
    const double t0 = 0.05, t1 = 0.45, x0 = 0.1, x1 = 0.9;
    const double dt = (t1 - t0) / (nt - 1), dx = (x1 - x0) / (nx - 1);
    double worst = 0.0;
    for (int k = 1; k + 1 < nt; ++k)
        for (int i = 1; i + 1 < nx; ++i) {
            double t = t0 + k * dt, x = x0 + i * dx;
            double ux = (u(t, x + dx) - u(t, x - dx)) / (2 * dx);
            double ut = (u(t + dt, x) - u(t - dt, x)) / (2 * dt);
            worst = std::max(worst, std::abs(ut - x * ux));
        }
    return worst;
}

} // namespace

std::vector<ShiftCheck> characteristic_shift_suite() {
    std::vector<ShiftCheck> out;

    // class u_x u_tx - u_t u_xx = F: u = e^x - t solves it with F = u_xx
    {
        auto u = [](double t, double x) { return std::exp(x) - t; };
        ShiftCheck c;
        c.id = "boundary-layer-class-constant-shift";
        c.baseline = bl_class_residual(u, 0.0);
        c.shifted = bl_class_residual(u, 0.1);
        c.expect_invariant = true;
        c.pass = c.shifted <= 10 * std::max(c.baseline, 1e-14);
        out.push_back(c);
    }
    // evolution class with s = 1: u = H(x e^t), admissible shift psi = C exp(-t)
    {
        ShiftCheck c;
        c.id = "evolution-class-exponential-shift";
        c.baseline = evolution_class_residual([](double) { return 0.0; });
        c.shifted = evolution_class_residual([](double t) { return 0.1 * std::exp(-t); });
        c.expect_invariant = true;
        c.pass = c.shifted <= 10 * std::max(c.baseline, 1e-14);
        out.push_back(c);
    }
    // negative control: the wrong shift law phi = t^2 must break the equation
    {
        ShiftCheck c;
        c.id = "evolution-class-wrong-shift";
        c.baseline = evolution_class_residual([](double) { return 0.0; });
        c.shifted = evolution_class_residual([](double t) { return t * t; });
        c.expect_invariant = false;
        c.pass = c.shifted > 10 * std::max(c.baseline, 1e-14);
        out.push_back(c);
    }
    return out;
}

ShiftCheck burgers_shift_check(const NumericSolution& sol, double shift) {
    // resample u(t, x + shift) through interpolation and measure the residual
    // of u_t + u u_x - u_xx on the overlapping window
    const int nx = sol.grid.nx;
    auto sample = [&](double sh) {
        std::vector<std::vector<double>> rows;
        const double lo = sol.grid.x_lo, hi = sol.grid.x_hi - sh;
        const int m = nx / 2;
        for (const auto& row : sol.u) {
            std::vector<double> xs(nx), us(nx);
            for (int i = 0; i < nx; ++i) {
                xs[i] = sol.grid.x(i);
                us[i] = row[i];
            }
            MonotoneCubic interp(xs, us);
            std::vector<double> r(m);
            for (int i = 0; i < m; ++i) {
                double x = lo + (hi - lo) * i / (m - 1);
                r[i] = interp(x + sh);
            }
            rows.push_back(std::move(r));
        }
        return rows;
    };
    auto residual = [&](const std::vector<std::vector<double>>& rows, double sh) {
        const int m = static_cast<int>(rows[0].size());
        const double lo = sol.grid.x_lo, hi = sol.grid.x_hi - sh;
        const double dx = (hi - lo) / (m - 1);
        const double dt = sol.times[1] - sol.times[0];
        double worst = 0.0;
        for (size_t k = 1; k + 1 < rows.size(); ++k)
            for (int i = 1; i + 1 < m; ++i) {
                double ut = (rows[k + 1][i] - rows[k - 1][i]) / (2 * dt);
                double ux = (rows[k][i + 1] - rows[k][i - 1]) / (2 * dx);
                double uxx = (rows[k][i + 1] - 2 * rows[k][i] + rows[k][i - 1]) / (dx * dx);
                worst = std::max(worst, std::abs(ut + rows[k][i] * ux - uxx));
            }
        return worst;
    };

    ShiftCheck c;
    c.id = "burgers-constant-shift";
    c.baseline = residual(sample(0.0), 0.0);
    c.shifted = residual(sample(shift), shift);
    c.expect_invariant = true;
    c.pass = c.shifted <= 10 * std::max(c.baseline, 1e-14);
    return c;
}

std::vector<VerificationReport> prandtl_manufactured(double nu, double tolerance) {
    std::vector<VerificationReport> out;

    struct Sample {
        double u, ut, ux, uy, uty, uxy, uyy, uyyy, v, vy, f;
    };
    auto run = [&](const std::string& id, const std::function<Sample(double, double, double)>& s) {
        VerificationReport rep;
        rep.id = id;
        rep.tolerance = tolerance;
        double worst76 = 0.0, worst74 = 0.0, sumsq = 0.0;
        long cnt = 0;
        for (int a = 0; a <= 20; ++a)
            for (int b = 0; b <= 20; ++b)
                for (int c = 0; c <= 20; ++c) {
                    double t = 0.2 + 0.6 * a / 20, x = 0.2 + 0.6 * b / 20, y = 0.2 + 0.6 * c / 20;
                    Sample q = s(t, x, y);
                    // Mises image of the manufactured field
                    double eta = q.uy;
                    double eta_u = q.uyy / q.uy;
                    double eta_uu = (q.uyyy * q.uy - q.uyy * q.uyy) / (q.uy * q.uy * q.uy);
                    double eta_t = q.uty - q.uyy * q.ut / q.uy;
                    double eta_x = q.uxy - q.uyy * q.ux / q.uy;
                    double r76 = eta_t + q.u * eta_x + q.f * eta_u - nu * eta * eta * eta_uu;
                    double mom = q.ut + q.u * q.ux + q.v * q.uy - nu * q.uyy - q.f;
                    double cont = q.ux + q.vy;
                    worst76 = std::max(worst76, std::abs(r76));
                    worst74 = std::max(worst74, std::max(std::abs(mom), std::abs(cont)));
                    sumsq += r76 * r76;
                    cnt += 1;
                }
        rep.max_residual = worst76;
        rep.l2_residual = std::sqrt(sumsq / cnt);
        rep.pass = worst76 <= tolerance && worst74 <= tolerance;
        rep.notes.push_back("momentum/continuity residual of the system: " + std::to_string(worst74));
        out.push_back(rep);
    };

    // u = y: eta == 1, v = 0, forcing 0
    run("prandtl-uniform-shear", [&](double, double, double y) {
        Sample q{};
        q.u = y;
        q.uy = 1.0;
        q.f = 0.0;
        return q;
    });

    if (nu == 0.0) {
        // u = t + C(t,x) e^y with C = 1 + x/5, v = -C_x e^y + d, f = 1
        run("prandtl-inviscid-drift", [&](double t, double x, double y) {
            double C = 1 + x / 5, Cx = 0.2, Ct = 0.0;
            double ey = std::exp(y);
            Sample q{};
            q.u = t + C * ey;
            q.ut = 1 + Ct * ey;
            q.ux = Cx * ey;
            q.uy = C * ey;
            q.uty = Ct * ey;
            q.uxy = Cx * ey;
            q.uyy = C * ey;
            q.uyyy = C * ey;
            double d = -(Ct + t * Cx) / C;
            q.v = -Cx * ey + d;
            q.vy = -Cx * ey;
            q.f = 1.0;
            return q;
        });
    } else {
        // u = (y + c)^2 / 4 with c = 1 + t/4 + x/3, v = -c_x (y+c)^2/4 - c_t, f = -nu/2
        run("prandtl-viscous-parabola", [&](double t, double x, double y) {
            double c = 1 + t / 4 + x / 3, cx = 1.0 / 3, ct = 0.25;
            double w = y + c;
            Sample q{};
            q.u = w * w / 4;
            q.ut = w * ct / 2;
            q.ux = w * cx / 2;
            q.uy = w / 2;
            q.uty = ct / 2;
            q.uxy = cx / 2;
            q.uyy = 0.5;
            q.uyyy = 0.0;
            q.v = -cx * w * w / 4 - ct;
            q.vy = -cx * w / 2;
            q.f = -nu / 2;
            return q;
        });
    }
    return out;
}

void write_residual_csv(const std::string& path, const std::vector<ResidualSample>& map) {
    std::ofstream out(path);
    if (!out) throw NumericError("cannot open " + path);
    out << "t,u,residual\n";
    for (const auto& s : map) out << s.t << ',' << s.u << ',' << s.value << '\n';
}

void write_field_csv(const std::string& path, const EtaField& field) {
    std::ofstream out(path);
    if (!out) throw NumericError("cannot open " + path);
    out << "t,u,eta\n";
    for (size_t k = 0; k < field.times.size(); ++k)
        for (size_t j = 0; j < field.ugrid.size(); ++j)
            out << field.times[k] << ',' << field.ugrid[j] << ',' << field.eta[k][j] << '\n';
}

void write_solution_csv(const std::string& path, const NumericSolution& sol) {
    std::ofstream out(path);
    if (!out) throw NumericError("cannot open " + path);
    out << "t,x,u\n";
    for (size_t k = 0; k < sol.times.size(); ++k)
        for (int i = 0; i < sol.grid.nx; ++i)
            out << sol.times[k] << ',' << sol.grid.x(i) << ',' << sol.u[k][i] << '\n';
}

} // namespace mises

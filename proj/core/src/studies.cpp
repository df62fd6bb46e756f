#include "iwbl/studies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>

#include <json.hpp>

#include "iwbl/bl.hpp"
#include "iwbl/bulk.hpp"
#include "iwbl/init.hpp"
#include "iwbl/nonlinear.hpp"
#include "iwbl/norms.hpp"

namespace iwbl {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

GridSpec parse_grid(const Config& cfg) {
    GridSpec g;
    g.Nx = cfg.get_int("grid.Nx", g.Nx);
    g.Ny = cfg.get_int("grid.Ny", g.Ny);
    g.Nz = cfg.get_int("grid.Nz", g.Nz);
    g.Neta = cfg.get_int("grid.Neta", g.Neta);
    g.L_eta = cfg.get_double("grid.L_eta", g.L_eta);
    g.dealias_fraction = cfg.get_double("grid.dealias_fraction", g.dealias_fraction);
    g.validate();
    return g;
}

InitParams parse_init(const Config& cfg) {
    InitParams p;
    p.recipe = cfg.get_str("init.recipe", p.recipe);
    p.amplitude = cfg.get_double("init.amplitude", p.amplitude);
    p.kx = cfg.get_int("init.kx", p.kx);
    p.ky = cfg.get_int("init.ky", p.ky);
    p.decay = cfg.get_double("init.decay", p.decay);
    return p;
}

NormParams parse_norms(const Config& cfg, const NormParams& def) {
    NormParams p = def;
    p.d = cfg.get_double("norms.d", p.d);
    p.r = cfg.get_double("norms.r", p.r);
    p.tau = cfg.get_double("norms.tau", p.tau);
    p.M = cfg.get_int("norms.M", p.M);
    p.validate();
    return p;
}

BulkState bulk_init(const Config& cfg, const GridSpec& g) {
    std::string snap = cfg.get_str("init.snapshot", "");
    if (!snap.empty()) return load_bulk_snapshot(snap);
    return make_bulk_init(parse_init(cfg), g);
}

BLState bl_init(const Config& cfg, const GridSpec& g) {
    std::string snap = cfg.get_str("init.snapshot", "");
    if (!snap.empty()) return load_bl_snapshot(snap);
    return make_bl_init(parse_init(cfg), g);
}

void write_manifest(const std::string& dir, const Config& cfg) {
    std::string m;
    m += "# iwbl run manifest (resolved configuration)\n";
    m += "iwbl.version = ";
    m += kVersion;
    m += "\n";
    m += cfg.dump();
    write_text_file(dir + "/manifest.txt", m);
}

void write_json(const std::string& dir, const std::string& name,
                const json& j) {
    write_text_file(dir + "/" + name, j.dump(2) + "\n");
}

// Error relative to `scale`, not to |pred| at this instant: the predicted
// traces drift linearly and cross zero, where a pointwise-in-time relative
// error is meaningless.
double rel_field_error(const SpectralField2D& meas, const SpectralField2D& pred,
                       double scale) {
    SpectralField2D diff = meas;
    diff.raw() -= pred.raw();
    return diff.l2_norm() / std::max(scale, 1e-300);
}

void study_linear_bulk(const Config& cfg, const std::string& dir) {
    GridSpec g = parse_grid(cfg);
    double eps = cfg.get_double("physics.eps", 0.1);
    double T = cfg.get_double("physics.T", 1.0);
    int n_out = cfg.get_int("output.samples", 50);
    int snap_stride = cfg.get_int("output.snapshot_stride", 0);
    if (!(eps > 0.0) || !(T > 0.0) || n_out < 1)
        throw ConfigError("linear-bulk: need eps > 0, T > 0, samples >= 1");

    BulkState s = bulk_init(cfg, g);
    BulkState init = s;
    FourierTransform2D ft(g);
    BulkPropagator prop(g, eps, T / n_out);
    const ZOps& z = prop.zops();

    double E0 = bulk_energy(s, z);
    CsvWriter csv(dir + "/series.csv",
                  {"t", "energy", "div_defect", "imperm_defect",
                   "meas_dzz_w0", "pred_dzz_w0", "meas_dzz_theta0",
                   "pred_dzz_theta0", "meas_dz_v0", "pred_dz_v0"});
    double max_drift = 0, max_div = 0, max_imp = 0;
    double err_w = 0, err_th = 0, err_v = 0;
    double scale_w = 0, scale_th = 0, scale_v = 0;  // running max of |pred|
    for (int i = 0; i <= n_out; ++i) {
        if (i > 0) prop.step(s);
        TraceReport meas = boundary_trace_diagnostics(s, z, ft);
        TraceReport pred = predicted_traces(init, eps, s.time, z, ft);
        csv.row({s.time, bulk_energy(s, z), s.divergence_defect(z),
                 s.impermeability_defect(), meas.wall[0].sup_dzz_w,
                 pred.wall[0].sup_dzz_w, meas.wall[0].sup_dzz_theta,
                 pred.wall[0].sup_dzz_theta, meas.wall[0].sup_dz_v,
                 pred.wall[0].sup_dz_v});
        if (E0 > 0)
            max_drift = std::max(max_drift,
                                 std::abs(bulk_energy(s, z) - E0) / E0);
        max_div = std::max(max_div, s.divergence_defect(z));
        max_imp = std::max(max_imp, s.impermeability_defect());
        for (int wall = 0; wall < 2; ++wall) {
            scale_w = std::max(scale_w, pred.wall[wall].dzz_w.l2_norm());
            scale_th = std::max(scale_th, pred.wall[wall].dzz_theta.l2_norm());
            scale_v = std::max(scale_v, pred.wall[wall].dz_vx.l2_norm());
            err_w = std::max(err_w,
                             rel_field_error(meas.wall[wall].dzz_w,
                                             pred.wall[wall].dzz_w, scale_w));
            err_th = std::max(err_th, rel_field_error(meas.wall[wall].dzz_theta,
                                                      pred.wall[wall].dzz_theta,
                                                      scale_th));
            err_v = std::max(err_v,
                             rel_field_error(meas.wall[wall].dz_vx,
                                             pred.wall[wall].dz_vx, scale_v));
        }
        if (snap_stride > 0 && i % snap_stride == 0)
            save_snapshot(s, dir + "/state_" + std::to_string(i) + ".snap");
    }
    csv.close();
    save_snapshot(s, dir + "/final.snap");

    json rep;
    rep["study"] = "linear-bulk";
    rep["eps"] = eps;
    rep["T"] = T;
    rep["energy_drift_rel_per_unit_time"] = T > 0 ? max_drift / T : 0.0;
    rep["max_divergence_defect"] = max_div;
    rep["max_impermeability_defect"] = max_imp;
    rep["max_rel_trace_error_dzz_w"] = err_w;
    rep["max_rel_trace_error_dzz_theta"] = err_th;
    rep["max_rel_trace_error_dz_v"] = err_v;
    write_json(dir, "report.json", rep);
}

void study_scaling_sweep(const Config& cfg, const std::string& dir) {
    GridSpec g = parse_grid(cfg);
    std::vector<double> eps_list =
        cfg.get_list("physics.eps_list", {0.2, 0.1, 0.05, 0.025});
    double T = cfg.get_double("physics.T", 0.2);
    int n_samples = cfg.get_int("output.samples", 8);

    InitParams ip = parse_init(cfg);
    if (!cfg.has("init.recipe")) ip.recipe = "bulk-scaling";
    BulkState init = make_bulk_init(ip, g);
    FourierTransform2D ft(g);
    ScalingReport rep = scaling_study(init, eps_list, T, n_samples, ft);

    CsvWriter csv(dir + "/sweep.csv",
                  {"eps", "sup_dzz_w", "sup_dzz_theta", "sup_dz_v"});
    for (size_t i = 0; i < rep.eps.size(); ++i)
        csv.row({rep.eps[i], rep.sup_dzz_w[i], rep.sup_dzz_theta[i],
                 rep.sup_dz_v[i]});
    csv.close();

    json j;
    j["study"] = "scaling-sweep";
    j["T"] = T;
    j["eps"] = rep.eps;
    j["slope_dzz_w"] = rep.slope_dzz_w;
    j["slope_dzz_theta"] = rep.slope_dzz_theta;
    j["slope_dz_v"] = rep.slope_dz_v;
    write_json(dir, "report.json", j);
}

void study_linear_bl(const Config& cfg, const std::string& dir, bool lid) {
    GridSpec g = parse_grid(cfg);
    double T = cfg.get_double("physics.T", 1.0);
    double dt = cfg.get_double("physics.dt", 0.0);
    int k_order = cfg.get_int("bl.k_order", 1);
    if (dt <= 0.0) dt = auto_dt(g);
    int n_steps = std::max(1, int(std::ceil(T / dt - 1e-9)));
    dt = T / n_steps;

    EtaOps eta(g);
    BLState s = bl_init(cfg, g);
    double E0 = bl_energy(s, eta);
    SpectralField2D C0 = compatibility(s, eta);

    std::vector<BLState> samples;
    std::vector<double> times;
    CsvWriter csv(dir + "/series.csv",
                  {"t", "energy", "h1_cell_energy", "identity_rhs",
                   "compat_defect", "compat_drift_pred"});
    for (int i = 0; i <= n_steps; ++i) {
        if (i > 0) {
            if (lid)
                step_iota_linear(s, dt, eta);
            else
                step_linear_bl(s, dt, eta);
            s.time = i * dt;
        }
        samples.push_back(s);
        times.push_back(s.time);
        csv.row({s.time, bl_energy(s, eta), h1_cell_energy(s, eta),
                 identity_rhs_k1(s, eta), compatibility_defect(s, eta),
                 compatibility_drift_rate(s, eta).max_abs_coeff()});
    }
    csv.close();
    save_snapshot(s, dir + "/final.snap");

    json rep;
    rep["study"] = lid ? "iota-approx" : "linear-bl";
    rep["T"] = T;
    rep["dt"] = dt;
    double E1 = bl_energy(s, eta);
    rep["energy_drift_rel_per_unit_time"] =
        E0 > 0 ? std::abs(E1 - E0) / (E0 * T) : 0.0;
    SpectralField2D C1 = compatibility(s, eta);
    C1.raw() -= C0.raw();
    rep["compat_drift"] = C1.max_abs_coeff();
    if (lid) {
        SpectralField2D pi = solve_iota_pressure(s, eta);
        rep["final_pressure_l2"] = pi.l2_norm();
    }
    if (!samples.empty() && samples.size() >= 5) {
        EnergyIdentityReport er =
            energy_identity_report(samples, times, k_order, eta);
        rep["identity"] = json::object();
        rep["identity"]["k_order"] = k_order;
        rep["identity"]["sup_residual"] = er.sup_residual;
        rep["identity"]["growth_constant"] = er.growth_constant;
        rep["identity"]["degenerate"] = er.degenerate;
    }
    write_json(dir, "report.json", rep);
}

void study_iota_sweep(const Config& cfg, const std::string& dir) {
    GridSpec g0 = parse_grid(cfg);
    std::vector<double> L_list = cfg.get_list("sweep.L_list", {10.0, 20.0, 40.0});
    double T = cfg.get_double("physics.T", 1.0);
    if (L_list.size() < 2)
        throw ConfigError("iota-sweep: need at least two L_eta values");
    for (size_t i = 1; i < L_list.size(); ++i)
        if (std::abs(L_list[i] - 2.0 * L_list[i - 1]) > 1e-12 * L_list[i])
            throw ConfigError("iota-sweep: L_list must double at each entry");

    // common node spacing: nodes of a shorter domain coincide with the
    // leading nodes of every longer one
    const double L0 = L_list.front();
    const int n0 = g0.Neta;
    double dt = cfg.get_double("physics.dt", 0.0);
    if (dt <= 0.0) {
        GridSpec gl = g0;
        gl.L_eta = L_list.back();
        dt = auto_dt(gl);
    }
    int n_steps = std::max(1, int(std::ceil(T / dt - 1e-9)));
    dt = T / n_steps;

    std::vector<BLState> finals;
    std::vector<EtaOps> ops;
    for (double L : L_list) {
        GridSpec g = g0;
        g.L_eta = L;
        g.Neta = int(std::lround((n0 - 1) * L / L0)) + 1;
        g.validate();
        EtaOps eta(g);
        BLState s = bl_init(cfg, g);
        for (int i = 0; i < n_steps; ++i) {
            step_iota_linear(s, dt, eta);
            s.time = (i + 1) * dt;
        }
        finals.push_back(std::move(s));
        ops.emplace_back(g);
    }

    // restriction of the longer-domain solution to the shorter grid (nodes
    // coincide), L2 difference over the common domain
    auto diff_l2 = [&](const BLState& a, const BLState& b, const EtaOps& ea) {
        const int n = ea.n();
        const Eigen::VectorXd& w = ea.weights();
        double e = 0.0;
        for (int m = 0; m < a.box.n_modes(); ++m)
            e += w.dot(((a.vx.col(m) - b.vx.col(m).head(n)).cwiseAbs2() +
                        (a.vy.col(m) - b.vy.col(m).head(n)).cwiseAbs2() +
                        (a.theta.col(m) - b.theta.col(m).head(n)).cwiseAbs2())
                           .eval());
        return 2.0 * M_PI * std::sqrt(e);
    };

    std::vector<double> diffs, ratios;
    for (size_t i = 0; i + 1 < finals.size(); ++i)
        diffs.push_back(diff_l2(finals[i], finals[i + 1], ops[i]));
    for (size_t i = 0; i + 1 < diffs.size(); ++i)
        ratios.push_back(diffs[i + 1] > 0 ? diffs[i] / diffs[i + 1] : 0.0);

    CsvWriter csv(dir + "/sweep.csv", {"L_eta", "diff_to_next_L"});
    for (size_t i = 0; i < diffs.size(); ++i) csv.row({L_list[i], diffs[i]});
    csv.close();

    json rep;
    rep["study"] = "iota-sweep";
    rep["T"] = T;
    rep["dt"] = dt;
    rep["L_eta"] = L_list;
    rep["l2_diff_per_doubling"] = diffs;
    rep["shrink_factor_per_doubling"] = ratios;
    write_json(dir, "report.json", rep);
}

PicardOptions parse_picard(const Config& cfg) {
    PicardOptions opt;
    opt.norms = parse_norms(cfg, opt.norms);
    opt.C_d = cfg.get_double("norms.C_d", opt.C_d);
    opt.dt = cfg.get_double("physics.dt", opt.dt);
    opt.max_iters = cfg.get_int("picard.max_iters", opt.max_iters);
    return opt;
}

void study_picard(const Config& cfg, const std::string& dir, bool residuals) {
    GridSpec g = parse_grid(cfg);
    double T = cfg.get_double("physics.T", 0.1);
    double tol = cfg.get_double("picard.tol", 1e-10);
    PicardOptions opt = parse_picard(cfg);

    InitParams ip = parse_init(cfg);
    if (!cfg.has("init.recipe")) ip.recipe = "bl-poly-exp";
    if (!cfg.has("init.decay")) ip.decay = 1.5;
    BLState init = cfg.get_str("init.snapshot", "").empty()
                       ? make_bl_init(ip, g)
                       : load_bl_snapshot(cfg.get_str("init.snapshot", ""));
    FourierTransform2D ft(g);
    EtaOps eta(g);

    auto [traj, rep] = picard_fixed_point(init, BLForcing::none(), T, tol, ft,
                                          eta, opt);

    CsvWriter csv(dir + "/contraction.csv",
                  {"iterate", "distance", "l2_distance"});
    for (size_t i = 0; i < rep.distances.size(); ++i)
        csv.row({double(i + 1), rep.distances[i], rep.l2_distances[i]});
    csv.close();

    json j;
    j["study"] = residuals ? "nonlinear-bl" : "picard";
    j["T"] = T;
    j["tol"] = tol;
    j["iterates"] = rep.iterates;
    j["distances"] = rep.distances;
    j["ratios"] = rep.ratios;
    j["l2_distances"] = rep.l2_distances;
    j["final_residual"] = rep.final_residual;
    j["converged"] = rep.converged;

    if (residuals) {
        ResidualSeries rs = nonlinear_residual(traj, BLForcing::none(), ft, eta);
        CsvWriter rcsv(dir + "/residual.csv",
                       {"t", "v_residual", "theta_residual"});
        for (size_t i = 0; i < rs.times.size(); ++i)
            rcsv.row({rs.times[i], rs.v_residual[i], rs.theta_residual[i]});
        rcsv.close();
        j["nonlinear_residual_sup"] = rs.sup();
    }
    write_json(dir, "report.json", j);
    save_snapshot(traj.states.back(), dir + "/final.snap");
}

void study_norms(const Config& cfg, const std::string& dir) {
    GridSpec g = parse_grid(cfg);
    NormParams p = parse_norms(cfg, NormParams{});
    double C_d = cfg.get_double("norms.C_d", 1.0);
    double T = cfg.get_double("physics.T", 1.0);

    BLState s = bl_init(cfg, g);
    EtaOps eta(g);

    json j;
    j["study"] = "norms";
    j["params"] = {{"d", p.d}, {"r", p.r}, {"tau", p.tau}, {"M", p.M},
                   {"C_d", C_d}};
    std::vector<double> sm;
    for (int m = 0; m <= p.M; ++m) sm.push_back(semi_norm(s, eta, p, m));
    j["semi_norms"] = sm;
    NormValue x = x_norm(s, eta, p), y = y_norm(s, eta, p);
    j["x_norm"] = {{"value", x.value}, {"last_term", x.last_term},
                   {"truncation_warning", x.truncation_warning}};
    j["y_norm"] = {{"value", y.value}, {"last_term", y.last_term},
                   {"truncation_warning", y.truncation_warning}};

    TauSchedule sch = tau_schedule(p.tau, C_d, x.value, p.d, T,
                                   cfg.get_int("norms.ode_steps", 2048));
    CsvWriter csv(dir + "/tau.csv", {"t", "tau"});
    for (size_t i = 0; i < sch.times.size(); ++i)
        csv.row({sch.times[i], sch.samples[i]});
    csv.close();
    j["tau_schedule"] = {{"tau0", sch.tau0}, {"T_max", sch.T_max},
                         {"truncated", sch.truncated},
                         {"M_data", x.value}};
    write_json(dir, "report.json", j);
}

void study_inequalities(const Config& cfg, const std::string& dir) {
    int m_max = cfg.get_int("ineq.m_max", 200);
    double r = cfg.get_double("ineq.r", 2.0);

    json j;
    j["study"] = "inequalities";
    j["m_max"] = m_max;
    auto emit = [&](const InequalityScan& s) {
        return json{{"index", s.index}, {"r", s.r},     {"sup", s.sup},
                    {"arg_m", s.arg_m}, {"arg_j", s.arg_j},
                    {"plateau", s.plateau}};
    };
    json scans = json::array();
    if (r >= 2.0) {
        for (const auto& s : verify_inequalities(m_max, r)) scans.push_back(emit(s));
    } else {
        // only the first two are valid below r = 2
        scans.push_back(emit(scan_inequality(1, m_max, r)));
        scans.push_back(emit(scan_inequality(2, m_max, r)));
    }
    j["r"] = r;
    j["scans"] = scans;
    // the first two inequalities also hold at r = 1; always report them there
    json extra = json::array();
    extra.push_back(emit(scan_inequality(1, m_max, 1.0)));
    extra.push_back(emit(scan_inequality(2, m_max, 1.0)));
    j["scans_r1"] = extra;
    write_json(dir, "report.json", j);
}

}  // namespace

std::string resolve_output_dir(const Config& cfg) {
    std::string study = cfg.get_str("study", "run");
    fs::path dir = cfg.get_str("output.dir", study);
    if (dir.is_relative()) {
        if (const char* root = std::getenv("IWBL_OUTPUT_ROOT"))
            dir = fs::path(root) / dir;
    }
    return dir.string();
}

void run_study(const Config& cfg) {
    std::string study = cfg.require_str("study");
    std::string dir = resolve_output_dir(cfg);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " +
                          ec.message());

    Config resolved = cfg;
    resolved.set("output.dir", dir);
    write_manifest(dir, resolved);

    if (study == "linear-bulk")
        study_linear_bulk(cfg, dir);
    else if (study == "scaling-sweep")
        study_scaling_sweep(cfg, dir);
    else if (study == "linear-bl")
        study_linear_bl(cfg, dir, /*lid=*/false);
    else if (study == "iota-approx")
        study_linear_bl(cfg, dir, /*lid=*/true);
    else if (study == "iota-sweep")
        study_iota_sweep(cfg, dir);
    else if (study == "nonlinear-bl")
        study_picard(cfg, dir, /*residuals=*/true);
    else if (study == "picard")
        study_picard(cfg, dir, /*residuals=*/false);
    else if (study == "norms")
        study_norms(cfg, dir);
    else if (study == "inequalities")
        study_inequalities(cfg, dir);
    else
        throw ConfigError("unknown study: " + study);
}

}  // namespace iwbl

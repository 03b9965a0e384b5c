// atomtf command line: TF solves, spectra, Scott sweeps, energy
// decompositions, inequality checks and the energy sandwich.
//
// Exit codes: 0 success, 1 invariant violation, 2 configuration error,
// 3 numerical non-convergence.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "atomtf/bounds.hpp"
#include "atomtf/cache.hpp"
#include "atomtf/config.hpp"
#include "atomtf/corrections.hpp"
#include "atomtf/inequalities.hpp"
#include "atomtf/io.hpp"
#include "atomtf/model.hpp"
#include "atomtf/spectral.hpp"
#include "atomtf/tf.hpp"

namespace fs = std::filesystem;
using namespace atomtf;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::string cache_dir;
    int jobs = 1;
    double tolerance = 1e-9;
};

struct RunContext {
    Config cfg;
    Cache cache;
    fs::path out;
    int jobs = 1;
    double tolerance = 1e-9;
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();
};

RunContext make_context(const CommonArgs& a) {
    RunContext ctx;
    if (!a.config_path.empty()) ctx.cfg = Config::from_file(a.config_path);
    const char* env_cache = std::getenv("ATOMTF_CACHE");
    std::string cache_dir = a.cache_dir;
    if (cache_dir.empty() && env_cache) cache_dir = env_cache;
    if (cache_dir.empty()) cache_dir = (fs::path(a.out_dir) / "cache").string();
    fs::create_directories(cache_dir);
    ctx.cache = Cache(cache_dir);
    ctx.out = a.out_dir;
    fs::create_directories(ctx.out);
    ctx.jobs = a.jobs > 0 ? a.jobs : ctx.cfg.get_int("jobs", 1);
    ctx.tolerance = a.tolerance;
    return ctx;
}

void write_manifest(const RunContext& ctx, const std::string& command,
                    const std::vector<std::string>& outputs) {
    std::ostringstream m;
    m << "command: " << command << "\n";
    m << "config_digest: " << ctx.cfg.digest() << "\n";
    m << "jobs: " << ctx.jobs << "\n";
    for (const auto& o : outputs) m << "output: " << o << "\n";
    m << "cache_hits: " << ctx.cache.hits << "\n";
    m << "cache_misses: " << ctx.cache.misses << "\n";
    m << "cache_corrupt: " << ctx.cache.corrupt << "\n";
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - ctx.started)
                        .count();
    m << "elapsed_ms: " << ms << "\n";
    atomic_write(ctx.out / (command + ".manifest"), m.str());
}

ScottOptions scott_options(const RunContext& ctx) {
    ScottOptions so;
    so.level = ctx.cfg.get_int("scott.r_cut", 0) ? 1 : ctx.cfg.get_int("scott.L_max", 0) ? 1 : 1;
    so.level = 1;
    if (ctx.cfg.has("scott.L_max")) so.L_max = ctx.cfg.get_int("scott.L_max", 0);
    if (ctx.cfg.has("scott.momentum_nodes"))
        so.momentum_nodes = ctx.cfg.get_int("scott.momentum_nodes", 0);
    so.jobs = ctx.jobs;
    return so;
}

int cmd_tf(const RunContext& ctx) {
    NuclearConfiguration nc = ctx.cfg.nuclear();
    if (nc.nucleus_count() != 1)
        throw config_error("cmd tf solves the atomic case; provide a single Z");
    TFSolution sol = solve_tf_atom(nc.charge(0), nc.electrons(), nc.spin_q());
    atomic_write(ctx.out / "tf_solution.txt", tf_solution_to_text(sol));

    std::ostringstream rec;
    rec << "Z " << format_double(sol.Z) << "\nN " << format_double(sol.N) << "\nq " << sol.q
        << "\nnu " << format_double(sol.nu) << "\nE_TF " << format_double(sol.E_TF)
        << "\nE_functional " << format_double(tf_energy(sol)) << "\nE_dual "
        << format_double(tf_energy_dual(sol)) << "\n";
    atomic_write(ctx.out / "tf_energy.txt", rec.str());
    write_manifest(ctx, "tf", {"tf_solution.txt", "tf_energy.txt"});
    return 0;
}

int cmd_spectrum(const RunContext& ctx) {
    NuclearConfiguration nc = ctx.cfg.nuclear();
    const double Z = nc.charge(0);
    const double beta = nc.beta();
    const std::string kind_s = ctx.cfg.get("spectrum.kind", beta > 0.0 ? "chandrasekhar"
                                                                       : "nonrelativistic");
    const KineticKind kind = kind_s == "chandrasekhar" ? KineticKind::Chandrasekhar
                             : kind_s == "massless"    ? KineticKind::Massless
                                                       : KineticKind::NonRelativistic;
    if (kind == KineticKind::Chandrasekhar && Z * beta > kCriticalCoupling)
        throw config_error("supercritical Z*beta; construction refused");
    const int L = ctx.cfg.get_int("spectrum.L_max", 3);
    const double cut = ctx.cfg.get_double("spectrum.lambda_cut", -1e-4);

    CsvWriter csv({"l", "j", "eigenvalue", "degeneracy"});
    for (int l = 0; l <= L; ++l) {
        std::vector<double> ev;
        std::string key;
        {
            std::ostringstream k;
            k << "spectrum|" << kind_s << "|Z=" << format_double(Z)
              << "|beta=" << format_double(beta) << "|l=" << l << "|cut=" << format_double(cut);
            key = k.str();
        }
        if (auto rec = ctx.cache.get(key)) {
            ev = *rec;
        } else {
            if (kind == KineticKind::NonRelativistic) {
                TridiagonalChannel ch = build_radial_channel(
                    l, [&](double r) { return -Z / r; }, 1e-7, 400.0, 14000);
                solve_tridiagonal(ch, -2.0 * Z * Z * 10.0, cut, ev, nullptr);
            } else {
                RadialOperatorSpec spec;
                spec.kind = kind;
                spec.beta = beta;
                spec.channel = l;
                spec.coulomb_Z = Z;
                MomentumGrid mg = MomentumGrid::logarithmic(1e-4 * Z, 1e5 * Z, 900);
                MomentumChannel ch = build_momentum_channel(spec, mg);
                solve_momentum(ch, cut, ev, nullptr);
            }
            ctx.cache.put(key, ev);
        }
        for (std::size_t j = 0; j < ev.size(); ++j)
            csv.add_row({static_cast<double>(l), static_cast<double>(j), ev[j],
                         static_cast<double>(nc.spin_q() * (2 * l + 1))});
    }
    csv.write(ctx.out / "spectrum.csv");
    write_manifest(ctx, "spectrum", {"spectrum.csv"});
    return 0;
}

int cmd_scott(const RunContext& ctx) {
    NuclearConfiguration nc = ctx.cfg.nuclear();
    std::vector<double> ts = ctx.cfg.get_list("scott.t_values", {0.0, 0.1, 0.2, 0.4, 0.55});
    ScottOptions so = scott_options(ctx);
    CsvWriter csv({"t", "S", "error", "L_max", "r0"});
    for (double t : ts) {
        ScottEstimate est = scott_S(t, nc.spin_q(), so, &ctx.cache);
        csv.add_row({t, est.value, est.error, static_cast<double>(est.L_max), est.r0});
    }
    csv.write(ctx.out / "scott.csv");
    write_manifest(ctx, "scott", {"scott.csv"});
    return 0;
}

int cmd_decompose(const RunContext& ctx) {
    NuclearConfiguration base = ctx.cfg.nuclear();
    std::vector<double> zs = ctx.cfg.get_list("Z_sweep", {base.charge(0)});
    ScottOptions so = scott_options(ctx);
    CsvWriter csv({"Z", "N", "q", "beta", "E_TF", "scott", "dirac", "schwinger", "rct",
                   "total", "scott_error"});
    std::vector<std::string> outputs;
    for (double Z : zs) {
        NuclearConfiguration nc = NuclearConfiguration::atom(
            Z, base.spin_q(), base.beta(), ctx.cfg.has("N") ? base.electrons() : Z);
        EnergyDecomposition d = energy_decomposition(nc, so, &ctx.cache);
        const std::string name = "decomposition_Z" + format_double(Z) + ".json";
        atomic_write(ctx.out / name, decomposition_to_json(d));
        outputs.push_back(name);
        csv.add_row({d.Z, d.N, static_cast<double>(d.q), d.beta, d.E_TF, d.scott, d.dirac,
                     d.schwinger, d.rct, d.total(), d.scott_error});
    }
    csv.write(ctx.out / "decomposition.csv");
    outputs.push_back("decomposition.csv");
    write_manifest(ctx, "decompose", outputs);
    return 0;
}

int cmd_check(const RunContext& ctx) {
    CheckOptions copt;
    copt.q = ctx.cfg.get_int("q", 2);
    copt.grid_scale = ctx.cfg.get_double("check.grid_scale", 1.0);
    copt.jobs = ctx.jobs;
    std::vector<InequalityReport> reports;
    const double tol = 1e-9;
    bool ok = true;

    // (A-1) one-body over the potential corpus, fitted constant
    {
        std::vector<InequalityReport> batch;
        for (const auto& V : potential_corpus())
            for (double beta : {0.0, 1e-2, 0.0316227766016838}) {
                if (beta > 0.0 && V.family == "tf-potential" && V.Z > 5.0) continue;
                batch.push_back(check_daubechies(V, beta, copt.q, copt));
            }
        double C = 0.0;
        for (auto& r : batch) C = std::max(C, r.ratio);
        for (auto& r : batch) {
            r.rhs *= C;
            r.margin = r.rhs - r.lhs;
            r.instance += "|C=" + format_double(C);
            ok = ok && r.margin >= -tol * std::abs(r.rhs);
            reports.push_back(r);
        }
    }
    // (A-2) many-body on TF-filled Slater states
    for (double Z : {5.0, 10.0}) {
        TFSolution tf = solve_tf_atom(Z, Z, copt.q);
        OperatorOptions sopt;
        sopt.L_max = 8;
        sopt.nodes = static_cast<std::size_t>(6000 * copt.grid_scale);
        sopt.r_max = 80.0;
        sopt.jobs = ctx.jobs;
        std::vector<double> r;
        RadialGrid g = RadialGrid::logarithmic(1e-5, 60.0, 1200);
        SlaterState st = build_slater_state(
            KineticKind::NonRelativistic, 0.0,
            [&](double rr) { return std::max(tf.screened_potential(rr), 0.0); }, Z, copt.q,
            sopt, g.nodes());
        for (double beta : {0.0, 1e-2}) {
            InequalityReport rep = check_daubechies_density(st, beta, copt);
            ok = ok && rep.margin >= -tol * std::abs(rep.lhs);
            reports.push_back(rep);
        }
    }
    // (A-4) Lieb-Yau with the printed constant
    {
        RadialGrid g = RadialGrid::logarithmic(1e-5, 1.0, 1200);
        OperatorOptions sopt;
        sopt.L_max = 2;
        sopt.nodes = 4000;
        sopt.r_max = 1.0;
        SlaterState st;
        st.q = 1;
        st.r = g.nodes();
        Orbital o;
        o.l = 0;
        o.occupancy = 1.0;
        o.u.resize(g.size());
        double nrm = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            o.u[i] = g.node(i) * std::exp(-2.0 * g.node(i));
            nrm += o.u[i] * o.u[i] * g.weight(i) / (g.node(i) * g.node(i));
        }
        for (auto& x : o.u) x /= std::sqrt(nrm);
        o.eigenvalue = -0.5;
        st.orbitals.push_back(o);
        st.rho.assign(g.size(), 0.0);
        for (std::size_t i = 0; i < g.size(); ++i)
            st.rho[i] = o.u[i] * o.u[i] / (4.0 * kPi * g.node(i) * g.node(i));
        st.N = 1.0;
        auto theta = [](double) { return 1.0; };
        InequalityReport rep = check_lieb_yau(st, theta, 1.0, 1.0, copt);
        ok = ok && rep.margin >= -1e-6 * std::max(1.0, std::abs(rep.rhs));
        reports.push_back(rep);
    }
    // (A-5) critical hydrogen frontier at two s values
    for (double s : {0.0, 0.25}) {
        CriticalFrontier fr = check_critical_hydrogen(s, {0.5, 1.0, 2.0}, copt);
        InequalityReport rep;
        rep.name = "critical-hydrogen(A-5)";
        rep.instance = "s=" + format_double(s);
        rep.lhs = fr.B.empty() ? 0.0 : fr.B[1];
        rep.rhs = 1e6;  // feasibility: B must stay finite
        rep.margin = rep.rhs - rep.lhs;
        rep.grid = "A-scan";
        ok = ok && std::isfinite(rep.lhs) && rep.margin > 0.0;
        reports.push_back(rep);
    }
    // (A-6) HLS over densities, fitted constant
    {
        std::vector<InequalityReport> batch;
        RadialGrid g = RadialGrid::logarithmic(1e-6, 120.0, 2500);
        for (const auto& e : density_corpus()) {
            std::vector<double> f(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) f[i] = e.profile(g.node(i));
            InequalityReport rep = check_hls(g, f);
            rep.instance = e.id;
            batch.push_back(rep);
        }
        double C = 0.0;
        for (auto& r : batch) C = std::max(C, r.ratio);
        for (auto& r : batch) {
            r.rhs *= C;
            r.margin = r.rhs - r.lhs;
            r.instance += "|C=" + format_double(C);
            ok = ok && r.margin >= -tol * std::abs(r.rhs);
            reports.push_back(r);
        }
    }
    // (2-10)/(2-4) density bounds, fitted constants
    {
        std::vector<InequalityReport> batch;
        RadialGrid g = RadialGrid::logarithmic(1e-6, 120.0, 2500);
        for (const auto& e : density_corpus()) {
            if (e.family != "tf-density") continue;
            std::vector<double> f(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) f[i] = e.profile(g.node(i));
            batch.push_back(check_rho_bound(g, f, e.Z, e.beta));
        }
        double C = 0.0;
        for (auto& r : batch) C = std::max(C, r.ratio);
        for (auto& r : batch) {
            r.rhs *= C;
            r.margin = r.rhs - r.lhs;
            r.instance += "|C=" + format_double(C);
            ok = ok && r.margin >= -tol * std::abs(r.rhs);
            reports.push_back(r);
        }
    }

    atomic_write(ctx.out / "checks.csv", reports_to_csv(reports));
    atomic_write(ctx.out / "corpus_manifest.txt",
                 std::string(kCorpusVersion) + "\npotentials+densities as in inequalities.cpp\n");
    write_manifest(ctx, "check", {"checks.csv", "corpus_manifest.txt"});
    std::cout << (ok ? "all inequality checks passed\n" : "inequality check FAILED\n");
    return ok ? 0 : 1;
}

int cmd_bounds(const RunContext& ctx) {
    NuclearConfiguration base = ctx.cfg.nuclear();
    std::vector<double> zs = ctx.cfg.get_list("Z_sweep", {5.0, 10.0, 20.0});
    ScottOptions so = scott_options(ctx);
    CsvWriter csv({"Z", "N", "q", "beta", "epsilon", "lower", "upper", "E_TF", "scott",
                   "exchange", "dirac", "gap"});
    bool sandwich_ok = true;
    for (double Z : zs) {
        NuclearConfiguration nc = NuclearConfiguration::atom(Z, base.spin_q(), base.beta(), Z);
        TFSolution tf = solve_tf_atom(Z, Z, nc.spin_q());
        BoundOptions bopt;
        bopt.C0 = ctx.cfg.get_double("bounds.C0", 1.0);
        bopt.spectral.L_max = 20 + static_cast<int>(std::sqrt(Z) * 3);
        bopt.spectral.nodes = 8000;
        bopt.spectral.r_max = 60.0 * std::pow(Z, -1.0 / 3.0) + 40.0;
        bopt.spectral.jobs = ctx.jobs;

        BoundResult up = upper_bound(nc, tf.grid, tf.rho, tf.nu, bopt);
        const double eps0 = std::pow(Z, -2.0 / 3.0);
        std::vector<double> ladder = ctx.cfg.get_list(
            "bounds.epsilon_ladder", {0.25 * eps0, 0.5 * eps0, eps0, 2.0 * eps0, 4.0 * eps0});
        ScottEstimate s = scott_S(Z * base.beta(), nc.spin_q(), so, &ctx.cache);
        const double scott = nc.spin_q() * Z * Z * s.value;
        TFSolution tfd = tf;
        for (double eps : ladder) {
            BoundResult lo = lower_bound(nc, tf.grid, tf.rho, -tf.nu == 0.0 ? 0.0 : tf.nu,
                                         eps, bopt);
            sandwich_ok = sandwich_ok && lo.value <= up.value;
            csv.add_row({Z, tfd.N, static_cast<double>(nc.spin_q()), base.beta(), eps,
                         lo.value, up.value, tf.E_TF, scott, up.exchange,
                         dirac_term(tf), up.value - lo.value});
        }
    }
    csv.write(ctx.out / "bounds.csv");
    write_manifest(ctx, "bounds", {"bounds.csv"});
    std::cout << (sandwich_ok ? "sandwich holds on the sweep\n" : "sandwich VIOLATED\n");
    return sandwich_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relativistic Thomas-Fermi toolkit"};
    app.require_subcommand(1);
    CommonArgs args;
    app.add_option("--config", args.config_path, "key = value configuration file");
    app.add_option("--out", args.out_dir, "output directory");
    app.add_option("--jobs", args.jobs, "worker count for channel fan-out");
    app.add_option("--cache", args.cache_dir, "cache directory (default: <out>/cache)");
    app.add_option("--tolerance", args.tolerance, "generic tolerance override");

    auto* c_tf = app.add_subcommand("tf", "solve the atomic TF problem");
    auto* c_sp = app.add_subcommand("spectrum", "channel spectra of a radial operator");
    auto* c_sc = app.add_subcommand("scott", "Scott function ladder S(t)");
    auto* c_de = app.add_subcommand("decompose", "energy decomposition sweep");
    auto* c_ch = app.add_subcommand("check", "inequality corpus; exit 0 iff all pass");
    auto* c_bo = app.add_subcommand("bounds", "energy sandwich harness");

    CLI11_PARSE(app, argc, argv);

    try {
        RunContext ctx = make_context(args);
        if (c_tf->parsed()) return cmd_tf(ctx);
        if (c_sp->parsed()) return cmd_spectrum(ctx);
        if (c_sc->parsed()) return cmd_scott(ctx);
        if (c_de->parsed()) return cmd_decompose(ctx);
        if (c_ch->parsed()) return cmd_check(ctx);
        if (c_bo->parsed()) return cmd_bounds(ctx);
    } catch (const config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

// Command-line front end: every subcommand runs one reproducible computation
// and writes a CSV (with a provenance header) to --out or standard output.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "telegate/cv_gate_teleport.hpp"
#include "telegate/cv_teleport.hpp"
#include "telegate/dv_montecarlo.hpp"
#include "telegate/fock.hpp"
#include "telegate/io.hpp"
#include "telegate/nssd.hpp"
#include "telegate/numerics.hpp"

namespace {

using namespace telegate;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("TELEGATE_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("TELEGATE_SEED must be an unsigned integer");
        }
    }
    return 42;
}

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) s += " ";
        s += argv[i];
    }
    return s;
}

struct Output {
    std::string path;  // empty = stdout

    void write(const RunManifest& manifest, const std::string& body) const {
        if (path.empty()) {
            manifest.write(std::cout);
            std::cout << body;
        } else {
            std::ofstream os(path);
            if (!os) throw std::invalid_argument("cannot open output file: " + path);
            manifest.write(os);
            os << body;
        }
    }
};

ConditioningRadius radius_from_flag(double b) {
    return b <= 0.0 ? ConditioningRadius::infinite() : ConditioningRadius::finite(b);
}

void run_nss_verify(std::ostringstream& csv) {
    csv << "quantity,index,value,reference,abs_error\n";
    auto setup = klm_nss_setup();
    auto alphas = heralded_gate_coefficients(setup, 6);
    for (int n = 0; n <= 6; ++n) {
        double ref = nss_fock_coefficient(n);
        csv << "nss_alpha," << n << "," << alphas[n].real() << "," << ref << ","
            << std::abs(alphas[n] - ref) << "\n";
    }
    auto circuit = csign_circuit();
    for (int b1 : {0, 1})
        for (int b2 : {0, 1}) {
            Complex amp = circuit.basis_amplitude(b1, b2);
            double ref = (b1 == 1 && b2 == 1) ? -0.25 : 0.25;
            csv << "csign_amp_" << b1 << b2 << "," << (2 * b1 + b2) << "," << amp.real() << ","
                << ref << "," << std::abs(amp - ref) << "\n";
        }
}

void run_nssd_synth(std::ostringstream& csv, int d) {
    auto [pd, spec] = max_success_probability(d);
    (void)pd;
    csv << "key,value\n";
    std::istringstream text(spec.to_text());
    std::string line;
    while (std::getline(text, line)) {
        auto eq = line.find('=');
        csv << line.substr(0, eq) << "," << line.substr(eq + 1) << "\n";
    }
}

void run_dv_res_curve(std::ostringstream& csv, const std::string& route_name_,
                      const std::string& grid, int trials, std::uint64_t seed) {
    csv << "route,n_sources,success_prob,stderr,trials,master_seed\n";
    auto curve = simulate_res_state_curve(route_from_name(route_name_), parse_grid_int(grid),
                                          trials, seed);
    for (const auto& s : curve.samples)
        csv << route_name_ << "," << static_cast<long long>(s.x) << "," << s.success_prob << ","
            << s.stderr_ << "," << trials << "," << seed << "\n";
}

void run_grice_curve(std::ostringstream& csv, int n_level, const std::string& grid, int trials,
                     std::uint64_t seed) {
    csv << "N,n_sources,mean_p_bm,stderr,trials,master_seed\n";
    auto curve = simulate_grice_cost(n_level, parse_grid_int(grid), trials, seed);
    for (const auto& s : curve.samples)
        csv << n_level << "," << static_cast<long long>(s.x) << "," << s.success_prob << ","
            << s.stderr_ << "," << trials << "," << seed << "\n";
}

void run_cv_tradeoff(std::ostringstream& csv, double q, double g, const std::string& grid) {
    if (g < 0.0) g = q;
    csv << "state_n,q,g,B,success_prob,fidelity_raw,fidelity_cond,quality\n";
    for (int n : {0, 1, 2}) {
        auto state = InputState::fock(n, 3);
        for (double b : parse_grid(grid)) {
            auto rad = ConditioningRadius::finite(b);
            auto f = average_fidelity(state, q, g, rad);
            double p = success_probability(state, q, rad);
            csv << n << "," << q << "," << g << "," << b << "," << p << "," << f.raw << ","
                << f.conditional << "," << f.raw << "\n";
        }
    }
}

void run_cv_gain_scan(std::ostringstream& csv, double q, const std::string& grid) {
    csv << "state_n,q,g,fidelity\n";
    for (int n : {0, 1, 2}) {
        auto state = InputState::fock(n, 3);
        for (double g : parse_grid(grid)) {
            auto f = average_fidelity(state, q, g, ConditioningRadius::infinite());
            csv << n << "," << q << "," << g << "," << f.raw << "\n";
        }
    }
}

void run_cv_csign(std::ostringstream& csv, int d, int tail, const std::string& qgrid,
                  bool db_axis, double b_flag) {
    csv << "d,t,q,q_db,g_opt,F_worst\n";
    auto rad = radius_from_flag(b_flag);
    for (double x : parse_grid(qgrid)) {
        double q = db_axis ? db_to_q(x) : x;
        auto [g, f] = csign_best_gain(d, tail, q, rad);
        csv << d << "," << tail << "," << q << "," << q_to_db(q) << "," << g << "," << f << "\n";
    }
}

void run_cv_cost_table(std::ostringstream& csv, const std::string& pd_model, int tail,
                       int q_points) {
    if (pd_model != "inverse-square")
        throw std::invalid_argument("cv-cost-table: unknown --pd-model '" + pd_model + "'");
    csv << "d,F_max,p_cv,n_cv,n_cv_display\n";
    const std::vector<int> ds{2, 5, 10, 20, 50, 100};
    const std::vector<double> ps{0.1, 0.5, 0.75, 0.9, 0.99, 0.999};
    for (int d : ds) {
        auto scan = csign_gain_optimized_scan(d, tail, ConditioningRadius::infinite(), 0.5,
                                              0.999, q_points);
        for (double p : ps) {
            long long n = gate_bank_cost(d, p, 1.0 / (static_cast<double>(d) * d));
            csv << d << "," << scan.best.fidelity << "," << p << "," << n << ","
                << format_count(n) << "\n";
        }
    }
}

void run_cv_gopt(std::ostringstream& csv, int d, int tail, const std::string& qgrid,
                 double b_flag) {
    csv << "d,t,q,q_db,g_opt,F_worst\n";
    auto rad = radius_from_flag(b_flag);
    for (double q : parse_grid(qgrid)) {
        auto [g, f] = csign_best_gain(d, tail, q, rad);
        csv << d << "," << tail << "," << q << "," << q_to_db(q) << "," << g << "," << f << "\n";
    }
}

void run_dv_quality(std::ostringstream& csv, double p_res, const std::vector<double>& p_bms) {
    csv << "p_resource,p_bm,quality\n";
    for (double p_bm : p_bms)
        csv << p_res << "," << p_bm << "," << dv_quality(p_res, p_bm) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"teleportation-assisted optical CSIGN gate toolkit"};
    app.require_subcommand(1);

    Output out;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 0;
    app.add_option("--out", out.path, "output CSV path (default: stdout)");
    app.add_option("--seed", seed, "master seed for Monte-Carlo subcommands")
        ->each([&](const std::string&) { seed_given = true; });
    app.add_option("--threads", threads, "cap worker parallelism (0 = all cores)");

    auto* nss = app.add_subcommand("nss-verify", "NSS gate amplitudes and CSIGN sign pattern");

    int synth_d = 2;
    auto* synth = app.add_subcommand("nssd-synth", "synthesize a generalized NSS gate");
    synth->add_option("--d", synth_d, "gate order")->check(CLI::Range(2, 7))->required();

    std::string route = "knill", dv_grid = "100:3000:100";
    int dv_trials = 10000;
    auto* dvres = app.add_subcommand("dv-res-curve", "resource-state success vs source count");
    dvres->add_option("--route", route, "knill | cluster_std | cluster_adv");
    dvres->add_option("--trials", dv_trials, "trials per grid point")->check(CLI::PositiveNumber);
    dvres->add_option("--grid", dv_grid, "source grid start:stop:step");

    int grice_n = 6, grice_trials = 1000;
    std::string grice_grid = "2000:60000:2000";
    auto* grice = app.add_subcommand("grice-curve", "boosted-BM success vs source count");
    grice->add_option("--N", grice_n, "Bell-measurement level")->check(CLI::Range(1, 8));
    grice->add_option("--trials", grice_trials, "trials per grid point")
        ->check(CLI::PositiveNumber);
    grice->add_option("--grid", grice_grid, "source grid start:stop:step");

    double to_q = 0.9, to_g = -1.0;
    std::string to_grid = "0.25:5:0.25";
    auto* tradeoff = app.add_subcommand("cv-tradeoff", "fidelity/quality vs conditioning radius");
    tradeoff->add_option("--q", to_q, "squeezing parameter")->check(CLI::Range(0.0, 0.999999));
    tradeoff->add_option("--g", to_g, "gain (default: g = q)");
    tradeoff->add_option("--grid", to_grid, "radius grid start:stop:step");

    double gs_q = 0.9;
    std::string gs_grid = "0.5:1.2:0.01";
    auto* gainscan = app.add_subcommand("cv-gain-scan", "unconditioned fidelity vs gain");
    gainscan->add_option("--q", gs_q, "squeezing parameter")->check(CLI::Range(0.0, 0.999999));
    gainscan->add_option("--grid", gs_grid, "gain grid start:stop:step");

    int gopt_d = 50, gopt_t = 2;
    std::string gopt_grid = "0.5:0.98:0.01";
    double gopt_b = 0.0;
    auto* gopt = app.add_subcommand("cv-gopt", "optimal gain of the teleported gate vs q");
    gopt->add_option("--d", gopt_d, "gate order")->check(CLI::Range(2, 1000));
    gopt->add_option("--t", gopt_t, "resource truncation margin")->check(CLI::Range(0, 64));
    gopt->add_option("--qgrid", gopt_grid, "q grid start:stop:step");
    gopt->add_option("--B", gopt_b, "conditioning radius (<= 0: unconditioned)");

    int cs_d = 100, cs_t = 2;
    std::string cs_grid = "0.5:0.999:0.005";
    bool cs_db = false;
    double cs_b = 0.0;
    auto* csign = app.add_subcommand("cv-csign", "worst-case CSIGN fidelity vs squeezing");
    csign->add_option("--d", cs_d, "gate order")->check(CLI::Range(2, 1000));
    csign->add_option("--t", cs_t, "resource truncation margin")->check(CLI::Range(0, 64));
    csign->add_option("--qgrid", cs_grid, "q grid start:stop:step (dB when --db-axis)");
    csign->add_flag("--db-axis", cs_db, "interpret the grid as squeezing in dB");
    csign->add_option("--B", cs_b, "conditioning radius (<= 0: unconditioned)");

    std::string pd_model = "inverse-square";
    int ct_tail = 2, ct_qpoints = 400;
    auto* cost = app.add_subcommand("cv-cost-table", "source counts for target gate success");
    cost->add_option("--pd-model", pd_model, "gate success model (inverse-square)");
    cost->add_option("--t", ct_tail, "resource truncation margin")->check(CLI::Range(0, 64));
    cost->add_option("--qpoints", ct_qpoints, "q grid size for the fidelity column")
        ->check(CLI::PositiveNumber);

    double dq_pres = 1.0;
    std::vector<double> dq_pbms;
    auto* dvq = app.add_subcommand("dv-quality", "quality of the DV teleported gate");
    dvq->add_option("--p-res", dq_pres, "resource availability probability");
    dvq->add_option("--p-bm", dq_pbms, "Bell-measurement success probabilities");

    // allow the global --out/--seed/--threads to appear after the subcommand
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (!seed_given) seed = default_seed();
        if (dq_pbms.empty()) dq_pbms = {0.5, 0.75};

        Stopwatch watch;
        std::ostringstream csv;
        if (nss->parsed()) run_nss_verify(csv);
        if (synth->parsed()) run_nssd_synth(csv, synth_d);
        if (dvres->parsed()) run_dv_res_curve(csv, route, dv_grid, dv_trials, seed);
        if (grice->parsed()) run_grice_curve(csv, grice_n, grice_grid, grice_trials, seed);
        if (tradeoff->parsed()) run_cv_tradeoff(csv, to_q, to_g, to_grid);
        if (gainscan->parsed()) run_cv_gain_scan(csv, gs_q, gs_grid);
        if (gopt->parsed()) run_cv_gopt(csv, gopt_d, gopt_t, gopt_grid, gopt_b);
        if (csign->parsed()) run_cv_csign(csv, cs_d, cs_t, cs_grid, cs_db, cs_b);
        if (cost->parsed()) run_cv_cost_table(csv, pd_model, ct_tail, ct_qpoints);
        if (dvq->parsed()) run_dv_quality(csv, dq_pres, dq_pbms);

        RunManifest manifest;
        manifest.subcommand = app.get_subcommands().front()->get_name();
        manifest.flags = join_args(argc, argv);
        manifest.master_seed = seed;
        manifest.duration_seconds = watch.seconds();
        out.write(manifest, csv.str());
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

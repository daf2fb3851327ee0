// ebcsim: event-based vs. uniform-sampling link efficiency simulator.
//
//   ebcsim sweep  [--config FILE] [--seed N] [--realizations M] [--w-mean W ...]
//                 [--workers K] [--out-dir DIR]
//   ebcsim signal --w-mean W [--seed N] [--realization M] [--n-levels L]
//                 [--rate HZ] [--out-dir DIR]
//   ebcsim report --in-dir DIR [--out-dir DIR]

#include "ebc/experiment.hpp"
#include "ebc/signal_model.hpp"
#include "ebc/sod_sampling.hpp"
#include "ebc/sweep_io.hpp"
#include "ebc/text_format.hpp"

#include <CLI11.hpp>

#include <bit>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace fs = std::filesystem;

namespace {

void print_summary(const std::vector<ebc::ComparisonRow>& rows) {
    std::cout << "w_mean  target_nmse  status            p_rel     b_rel     b_rel_worst\n";
    for (const auto& r : rows) {
        std::cout << ebc::format_sig(r.w_mean, 4) << "     " << ebc::format_sig(r.target_nmse, 3) << "\t"
                  << ebc::to_string(r.status);
        if (r.status == ebc::RowStatus::Ok) {
            std::cout << "\t" << ebc::format_sig(r.p_rel, 4) << "\t"
                      << (r.b_rel ? ebc::format_sig(*r.b_rel, 4) : std::string("-")) << "\t"
                      << ebc::format_sig(r.b_rel_worst, 4);
        }
        std::cout << '\n';
    }
}

int run_sweep_cmd(const std::string& config_path, std::optional<std::uint64_t> seed, std::optional<int> realizations,
                  const std::vector<double>& w_means, std::optional<int> workers, const fs::path& out_dir) {
    ebc::SweepConfig cfg = config_path.empty() ? ebc::SweepConfig{} : ebc::load_sweep_config(config_path);
    if (seed) {
        cfg.master_seed = *seed;
    }
    if (realizations) {
        cfg.m_realizations = *realizations;
    }
    if (!w_means.empty()) {
        cfg.w_mean_list = w_means;
    }
    if (workers) {
        cfg.workers = *workers;
    }
    cfg.validate();

    const auto t0 = std::chrono::steady_clock::now();
    const auto result = ebc::run_sweep(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto rows = ebc::build_comparison(result.records, cfg);
    const auto written = ebc::emit_outputs(rows, result.records, cfg, out_dir);

    const auto& d = result.diagnostics;
    std::cerr << "sweep: " << d.signals << " signals, " << result.records.size() << " records in "
              << ebc::format_sig(secs, 3) << " s\n"
              << "  T_LB violations: " << d.t_lb_violations << " (min gap / T_LB = "
              << ebc::format_sig(d.min_gap_over_t_lb, 4) << ")\n"
              << "  slope-bound violations: " << d.bernstein_violations << " (max ratio "
              << ebc::format_sig(d.max_bernstein_ratio, 4) << ")\n";
    for (const auto& p : written) {
        std::cerr << "  wrote " << p.string() << '\n';
    }
    print_summary(rows);
    return 0;
}

int run_signal_cmd(double w_mean, std::uint64_t seed, std::uint64_t realization, int n_levels, double rate,
                   const fs::path& out_dir) {
    const auto profile = ebc::BandwidthProfile::with_mean(w_mean);
    const auto sod = ebc::SodConfig::with_levels(n_levels);
    const std::uint64_t sub = ebc::substream_seed(seed, std::bit_cast<std::uint64_t>(w_mean), realization);
    ebc::SynthesisOptions opts;
    opts.check_rate = ebc::detection_rate(ebc::SodConfig::with_levels(100).delta_l(), opts.s_max, profile.w_max);
    const auto real = ebc::synthesize_realization(profile, sub, opts);
    const auto trace = ebc::eval_trace(real.signal, rate);
    const auto stream = ebc::sod_encode(real.check_trace.values, opts.check_rate, sod);

    fs::create_directories(out_dir);
    const auto trace_path = out_dir / "trace.csv";
    std::ofstream tcsv(trace_path);
    if (!tcsv) {
        throw std::runtime_error("cannot open " + trace_path.string());
    }
    tcsv << "t,s,w\n";
    for (std::size_t k = 0; k < trace.values.size(); ++k) {
        const double t = static_cast<double>(k) / rate;
        tcsv << ebc::format_sig(t) << ',' << ebc::format_sig(trace.values[k]) << ','
             << ebc::format_sig(ebc::inst_bandwidth(profile, t)) << '\n';
    }
    const auto events_path = out_dir / "events.txt";
    std::ofstream ev(events_path);
    if (!ev) {
        throw std::runtime_error("cannot open " + events_path.string());
    }
    ebc::write_event_stream(ev, stream);

    std::cerr << "signal: w_mean=" << w_mean << " coefficients=" << real.signal.amplitudes().size()
              << " draws=" << real.signal.draws() << " events=" << stream.events.size();
    if (const auto gap = ebc::min_gap(stream)) {
        std::cerr << " min_gap=" << ebc::format_sig(*gap, 4) << " s (T_LB "
                  << ebc::format_sig(ebc::t_lb(sod, 4.0, profile.w_max), 4) << " s)";
    }
    std::cerr << "\n  wrote " << trace_path.string() << "\n  wrote " << events_path.string() << '\n';
    return 0;
}

int run_report_cmd(const fs::path& in_dir, fs::path out_dir) {
    if (out_dir.empty()) {
        out_dir = in_dir;
    }
    const auto cfg = ebc::load_manifest_config(in_dir / "run_manifest.json");
    std::ifstream is(in_dir / "records.csv");
    if (!is) {
        throw std::runtime_error("cannot read " + (in_dir / "records.csv").string());
    }
    const auto records = ebc::read_records_csv(is);
    const auto rows = ebc::build_comparison(records, cfg);
    for (const auto& p : ebc::emit_outputs(rows, records, cfg, out_dir)) {
        std::cerr << "  wrote " << p.string() << '\n';
    }
    print_summary(rows);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy and bandwidth efficiency of event-based vs. uniform-sampling sensor links"};
    app.require_subcommand(1);

    auto* sweep = app.add_subcommand("sweep", "Full Monte-Carlo sweep; writes fig4/5/6 CSVs and a manifest");
    std::string config_path;
    std::uint64_t seed = 1;
    int realizations = 0;
    std::vector<double> w_means;
    int workers = 0;
    std::string out_dir = "out";
    sweep->add_option("--config", config_path, "JSON or key=value sweep configuration")->check(CLI::ExistingFile);
    auto* seed_opt = sweep->add_option("--seed", seed, "Master seed");
    auto* real_opt = sweep->add_option("--realizations", realizations, "Realizations per profile")
                         ->check(CLI::PositiveNumber);
    sweep->add_option("--w-mean", w_means, "Mean instantaneous bandwidth(s) in Hz");
    auto* workers_opt = sweep->add_option("--workers", workers, "Worker threads (default: hardware concurrency)")
                            ->check(CLI::PositiveNumber);
    sweep->add_option("--out-dir", out_dir, "Output directory");

    auto* signal = app.add_subcommand("signal", "Dump one realization's dense trace and SOD events");
    double sig_w = 475.0;
    std::uint64_t sig_seed = 1;
    std::uint64_t sig_real = 0;
    int sig_levels = 10;
    double sig_rate = 16000.0;
    std::string sig_out = "out/signal";
    signal->add_option("--w-mean", sig_w, "Mean instantaneous bandwidth in Hz")->required();
    signal->add_option("--seed", sig_seed, "Master seed");
    signal->add_option("--realization", sig_real, "Realization index");
    signal->add_option("--n-levels", sig_levels, "SOD levels over [-4, 4]")->check(CLI::Range(2, 100000));
    signal->add_option("--rate", sig_rate, "Trace rate in Hz")->check(CLI::Range(16000.0, 1e8));
    signal->add_option("--out-dir", sig_out, "Output directory");

    auto* report = app.add_subcommand("report", "Rebuild comparison rows and CSVs from a saved sweep");
    std::string in_dir;
    std::string rep_out;
    report->add_option("--in-dir", in_dir, "Directory written by `sweep`")->required()->check(CLI::ExistingDirectory);
    report->add_option("--out-dir", rep_out, "Output directory (default: --in-dir)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sweep) {
            std::optional<int> w;
            if (*workers_opt) {
                w = workers;
            } else if (config_path.empty()) {
                w = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
            }
            return run_sweep_cmd(config_path, *seed_opt ? std::optional<std::uint64_t>(seed) : std::nullopt,
                                 *real_opt ? std::optional<int>(realizations) : std::nullopt, w_means, w, out_dir);
        }
        if (*signal) {
            return run_signal_cmd(sig_w, sig_seed, sig_real, sig_levels, sig_rate, sig_out);
        }
        if (*report) {
            return run_report_cmd(in_dir, rep_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

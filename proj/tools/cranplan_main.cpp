// cranplan CLI: model predictions, parameter fitting, figure-style
// sweeps, and scenario simulation for BBU pool capacity planning.
//
// Exit codes: 0 success, 1 I/O failure, 2 validation failure,
// 3 capacity alarm (simulate only).

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "cranplan/cost_models.hpp"
#include "cranplan/fitting.hpp"
#include "cranplan/lte.hpp"
#include "cranplan/scenario_io.hpp"
#include "cranplan/simulator.hpp"

namespace {

using namespace cranplan;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitAlarm = 3;

std::string human(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return buffer;
}

std::string full(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_file(out_path, text);
    }
}

PrbAllocation make_prb(int value, bool extended) {
    if (!extended) return PrbAllocation(value);
    if (value == 25 || value == 50 || value == 100) return PrbAllocation(value);
    return PrbAllocation::extended(value);
}

struct RateArgs {
    int prb = 0;
    int mcs = 0;
    bool extended = false;
    std::optional<double> epre_dbm;
};

int cmd_rate(const RateArgs& args) {
    const PrbAllocation prb = make_prb(args.prb, args.extended);
    const McsIndex mcs(args.mcs);
    const Modulation mod = modulation_of(mcs);
    std::cout << "prb: " << prb.value() << (prb.is_extended() ? " (extended)" : "") << "\n"
              << "mcs: " << mcs.value() << "\n"
              << "modulation: " << name(mod.scheme) << "\n"
              << "bits_per_symbol: " << mod.bits_per_symbol << "\n"
              << "symbol_rate_msym: " << human(symbol_rate_msym(prb)) << "\n"
              << "max_dl_rate_mbps: " << human(max_dl_rate_mbps(prb, mcs)) << "\n";
    if (args.epre_dbm) {
        const PowerDbm power = max_ue_power(PowerDbm(*args.epre_dbm), prb);
        std::cout << "max_ue_power_dbm: " << human(power.dbm()) << "\n";
    }
    return kExitOk;
}

struct PredictTimeArgs {
    std::string params_path;
    double f_ghz = 0.0;
    int prb = 0;
    int mcs = 0;
    bool extended = false;
};

int cmd_predict_time(const PredictTimeArgs& args) {
    const auto params = load_params(read_file(args.params_path));
    const CpuFrequency f(args.f_ghz);
    const double t =
        subframe_time_us(params, f, make_prb(args.prb, args.extended), McsIndex(args.mcs));
    std::cout << human(t) << " us [" << name(f.classification()) << "]\n";
    return kExitOk;
}

struct PredictCpuArgs {
    std::string params_path;
    std::optional<double> phi_mbps;
    std::optional<int> prb;
    std::optional<int> mcs;
    double activity = 1.0;
    bool extended = false;
};

int cmd_predict_cpu(const PredictCpuArgs& args) {
    CostModelParams params;  // defaults carry the fitted CPU line
    if (!args.params_path.empty()) params = load_params(read_file(args.params_path));

    double phi = 0.0;
    if (args.phi_mbps) {
        phi = *args.phi_mbps;
    } else if (args.prb && args.mcs) {
        if (!(args.activity >= 0.0 && args.activity <= 1.0))
            throw InvalidScenario("--activity must be in [0, 1]");
        phi = max_dl_rate_mbps(make_prb(*args.prb, args.extended), McsIndex(*args.mcs)) *
              args.activity;
    } else {
        throw SchemaViolation("predict-cpu needs either --phi or both --prb and --mcs");
    }
    const CpuPrediction prediction = cpu_percent(params, phi);
    std::cout << human(prediction.percent) << " % [" << (prediction.overload ? "OVERLOAD" : "OK")
              << "]\n";
    return kExitOk;
}

struct SweepArgs {
    std::string axis;
    std::string params_path;
    std::string out_path;
    std::string emit_mode = "model";
    std::optional<double> from, to, step;
    std::optional<double> f_ghz;
    std::optional<int> prb;
    std::optional<int> mcs;
    bool extended = false;
};

std::vector<double> sweep_points(double from, double to, double step) {
    if (!(step > 0.0)) throw SchemaViolation("--step must be > 0");
    if (to < from) throw SchemaViolation("--to must be >= --from");
    const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
    std::vector<double> points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) points.push_back(from + static_cast<double>(i) * step);
    return points;
}

int cmd_sweep(const SweepArgs& args) {
    std::string out;

    if (args.axis == "attenuation") {
        if (!args.prb) throw SchemaViolation("attenuation sweep needs --prb");
        LinkQualityTable table = LinkQualityTable::reference();
        if (!args.params_path.empty())
            table = load_model_document(read_file(args.params_path)).link_table;
        const PrbAllocation prb = make_prb(*args.prb, args.extended);
        out += "atten_db,prb,link_mbps,dropped\n";
        for (const double a :
             sweep_points(args.from.value_or(60.0), args.to.value_or(85.0), args.step.value_or(1.0))) {
            const auto mbps = link_throughput_mbps(table, a, prb);
            out += full(a) + ',' + std::to_string(prb.value()) + ',' +
                   (mbps ? full(*mbps) : std::string()) + ',' + (mbps ? "0" : "1") + '\n';
        }
        emit(out, args.out_path);
        return kExitOk;
    }

    if (args.params_path.empty())
        throw SchemaViolation("sweep over " + args.axis + " needs --params");
    const auto params = load_params(read_file(args.params_path));
    const bool fit_emit = args.emit_mode == "fit";

    struct Point {
        double f;
        int prb;
        int mcs;
    };
    std::vector<Point> points;
    std::string axis_column;
    if (args.axis == "frequency") {
        if (!args.prb || !args.mcs) throw SchemaViolation("frequency sweep needs --prb and --mcs");
        axis_column = "f_ghz";
        for (const double f : sweep_points(args.from.value_or(CpuFrequency::kValidatedLowGhz),
                                           args.to.value_or(CpuFrequency::kValidatedHighGhz),
                                           args.step.value_or(0.1)))
            points.push_back({f, *args.prb, *args.mcs});
    } else if (args.axis == "mcs") {
        if (!args.prb || !args.f_ghz) throw SchemaViolation("mcs sweep needs --prb and --f");
        axis_column = "mcs";
        const int from = static_cast<int>(args.from.value_or(McsIndex::kMin));
        const int to = static_cast<int>(args.to.value_or(McsIndex::kMax));
        for (int m = from; m <= to; ++m) points.push_back({*args.f_ghz, *args.prb, m});
    } else if (args.axis == "prb") {
        if (!args.mcs || !args.f_ghz) throw SchemaViolation("prb sweep needs --mcs and --f");
        axis_column = "prb";
        if (args.extended) {
            const int from = static_cast<int>(args.from.value_or(1));
            const int to = static_cast<int>(args.to.value_or(100));
            const int step = static_cast<int>(args.step.value_or(1));
            if (step < 1) throw SchemaViolation("--step must be >= 1 for prb sweeps");
            for (int p = from; p <= to; p += step) points.push_back({*args.f_ghz, p, *args.mcs});
        } else {
            for (const int p : PrbAllocation::kStrictValues)
                points.push_back({*args.f_ghz, p, *args.mcs});
        }
    } else {
        throw SchemaViolation("unknown sweep axis \"" + args.axis +
                              "\" (frequency, mcs, prb, attenuation)");
    }

    if (fit_emit) {
        std::vector<TimingRecord> records;
        records.reserve(points.size());
        for (const auto& p : points) {
            const PrbAllocation prb = make_prb(p.prb, args.extended);
            const McsIndex mcs(p.mcs);
            records.push_back(
                TimingRecord{p.f, prb.value(), mcs.value(),
                             subframe_time_us(params, CpuFrequency(p.f), prb, mcs)});
        }
        emit(timing_to_csv(records), args.out_path);
        return kExitOk;
    }

    out += axis_column +
           (args.axis == "frequency"
                ? std::string(",f_class,prb,mcs")
                : (args.axis == "mcs" ? std::string(",prb,f_ghz,f_class")
                                      : std::string(",mcs,f_ghz,f_class"))) +
           ",modulation,bits_per_symbol,rate_mbps,t_sub_us,cpu_pct,cpu_overload\n";
    for (const auto& p : points) {
        const PrbAllocation prb = make_prb(p.prb, args.extended);
        const McsIndex mcs(p.mcs);
        const CpuFrequency f(p.f);
        const Modulation mod = modulation_of(mcs);
        const double rate = max_dl_rate_mbps(prb, mcs);
        const double t_sub = subframe_time_us(params, f, prb, mcs);
        const CpuPrediction cpu = cpu_percent(params, rate);
        std::string row;
        if (args.axis == "frequency") {
            row = full(p.f) + ',' + std::string(name(f.classification())) + ',' +
                  std::to_string(prb.value()) + ',' + std::to_string(mcs.value());
        } else if (args.axis == "mcs") {
            row = std::to_string(mcs.value()) + ',' + std::to_string(prb.value()) + ',' +
                  full(p.f) + ',' + std::string(name(f.classification()));
        } else {
            row = std::to_string(prb.value()) + ',' + std::to_string(mcs.value()) + ',' +
                  full(p.f) + ',' + std::string(name(f.classification()));
        }
        out += row + ',' + std::string(name(mod.scheme)) + ',' +
               std::to_string(mod.bits_per_symbol) + ',' + full(rate) + ',' + full(t_sub) + ',' +
               full(cpu.percent) + ',' + (cpu.overload ? "1" : "0") + '\n';
    }
    emit(out, args.out_path);
    return kExitOk;
}

struct SimulateArgs {
    std::string scenario_path;
    std::string params_path;
    std::string out_prefix = "metrics";
    std::string format = "both";
    std::optional<std::uint64_t> seed;
    std::optional<double> alarm_miss_rate;
};

int cmd_simulate(const SimulateArgs& args) {
    Scenario scenario = load_scenario(read_file(args.scenario_path));
    if (!args.params_path.empty()) {
        const auto doc = load_model_document(read_file(args.params_path));
        scenario.params = doc.params;
        scenario.link_table = doc.link_table;
    }
    if (args.seed) scenario.seed = *args.seed;

    const SimMetrics metrics = run(scenario);
    if (args.format == "csv" || args.format == "both")
        write_file(args.out_prefix + ".csv", metrics_to_csv(metrics, scenario));
    if (args.format == "json" || args.format == "both")
        write_file(args.out_prefix + ".json", metrics_to_json(metrics, scenario));

    std::uint64_t offered = 0, missed = 0;
    for (const auto& rrh : metrics.per_rrh) {
        offered += rrh.offered_subframes;
        missed += rrh.missed;
    }
    bool overload = false;
    for (const auto& vm : scenario.vms) {
        if (vm.f.classification() == FreqClass::kMarginal)
            std::cerr << "warning: vm " << vm.id << " runs at " << human(vm.f.ghz())
                      << " GHz [MARGINAL]; the validated range is 2.8-3.5 GHz\n";
    }
    std::cout << "scenario_hash: " << scenario_hash(scenario) << "\n"
              << "seed: " << metrics.seed << "\n";
    for (const auto& vm : metrics.per_vm) {
        overload = overload || vm.overload;
        std::cout << "vm " << vm.id << ": util " << human(vm.accounted_util) << ", misses "
                  << vm.deadline_misses << ", predicted cpu " << human(vm.predicted_cpu_pct)
                  << " % [" << (vm.overload ? "OVERLOAD" : "OK") << "]\n";
    }
    const double miss_rate = offered == 0 ? 0.0
                                          : static_cast<double>(missed) /
                                                static_cast<double>(offered);
    std::cout << "total: " << offered << " subframes offered, " << missed << " missed ("
              << human(100.0 * miss_rate) << " %)\n";

    if (overload) {
        std::cerr << "alarm: predicted CPU overload\n";
        return kExitAlarm;
    }
    if (args.alarm_miss_rate && miss_rate > *args.alarm_miss_rate) {
        std::cerr << "alarm: miss rate " << human(miss_rate) << " exceeds threshold "
                  << human(*args.alarm_miss_rate) << "\n";
        return kExitAlarm;
    }
    return kExitOk;
}

struct FitArgs {
    std::string in_path;
    std::string out_path;
    std::string base_params_path;
    double fixed_const = kDefaultTimeConstUs;
    bool fit_const = false;
};

void print_fit_summary(const FitReport& report) {
    std::cerr << "records: " << report.n_records << "\n"
              << "residual_rms: " << human(report.residual_rms)
              << (report.kind == FitKind::kTiming ? " us" : " %") << "\n";
    for (const auto& flag : report.condition_flags) std::cerr << "flag: " << flag << "\n";
}

int cmd_fit_timing(const FitArgs& args) {
    const auto records = ingest_csv(read_file(args.in_path));
    const auto* timing = std::get_if<std::vector<TimingRecord>>(&records);
    if (!timing)
        throw UnknownHeader("fit-timing expects the f_ghz,prb,mcs,t_sub_us schema");
    std::optional<CostModelParams> base;
    if (!args.base_params_path.empty()) base = load_params(read_file(args.base_params_path));
    const auto report =
        fit_timing(*timing, args.fit_const ? std::nullopt : std::optional(args.fixed_const));
    print_fit_summary(report);
    emit(fit_report_to_json(report, base ? &*base : nullptr), args.out_path);
    return kExitOk;
}

int cmd_fit_cpu(const FitArgs& args) {
    const auto records = ingest_csv(read_file(args.in_path));
    const auto* util = std::get_if<std::vector<UtilizationRecord>>(&records);
    if (!util) throw UnknownHeader("fit-cpu expects the phi_mbps,cpu_pct schema");
    std::optional<CostModelParams> base;
    if (!args.base_params_path.empty()) base = load_params(read_file(args.base_params_path));
    const auto report = fit_cpu_line(*util);
    print_fit_summary(report);
    emit(fit_report_to_json(report, base ? &*base : nullptr), args.out_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BBU pool capacity planning: empirical cost models, calibration, and simulation"};
    app.require_subcommand(1);

    RateArgs rate_args;
    auto* rate = app.add_subcommand("rate", "Downlink resource arithmetic for a PRB/MCS point");
    rate->add_option("--prb", rate_args.prb, "PRB allocation")->required();
    rate->add_option("--mcs", rate_args.mcs, "MCS index 0-27")->required();
    rate->add_flag("--extended-prb", rate_args.extended, "allow PRB counts outside {25,50,100}");
    rate->add_option("--epre", rate_args.epre_dbm, "PDSCH EPRE in dBm, prints max UE power");

    PredictTimeArgs pt_args;
    auto* pt = app.add_subcommand("predict-time", "Subframe processing time at f/PRB/MCS");
    pt->add_option("--params", pt_args.params_path, "parameter document (JSON)")->required();
    pt->add_option("--f", pt_args.f_ghz, "CPU frequency in GHz")->required();
    pt->add_option("--prb", pt_args.prb, "PRB allocation")->required();
    pt->add_option("--mcs", pt_args.mcs, "MCS index")->required();
    pt->add_flag("--extended-prb", pt_args.extended, "allow PRB counts outside {25,50,100}");

    PredictCpuArgs pc_args;
    auto* pc = app.add_subcommand("predict-cpu", "CPU utilization for a downlink rate");
    pc->add_option("--params", pc_args.params_path, "parameter document (JSON)");
    pc->add_option("--phi", pc_args.phi_mbps, "downlink rate in Mbps");
    pc->add_option("--prb", pc_args.prb, "PRB allocation (with --mcs, derives phi)");
    pc->add_option("--mcs", pc_args.mcs, "MCS index");
    pc->add_option("--activity", pc_args.activity, "duty cycle scaling phi")->capture_default_str();
    pc->add_flag("--extended-prb", pc_args.extended, "allow PRB counts outside {25,50,100}");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "CSV sweep along one model axis");
    sweep->add_option("--axis", sweep_args.axis, "frequency | mcs | prb | attenuation")
        ->required();
    sweep->add_option("--params", sweep_args.params_path, "parameter document (JSON)");
    sweep->add_option("--from", sweep_args.from, "axis start");
    sweep->add_option("--to", sweep_args.to, "axis end (inclusive)");
    sweep->add_option("--step", sweep_args.step, "axis step");
    sweep->add_option("--f", sweep_args.f_ghz, "fixed CPU frequency in GHz");
    sweep->add_option("--prb", sweep_args.prb, "fixed PRB allocation");
    sweep->add_option("--mcs", sweep_args.mcs, "fixed MCS index");
    sweep->add_option("--out", sweep_args.out_path, "output file (default: stdout)");
    sweep->add_option("--emit", sweep_args.emit_mode, "model | fit (fit-input CSV)")
        ->capture_default_str()
        ->check(CLI::IsMember({"model", "fit"}));
    sweep->add_flag("--extended-prb", sweep_args.extended, "allow PRB counts outside {25,50,100}");

    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "Run a scenario and write metric files");
    sim->add_option("--scenario", sim_args.scenario_path, "scenario document (JSON)")->required();
    sim->add_option("--params", sim_args.params_path, "parameter document overriding the scenario's");
    sim->add_option("--seed", sim_args.seed, "override the scenario seed");
    sim->add_option("--out", sim_args.out_prefix, "output prefix for .csv/.json")->capture_default_str();
    sim->add_option("--format", sim_args.format, "csv | json | both")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json", "both"}));
    sim->add_option("--alarm-miss-rate", sim_args.alarm_miss_rate,
                    "exit 3 when the global miss rate exceeds this fraction");

    FitArgs ft_args;
    auto* ft = app.add_subcommand("fit-timing", "Calibrate alpha/beta from a timing CSV");
    ft->add_option("--in", ft_args.in_path, "timing CSV (f_ghz,prb,mcs,t_sub_us)")->required();
    ft->add_option("--out", ft_args.out_path, "output parameter document (default: stdout)");
    ft->add_option("--const", ft_args.fixed_const, "fixed additive constant in us")->capture_default_str();
    ft->add_flag("--fit-const", ft_args.fit_const,
                 "fit the constant too (gauge: smallest observed MCS anchors beta = 0)");
    ft->add_option("--base-params", ft_args.base_params_path,
                   "document supplying the quantities this fit does not touch");

    FitArgs fc_args;
    auto* fc = app.add_subcommand("fit-cpu", "Calibrate the CPU line from a utilization CSV");
    fc->add_option("--in", fc_args.in_path, "utilization CSV (phi_mbps,cpu_pct)")->required();
    fc->add_option("--out", fc_args.out_path, "output parameter document (default: stdout)");
    fc->add_option("--base-params", fc_args.base_params_path,
                   "document supplying the quantities this fit does not touch");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (rate->parsed()) return cmd_rate(rate_args);
        if (pt->parsed()) return cmd_predict_time(pt_args);
        if (pc->parsed()) return cmd_predict_cpu(pc_args);
        if (sweep->parsed()) return cmd_sweep(sweep_args);
        if (sim->parsed()) return cmd_simulate(sim_args);
        if (ft->parsed()) return cmd_fit_timing(ft_args);
        if (fc->parsed()) return cmd_fit_cpu(fc_args);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hlsguide/report.hpp"

namespace {

using namespace hlsguide;

struct Args {
    std::string kernel_path;
    std::string platform_path;
    std::string report_path;
    std::vector<std::string> overrides;
    double gate_warn = GuidelineOptions{}.gate_warn;
    double gate_reject = GuidelineOptions{}.gate_reject;
    bool fixed_timestamp = false;
    bool json_stdout = false;
};

void add_common(CLI::App* cmd, Args& a) {
    cmd->add_option("kernel", a.kernel_path, "Kernel descriptor (JSON)")->required();
    cmd->add_option("platform", a.platform_path, "Platform descriptor (JSON)")->required();
    cmd->add_option("--report", a.report_path, "Write the JSON report to this file");
    cmd->add_option("--gate-warn", a.gate_warn, "PCIe ratio at which to warn");
    cmd->add_option("--gate-reject", a.gate_reject, "PCIe ratio at which to reject");
    cmd->add_flag("--fixed-timestamp", a.fixed_timestamp,
                  "Use a constant timestamp so reports are reproducible");
    cmd->add_flag("--json", a.json_stdout, "Print the JSON report instead of the text summary");
}

void emit(const nlohmann::json& report, const Args& a) {
    if (!a.report_path.empty()) {
        std::ofstream out(a.report_path, std::ios::binary);
        if (!out) throw IoError(a.report_path + ": cannot open for writing");
        out << report.dump(2) << "\n";
        if (!out) throw IoError(a.report_path + ": write failed");
    }
    if (a.json_stdout) std::cout << report.dump(2) << "\n";
    else std::cout << report::render_text(report);
}

int gate_exit(const GateResult& g) { return g.decision == GateDecision::Reject ? 2 : 0; }

int cmd_run(const Args& a) {
    const KernelDescriptor k = validated(parse_kernel(a.kernel_path));
    const PlatformDescriptor p = validated(parse_platform(a.platform_path));
    GuidelineOptions gopts;
    gopts.gate_warn = a.gate_warn;
    gopts.gate_reject = a.gate_reject;
    const RefinementTrace trace = run_guideline(k, p, gopts);
    emit(report::run_report(k, p, trace, gopts, {a.fixed_timestamp}), a);
    if (trace.gate.decision == GateDecision::Warn)
        std::cerr << "warning: PCIe transfer alone costs " << trace.gate.ratio
                  << " of the CPU runtime\n";
    return gate_exit(trace.gate);
}

int cmd_whatif(const Args& a) {
    const KernelDescriptor k = validated(parse_kernel(a.kernel_path));
    const PlatformDescriptor p = validated(parse_platform(a.platform_path));
    const GateResult gate = pcie_gate(k, p, a.gate_warn, a.gate_reject);
    const DesignConfig cfg = report::apply_overrides(k, report::whatif_base(k, p), a.overrides);
    const Evaluation eval = whatif(k, p, cfg);
    emit(report::whatif_report(k, p, gate, eval, {a.fixed_timestamp}), a);
    return 0;
}

int cmd_sweep(const Args& a) {
    const KernelDescriptor k = validated(parse_kernel(a.kernel_path));
    const PlatformDescriptor p = validated(parse_platform(a.platform_path));
    GuidelineOptions gopts;
    gopts.gate_warn = a.gate_warn;
    gopts.gate_reject = a.gate_reject;
    gopts.stop_before_reorg = true;
    const RefinementTrace trace = run_guideline(k, p, gopts);
    DesignConfig base = trace.final.config;
    if (!base.caching.enabled()) base.caching = report::whatif_base(k, p).caching;
    const auto grid = sweep_grid(k, p, base);
    const Evaluation best = sweep_tradeoff(k, p, base);
    emit(report::sweep_report(k, p, trace.gate, base, grid, best, {a.fixed_timestamp}), a);
    return gate_exit(trace.gate);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Model an FPGA HLS accelerator and refine it step by step"};
    app.require_subcommand(1);
    Args args;

    auto* run = app.add_subcommand("run", "Apply the refinement guideline and report every step");
    add_common(run, args);
    auto* what = app.add_subcommand("whatif", "Evaluate one design configuration");
    add_common(what, args);
    what->add_option("--set", args.overrides, "Override a design field (key=value)");
    auto* sweep = app.add_subcommand("sweep", "Tabulate the buffer width and PE factor trade-off");
    add_common(sweep, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*run) return cmd_run(args);
        if (*what) return cmd_whatif(args);
        return cmd_sweep(args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

#include "hlsguide/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace hlsguide::report {

using nlohmann::json;

namespace {

std::string timestamp(const Options& opts) {
    if (opts.fixed_timestamp) return kFixedTimestamp;
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

json gate_json(const GateResult& g, double warn, double reject) {
    return {{"ratio", g.ratio},
            {"decision", to_string(g.decision)},
            {"warn", warn},
            {"reject", reject}};
}

json header(std::string_view command, const KernelDescriptor& k, const PlatformDescriptor& p,
            const Options& opts) {
    return {{"tool", "hlsguide"},
            {"command", command},
            {"generated_at", timestamp(opts)},
            {"kernel", to_json(k)},
            {"platform", to_json(p)}};
}

json assumptions() {
    return json::array({
        "DRAM read and write channels run full-duplex without contention",
        "the copy between wide and normal scratchpads is charged to compute",
        "end-to-end time is PCIe transfer plus device time; the two do not overlap",
    });
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& expected) {
    throw ContractError("--set " + key + "=" + value + ": expected " + expected);
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc() || ptr != end)
        bad_value(key, text, "a non-negative integer");
    return v;
}

std::uint32_t parse_u32(const std::string& key, const std::string& text) {
    const std::uint64_t v = parse_u64(key, text);
    if (v > 0xffffffffull) bad_value(key, text, "a 32-bit integer");
    return static_cast<std::uint32_t>(v);
}

bool parse_bool(const std::string& key, const std::string& text) {
    std::string t = text;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "true" || t == "1" || t == "on" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "off" || t == "no") return false;
    bad_value(key, text, "true or false");
}

Caching parse_caching(const KernelDescriptor& k, const std::string& text) {
    std::string t = text;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "none") return {};
    const auto colon = t.find(':');
    if (colon == std::string::npos) {
        const CachingKind kind = k.working_set_class == WorkingSetClass::LargeTileable
                                     ? CachingKind::Tile
                                     : CachingKind::Batch;
        return {kind, parse_u64("caching", t)};
    }
    const std::string kind = t.substr(0, colon);
    const Bytes bytes = parse_u64("caching", t.substr(colon + 1));
    if (kind == "batch") return {CachingKind::Batch, bytes};
    if (kind == "tile") return {CachingKind::Tile, bytes};
    bad_value("caching", text, "none, batch:BYTES, tile:BYTES or BYTES");
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string config_line(const json& c) {
    std::string caching = "none";
    const json& cj = c.at("caching");
    if (cj.is_object()) {
        for (const auto& [kind, bytes] : cj.items())
            caching = kind + ":" + std::to_string(bytes.get<std::uint64_t>());
    }
    return "caching=" + caching + " pipelined=" + (c.at("pipelined").get<bool>() ? "yes" : "no") +
           " pe=" + std::to_string(c.at("pe_factor").get<std::uint32_t>()) +
           " double_buffered=" + (c.at("double_buffered").get<bool>() ? "yes" : "no") +
           " width=" + std::to_string(c.at("buffer_width_bits").get<std::uint32_t>());
}

std::string breakdown_line(const json& b) {
    return "total " + fmt(b.at("total_s").get<double>()) + " s (pcie " +
           fmt(b.at("pcie_s").get<double>()) + ", dram " + fmt(b.at("dram_s").get<double>()) +
           ", compute " + fmt(b.at("compute_s").get<double>()) + "), speedup " +
           fmt(b.at("speedup").get<double>()) + "x, bottleneck " +
           b.at("dominant").get<std::string>();
}

std::string resources_line(const json& r) {
    return std::to_string(r.at("bram_blocks").get<std::uint64_t>()) + " BRAM blocks, " +
           std::to_string(r.at("compute_units").get<std::uint64_t>()) + " compute units" +
           (r.at("fits").get<bool>() ? "" : " (does not fit)");
}

}  // namespace

json run_report(const KernelDescriptor& k, const PlatformDescriptor& p,
                const RefinementTrace& trace, const GuidelineOptions& gopts, const Options& opts) {
    json r = header("run", k, p, opts);
    r["gate"] = gate_json(trace.gate, gopts.gate_warn, gopts.gate_reject);
    r["baseline"] = to_json(trace.baseline);
    json steps = json::array();
    for (const auto& s : trace.steps) steps.push_back(to_json(s));
    r["steps"] = std::move(steps);
    r["final"] = to_json(trace.final);
    r["templates"] = implied_templates(k, trace.final.config);
    r["assumptions"] = assumptions();
    return r;
}

json whatif_report(const KernelDescriptor& k, const PlatformDescriptor& p, const GateResult& gate,
                   const Evaluation& eval, const Options& opts) {
    json r = header("whatif", k, p, opts);
    r["gate"] = gate_json(gate, GuidelineOptions{}.gate_warn, GuidelineOptions{}.gate_reject);
    r["config"] = to_json(eval.config);
    r["breakdown"] = to_json(eval.breakdown);
    r["resources"] = to_json(eval.resources);
    r["templates"] = implied_templates(k, eval.config);
    r["assumptions"] = assumptions();
    return r;
}

json sweep_report(const KernelDescriptor& k, const PlatformDescriptor& p, const GateResult& gate,
                  const DesignConfig& base, const std::vector<Evaluation>& grid,
                  const Evaluation& best, const Options& opts) {
    json r = header("sweep", k, p, opts);
    r["gate"] = gate_json(gate, GuidelineOptions{}.gate_warn, GuidelineOptions{}.gate_reject);
    r["base"] = to_json(base);
    json rows = json::array();
    bool any_fits = false;
    for (const auto& e : grid) {
        any_fits = any_fits || e.resources.fits;
        rows.push_back({{"buffer_width_bits", e.config.buffer_width_bits},
                        {"pe_factor", e.config.pe_factor},
                        {"total_s", e.breakdown.total_s},
                        {"bram_blocks", e.resources.bram_blocks},
                        {"fits", e.resources.fits}});
    }
    r["rows"] = std::move(rows);
    r["best"] = to_json(best);
    r["improved"] = !(best.config == base);
    if (!any_fits) r["note"] = "no feasible wide design";
    r["assumptions"] = assumptions();
    return r;
}

DesignConfig whatif_base(const KernelDescriptor& k, const PlatformDescriptor& p) {
    DesignConfig cfg = naive_config(k);
    cfg.caching.kind = k.working_set_class == WorkingSetClass::LargeTileable ? CachingKind::Tile
                                                                            : CachingKind::Batch;
    cfg.caching.bytes = choose_caching_size(k, p);
    return cfg;
}

DesignConfig apply_overrides(const KernelDescriptor& k, DesignConfig cfg,
                             const std::vector<std::string>& assignments) {
    bool partition_set = false;
    for (const auto& a : assignments) {
        const auto eq = a.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ContractError("--set " + a + ": expected key=value with key one of " + kValidKeys);
        const std::string key = a.substr(0, eq);
        const std::string value = a.substr(eq + 1);
        if (key == "caching") {
            cfg.caching = parse_caching(k, value);
        } else if (key == "pipelined") {
            cfg.pipelined = parse_bool(key, value);
        } else if (key == "pe_factor") {
            cfg.pe_factor = parse_u32(key, value);
        } else if (key == "double_buffered") {
            cfg.double_buffered = parse_bool(key, value);
        } else if (key == "buffer_width_bits") {
            cfg.buffer_width_bits = parse_u32(key, value);
        } else if (key == "partition_factor") {
            cfg.partition_factor = parse_u32(key, value);
            partition_set = true;
        } else {
            throw ContractError("--set: unknown key '" + key + "'; valid keys: " + kValidKeys);
        }
    }
    if (!partition_set) cfg.partition_factor = cfg.pe_factor;
    return cfg;
}

std::string render_text(const json& r) {
    std::ostringstream out;
    const std::string command = r.value("command", "");
    out << "hlsguide " << command << ": " << r.at("kernel").at("name").get<std::string>() << "\n";
    const json& g = r.at("gate");
    out << "PCIe gate: ratio " << fmt(g.at("ratio").get<double>()) << " -> "
        << g.at("decision").get<std::string>() << "\n";

    if (command == "run") {
        out << "baseline: " << breakdown_line(r.at("baseline").at("breakdown")) << "\n";
        double previous = r.at("baseline").at("breakdown").at("total_s").get<double>();
        for (const auto& s : r.at("steps")) {
            const bool accepted = s.at("accepted").get<bool>();
            out << "  " << s.at("strategy").get<std::string>() << " [" << s.at("template").get<std::string>()
                << "]: " << (accepted ? "accepted" : "rejected");
            if (accepted) {
                const double total = s.at("breakdown").at("total_s").get<double>();
                out << ", " << fmt(previous / total) << "x";
                previous = total;
            }
            if (!s.at("reason").get<std::string>().empty())
                out << " (" << s.at("reason").get<std::string>() << ")";
            out << "\n    " << breakdown_line(s.at("breakdown")) << "\n";
        }
        const json& f = r.at("final");
        out << "final: " << config_line(f.at("config")) << "\n"
            << "  " << breakdown_line(f.at("breakdown")) << "\n"
            << "  " << resources_line(f.at("resources")) << "\n";
    } else if (command == "whatif") {
        out << "config: " << config_line(r.at("config")) << "\n"
            << "  " << breakdown_line(r.at("breakdown")) << "\n"
            << "  " << resources_line(r.at("resources")) << "\n";
    } else if (command == "sweep") {
        out << "width    pe  total_s       BRAM  fits\n";
        for (const auto& row : r.at("rows")) {
            char line[96];
            std::snprintf(line, sizeof line, "%5u %5u  %-12s %5llu  %s\n",
                          row.at("buffer_width_bits").get<unsigned>(),
                          row.at("pe_factor").get<unsigned>(),
                          fmt(row.at("total_s").get<double>()).c_str(),
                          static_cast<unsigned long long>(row.at("bram_blocks").get<std::uint64_t>()),
                          row.at("fits").get<bool>() ? "yes" : "no");
            out << line;
        }
        if (r.contains("note")) out << r.at("note").get<std::string>() << "\n";
        const json& b = r.at("best");
        out << "best: " << config_line(b.at("config")) << "\n"
            << "  " << breakdown_line(b.at("breakdown")) << "\n";
    }
    return out.str();
}

}  // namespace hlsguide::report

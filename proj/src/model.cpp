#include "hlsguide/model.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace hlsguide {

using nlohmann::json;

namespace {

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out = "validation failed:";
    for (const auto& l : lines) out += "\n  - " + l;
    return out;
}

bool non_negative_integer(const json& v) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

// Walks one JSON object, remembering which keys were consumed so leftovers
// can be reported as unknown fields.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw SchemaError(where(), "expected a JSON object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key) {
        if (!j_.contains(key)) throw SchemaError(field(key), "required field is missing");
        seen_.insert(key);
        return j_.at(key);
    }

    std::uint64_t u64(const std::string& key) {
        const json& v = raw(key);
        if (!non_negative_integer(v))
            throw SchemaError(field(key), "expected a non-negative integer");
        return v.get<std::uint64_t>();
    }

    std::uint32_t u32(const std::string& key) {
        std::uint64_t v = u64(key);
        if (v > 0xffffffffull) throw SchemaError(field(key), "value does not fit in 32 bits");
        return static_cast<std::uint32_t>(v);
    }

    double number(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number()) throw SchemaError(field(key), "expected a number");
        return v.get<double>();
    }

    bool boolean(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_boolean()) throw SchemaError(field(key), "expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string()) throw SchemaError(field(key), "expected a string");
        return v.get<std::string>();
    }

    template <typename T, typename Fn>
    void optional(const std::string& key, T& out, Fn read) {
        if (has(key)) out = (this->*read)(key);
    }

    void reject_unknown() const {
        for (const auto& [key, _] : j_.items()) {
            if (!seen_.count(key)) throw SchemaError(field(key), "unknown field");
        }
    }

    std::string field(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

private:
    std::string where() const { return path_.empty() ? "<root>" : path_; }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

template <typename E, std::size_t N>
E enum_from(const std::string& field, const std::string& text,
            const std::pair<E, std::string_view> (&table)[N]) {
    for (const auto& [value, name] : table) {
        if (name == text) return value;
    }
    std::string allowed;
    for (const auto& [value, name] : table) {
        if (!allowed.empty()) allowed += ", ";
        allowed += name;
    }
    throw SchemaError(field, "expected one of {" + allowed + "}, got \"" + text + "\"");
}

constexpr std::pair<Pipelineable, std::string_view> kPipelineable[] = {
    {Pipelineable::Immediate, "Immediate"},
    {Pipelineable::AfterPerfectization, "AfterPerfectization"},
    {Pipelineable::No, "No"}};

constexpr std::pair<TripScaling, std::string_view> kTripScaling[] = {
    {TripScaling::PerBatchElement, "PerBatchElement"},
    {TripScaling::PerJob, "PerJob"},
    {TripScaling::Fixed, "Fixed"}};

constexpr std::pair<WorkingSetClass, std::string_view> kWorkingSet[] = {
    {WorkingSetClass::SmallJob, "SmallJob"}, {WorkingSetClass::LargeTileable, "LargeTileable"}};

constexpr std::pair<ParallelismKind, std::string_view> kParallelism[] = {
    {ParallelismKind::Flat, "Flat"},
    {ParallelismKind::TreeReduce, "TreeReduce"},
    {ParallelismKind::ChainDependent, "ChainDependent"}};

constexpr std::pair<CachingKind, std::string_view> kCaching[] = {
    {CachingKind::None, "None"}, {CachingKind::Batch, "Batch"}, {CachingKind::Tile, "Tile"}};

constexpr std::pair<Component, std::string_view> kComponent[] = {
    {Component::Pcie, "Pcie"}, {Component::Dram, "Dram"}, {Component::Compute, "Compute"}};

template <typename E, std::size_t N>
std::string_view name_of(E v, const std::pair<E, std::string_view> (&table)[N]) {
    for (const auto& [value, name] : table) {
        if (value == v) return name;
    }
    return "?";
}

LoopBlock loop_from_json(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    LoopBlock l;
    l.trip_count = r.u64("trip_count");
    l.body_latency_cycles = r.u64("body_latency_cycles");
    l.min_ii = r.u64("min_ii");
    l.pipelineable = enum_from(r.field("pipelineable"), r.string("pipelineable"), kPipelineable);
    l.trip_scaling = enum_from(r.field("trip_scaling"), r.string("trip_scaling"), kTripScaling);
    r.reject_unknown();
    return l;
}

// "Flat" | "ChainDependent" | {"TreeReduce": {"layers": n}}
Parallelism parallelism_from_json(const json& j, const std::string& path) {
    if (j.is_string()) {
        auto kind = enum_from(path, j.get<std::string>(), kParallelism);
        if (kind == ParallelismKind::TreeReduce)
            throw SchemaError(path, "TreeReduce needs an object {\"TreeReduce\": {\"layers\": n}}");
        return {kind, 0};
    }
    ObjectReader outer(j, path);
    ObjectReader inner(outer.raw("TreeReduce"), path + ".TreeReduce");
    Parallelism p{ParallelismKind::TreeReduce, inner.u32("layers")};
    inner.reject_unknown();
    outer.reject_unknown();
    return p;
}

json parallelism_to_json(const Parallelism& p) {
    if (p.kind == ParallelismKind::TreeReduce) return {{"TreeReduce", {{"layers", p.layers}}}};
    return std::string(to_string(p.kind));
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> failures)
    : Error(join_lines(failures)), failures_(std::move(failures)) {}

bool is_power_of_two(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

DesignConfig naive_config(const KernelDescriptor& k) {
    DesignConfig c;
    c.buffer_width_bits = k.element_width_bits;
    return c;
}

std::vector<std::string> check_invariants(const PlatformDescriptor& p) {
    std::vector<std::string> f;
    if (!(p.clock_hz > 0)) f.push_back("clock_hz > 0");
    if (p.dram_init_latency_cycles == 0) f.push_back("dram_init_latency_cycles > 0");
    if (p.dram_bus_width_bits == 0) f.push_back("dram_bus_width_bits > 0");
    if (!is_power_of_two(p.dram_bus_width_bits) || p.dram_bus_width_bits > 512)
        f.push_back("dram_bus_width_bits is a power of two ≤ 512");
    if (!(p.pcie_bandwidth_bytes_per_s > 0)) f.push_back("pcie_bandwidth_bytes_per_s > 0");
    if (!(p.pcie_setup_s > 0)) f.push_back("pcie_setup_s > 0");
    if (p.bram_blocks_total == 0) f.push_back("bram_blocks_total > 0");
    if (p.bram_block_bits == 0) f.push_back("bram_block_bits > 0");
    if (p.bram_block_configs.empty()) f.push_back("bram_block_configs is non-empty");
    for (std::size_t i = 0; i < p.bram_block_configs.size(); ++i) {
        const auto& c = p.bram_block_configs[i];
        const std::string at = "bram_block_configs[" + std::to_string(i) + "]";
        if (c.width_bits == 0 || c.depth_entries == 0) f.push_back(at + " width and depth > 0");
        if (std::uint64_t{c.width_bits} * c.depth_entries > p.bram_block_bits)
            f.push_back(at + " width × depth ≤ bram_block_bits");
    }
    if (p.compute_units_total == 0) f.push_back("compute_units_total > 0");
    if (p.bram_usable_bits == 0) f.push_back("bram_usable_bits > 0");
    return f;
}

std::vector<std::string> check_invariants(const KernelDescriptor& k) {
    std::vector<std::string> f;
    if (k.name.empty()) f.push_back("name is non-empty");
    if (!(k.cpu_baseline_s > 0)) f.push_back("cpu_baseline_s > 0");
    if (k.job_count < 1) f.push_back("job_count ≥ 1");
    if (k.element_width_bits != 8 && k.element_width_bits != 16 && k.element_width_bits != 32 &&
        k.element_width_bits != 64)
        f.push_back("element_width_bits ∈ {8,16,32,64}");
    if (k.job_input_bytes == 0) f.push_back("job_input_bytes > 0");
    else if (k.element_width_bits % 8 == 0 && k.job_input_bytes % (k.element_width_bits / 8) != 0)
        f.push_back("job_input_bytes is a whole number of elements");
    if (k.loops.empty()) f.push_back("loops is non-empty");
    for (std::size_t i = 0; i < k.loops.size(); ++i) {
        const auto& l = k.loops[i];
        const std::string at = "loops[" + std::to_string(i) + "].";
        if (l.trip_count < 1) f.push_back(at + "trip_count ≥ 1");
        if (l.min_ii < 1) f.push_back(at + "min_ii ≥ 1");
        if (l.min_ii > l.body_latency_cycles) f.push_back(at + "min_ii ≤ body_latency_cycles");
    }
    if (k.parallelism.kind == ParallelismKind::TreeReduce &&
        (k.parallelism.layers < 1 || k.parallelism.layers > 40))
        f.push_back("parallelism.TreeReduce.layers ∈ [1, 40]");
    if (k.per_pe_compute_units == 0) f.push_back("per_pe_compute_units > 0");
    return f;
}

const PlatformDescriptor& validated(const PlatformDescriptor& p) {
    if (auto f = check_invariants(p); !f.empty()) throw ValidationError(std::move(f));
    return p;
}

const KernelDescriptor& validated(const KernelDescriptor& k) {
    if (auto f = check_invariants(k); !f.empty()) throw ValidationError(std::move(f));
    return k;
}

KernelDescriptor kernel_from_json(const json& j) {
    ObjectReader r(j, "");
    KernelDescriptor k;
    k.name = r.string("name");
    k.cpu_baseline_s = r.number("cpu_baseline_s");
    k.input_bytes = r.u64("input_bytes");
    k.output_bytes = r.u64("output_bytes");
    k.element_width_bits = r.u32("element_width_bits");
    k.job_count = r.u64("job_count");
    k.job_input_bytes = r.u64("job_input_bytes");
    k.job_output_bytes = r.u64("job_output_bytes");
    const json& loops = r.raw("loops");
    if (!loops.is_array()) throw SchemaError("loops", "expected an array");
    for (std::size_t i = 0; i < loops.size(); ++i)
        k.loops.push_back(loop_from_json(loops[i], "loops[" + std::to_string(i) + "]"));
    k.parallelism = parallelism_from_json(r.raw("parallelism"), "parallelism");
    r.optional("output_feeds_next_load", k.output_feeds_next_load, &ObjectReader::boolean);
    k.per_pe_compute_units = r.u64("per_pe_compute_units");
    r.optional("per_pe_extra_bram_bits", k.per_pe_extra_bram_bits, &ObjectReader::u64);
    k.working_set_class =
        enum_from("working_set_class", r.string("working_set_class"), kWorkingSet);
    r.reject_unknown();
    return validated(k);
}

PlatformDescriptor platform_from_json(const json& j) {
    ObjectReader r(j, "");
    PlatformDescriptor p;
    r.optional("clock_hz", p.clock_hz, &ObjectReader::number);
    r.optional("dram_init_latency_cycles", p.dram_init_latency_cycles, &ObjectReader::u64);
    r.optional("dram_bus_width_bits", p.dram_bus_width_bits, &ObjectReader::u32);
    r.optional("pcie_bandwidth_bytes_per_s", p.pcie_bandwidth_bytes_per_s, &ObjectReader::number);
    r.optional("pcie_setup_s", p.pcie_setup_s, &ObjectReader::number);
    r.optional("bram_blocks_total", p.bram_blocks_total, &ObjectReader::u32);
    r.optional("bram_block_bits", p.bram_block_bits, &ObjectReader::u32);
    if (r.has("bram_block_configs")) {
        const json& arr = r.raw("bram_block_configs");
        if (!arr.is_array()) throw SchemaError("bram_block_configs", "expected an array of [width, depth]");
        p.bram_block_configs.clear();
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const json& e = arr[i];
            const std::string at = "bram_block_configs[" + std::to_string(i) + "]";
            if (!e.is_array() || e.size() != 2 || !non_negative_integer(e[0]) || !non_negative_integer(e[1]))
                throw SchemaError(at, "expected [width_bits, depth_entries] of non-negative integers");
            p.bram_block_configs.push_back({e[0].get<std::uint32_t>(), e[1].get<std::uint32_t>()});
        }
    }
    r.optional("compute_units_total", p.compute_units_total, &ObjectReader::u64);
    r.optional("bram_usable_bits", p.bram_usable_bits, &ObjectReader::u64);
    r.reject_unknown();
    return validated(p);
}

DesignConfig config_from_json(const json& j) {
    ObjectReader r(j, "");
    DesignConfig c;
    const json& caching = r.raw("caching");
    if (caching.is_string()) {
        c.caching.kind = enum_from("caching", caching.get<std::string>(), kCaching);
        if (c.caching.kind != CachingKind::None)
            throw SchemaError("caching", "Batch/Tile need an object {\"Batch\": bytes}");
    } else {
        ObjectReader cr(caching, "caching");
        if (cr.has("Batch")) {
            c.caching = {CachingKind::Batch, cr.u64("Batch")};
        } else if (cr.has("Tile")) {
            c.caching = {CachingKind::Tile, cr.u64("Tile")};
        } else {
            throw SchemaError("caching", "expected \"None\", {\"Batch\": bytes} or {\"Tile\": bytes}");
        }
        cr.reject_unknown();
    }
    c.pipelined = r.boolean("pipelined");
    c.pe_factor = r.u32("pe_factor");
    c.double_buffered = r.boolean("double_buffered");
    c.buffer_width_bits = r.u32("buffer_width_bits");
    c.partition_factor = r.u32("partition_factor");
    r.reject_unknown();
    return c;
}

json to_json(const KernelDescriptor& k) {
    json loops = json::array();
    for (const auto& l : k.loops) {
        loops.push_back({{"trip_count", l.trip_count},
                         {"body_latency_cycles", l.body_latency_cycles},
                         {"min_ii", l.min_ii},
                         {"pipelineable", to_string(l.pipelineable)},
                         {"trip_scaling", to_string(l.trip_scaling)}});
    }
    return {{"name", k.name},
            {"cpu_baseline_s", k.cpu_baseline_s},
            {"input_bytes", k.input_bytes},
            {"output_bytes", k.output_bytes},
            {"element_width_bits", k.element_width_bits},
            {"job_count", k.job_count},
            {"job_input_bytes", k.job_input_bytes},
            {"job_output_bytes", k.job_output_bytes},
            {"loops", loops},
            {"parallelism", parallelism_to_json(k.parallelism)},
            {"output_feeds_next_load", k.output_feeds_next_load},
            {"per_pe_compute_units", k.per_pe_compute_units},
            {"per_pe_extra_bram_bits", k.per_pe_extra_bram_bits},
            {"working_set_class", to_string(k.working_set_class)}};
}

json to_json(const PlatformDescriptor& p) {
    json configs = json::array();
    for (const auto& c : p.bram_block_configs) configs.push_back({c.width_bits, c.depth_entries});
    return {{"clock_hz", p.clock_hz},
            {"dram_init_latency_cycles", p.dram_init_latency_cycles},
            {"dram_bus_width_bits", p.dram_bus_width_bits},
            {"pcie_bandwidth_bytes_per_s", p.pcie_bandwidth_bytes_per_s},
            {"pcie_setup_s", p.pcie_setup_s},
            {"bram_blocks_total", p.bram_blocks_total},
            {"bram_block_bits", p.bram_block_bits},
            {"bram_block_configs", configs},
            {"compute_units_total", p.compute_units_total},
            {"bram_usable_bits", p.bram_usable_bits}};
}

json to_json(const DesignConfig& c) {
    json caching = c.caching.enabled()
                       ? json{{std::string(to_string(c.caching.kind)), c.caching.bytes}}
                       : json("None");
    return {{"caching", caching},
            {"pipelined", c.pipelined},
            {"pe_factor", c.pe_factor},
            {"double_buffered", c.double_buffered},
            {"buffer_width_bits", c.buffer_width_bits},
            {"partition_factor", c.partition_factor}};
}

json to_json(const CostBreakdown& b) {
    return {{"pcie_s", b.pcie_s},
            {"dram_s", b.dram_s},
            {"compute_s", b.compute_s},
            {"total_s", b.total_s},
            {"speedup", b.speedup_vs_cpu},
            {"dominant", to_string(b.dominant)}};
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string() + ": no such file or not readable");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str(), nullptr, /*allow_exceptions=*/true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw SchemaError(path.string(), std::string("malformed JSON: ") + e.what());
    }
}

KernelDescriptor parse_kernel(const std::filesystem::path& path) {
    return kernel_from_json(read_json_file(path));
}

PlatformDescriptor parse_platform(const std::filesystem::path& path) {
    return platform_from_json(read_json_file(path));
}

std::string_view to_string(Pipelineable v) { return name_of(v, kPipelineable); }
std::string_view to_string(TripScaling v) { return name_of(v, kTripScaling); }
std::string_view to_string(ParallelismKind v) { return name_of(v, kParallelism); }
std::string_view to_string(WorkingSetClass v) { return name_of(v, kWorkingSet); }
std::string_view to_string(CachingKind v) { return name_of(v, kCaching); }
std::string_view to_string(Component v) { return name_of(v, kComponent); }

}  // namespace hlsguide

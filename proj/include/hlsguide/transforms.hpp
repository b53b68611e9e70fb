#pragma once

#include <string>
#include <vector>

#include "hlsguide/model.hpp"
#include "hlsguide/resource_model.hpp"

// The five refinement steps as checked rewrites of a DesignConfig. Transforms
// never touch kernel or platform descriptors; each returns a new config or
// throws ContractError / InapplicableError / ResourceError.
namespace hlsguide {

// Code-template identifiers a design step corresponds to.
namespace templates {
inline constexpr const char* kExplicitCaching = "explicit-caching";
inline constexpr const char* kLoopPipeline = "loop-pipeline";
inline constexpr const char* kPeUnrollPartition = "pe-unroll-partition";
inline constexpr const char* kBufferRotation = "triple-buffer-rotation";
inline constexpr const char* kWideScratchpad = "wide-scratchpad";
}  // namespace templates

struct TransformResult {
    DesignConfig config;
    std::string template_id;
    bool noop = false;
    std::vector<std::string> notes;
};

// What to do when a requested caching size is below the kernel's minimum.
enum class SizePolicy { Strict, ClampToMinimum };

// Smallest caching size that holds one job, or a whole reduction tree.
Bytes min_caching_bytes(const KernelDescriptor& k);

TransformResult apply_data_caching(const KernelDescriptor& k, const PlatformDescriptor& p,
                                   const DesignConfig& cfg, Bytes size_bytes,
                                   SizePolicy policy = SizePolicy::Strict);

TransformResult apply_pipelining(const KernelDescriptor& k, const DesignConfig& cfg);

TransformResult apply_pe_duplication(const KernelDescriptor& k, const PlatformDescriptor& p,
                                     const DesignConfig& cfg, std::uint32_t factor);

TransformResult apply_double_buffering(const KernelDescriptor& k, const DesignConfig& cfg);

TransformResult apply_scratchpad_reorg(const KernelDescriptor& k, const PlatformDescriptor& p,
                                       const DesignConfig& cfg, std::uint32_t width_bits);

// Checks a complete config against every transform precondition, throwing the
// same error the corresponding transform would.
void check_applicability(const KernelDescriptor& k, const PlatformDescriptor& p,
                         const DesignConfig& cfg);

// Templates a config implies, in guideline order.
std::vector<std::string> implied_templates(const KernelDescriptor& k, const DesignConfig& cfg);

// Reason strings shared by transforms and what-if evaluation.
inline constexpr const char* kChainDependentReason = "chain-dependent jobs";
inline constexpr const char* kFeedbackReason =
    "output of one iteration feeds the next iteration's load";

}  // namespace hlsguide

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "firetree/transforms.hpp"
#include "firetree/tree.hpp"

namespace firetree {

using Json = nlohmann::ordered_json;

// Malformed or inconsistent input files; the CLI maps this to exit code 2.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One instance file: a rooted tree plus either per-level firefighter budgets
// and vertex weights ("ff") or a budget model ("rmfc", uniform B per level or
// 2^l * B doubling levels).
struct InstanceDoc {
    std::string kind;                 // "ff" or "rmfc"
    RootedTree tree;
    std::vector<long long> weights;   // ff; entry 0 unused
    std::vector<long long> budgets;   // ff; entry for level l at index l, entry 0 unused
    std::string budget_model;         // rmfc; "uniform" or "pow2"

    FfInstance to_ff() const;
    RmfcInstance to_rmfc_pow2() const;
};

Json load_json(const std::string& path);
void save_json(const std::string& path, const Json& j);

InstanceDoc instance_from_json(const Json& j);
Json instance_to_json(const InstanceDoc& doc);

// Plan files: {"protected": [v, ...]} with an optional "budget" for rmfc plans.
struct PlanDoc {
    Plan plan;
    std::optional<long long> budget;
};

PlanDoc plan_from_json(const Json& j, const RootedTree* tree = nullptr);
Json plan_to_json(const Plan& plan, std::optional<long long> budget = std::nullopt);

Json trace_to_json(const TransformTrace& trace);
TransformTrace trace_from_json(const Json& j);

std::string transform_kind_name(TransformKind kind);

}  // namespace firetree

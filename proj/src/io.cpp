#include "firetree/io.hpp"

#include <fstream>
#include <map>

namespace firetree {

namespace {

long long get_int(const Json& j, const char* what) {
    if (!j.is_number_integer())
        throw ParseError(std::string(what) + " must be an integer");
    return j.get<long long>();
}

}  // namespace

FfInstance InstanceDoc::to_ff() const {
    if (kind != "ff") throw ParseError("instance is not an ff instance");
    FfInstance inst;
    inst.tree = tree;
    inst.weight = weights;
    inst.budget = budgets;
    return inst;
}

RmfcInstance InstanceDoc::to_rmfc_pow2() const {
    if (kind != "rmfc") throw ParseError("instance is not an rmfc instance");
    RmfcInstance inst;
    inst.tree = tree;
    inst.mult.assign(tree.max_depth + 1, 0);
    for (int l = 1; l <= tree.max_depth; ++l) inst.mult[l] = 1LL << l;
    return inst;
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("bad JSON in " + path + ": " + e.what());
    }
    return j;
}

void save_json(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << j.dump(2) << "\n";
}

InstanceDoc instance_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("instance must be a JSON object");
    InstanceDoc doc;
    if (!j.contains("kind") || !j["kind"].is_string())
        throw ParseError("instance needs a \"kind\" string");
    doc.kind = j["kind"].get<std::string>();
    if (doc.kind != "ff" && doc.kind != "rmfc")
        throw ParseError("kind must be \"ff\" or \"rmfc\"");

    long long n = get_int(j.value("n", Json()), "\"n\"");
    if (n < 1) throw ParseError("instance needs n >= 1");
    if (!j.contains("parents") || !j["parents"].is_array())
        throw ParseError("instance needs a \"parents\" array");
    const Json& pj = j["parents"];
    if (static_cast<long long>(pj.size()) != n)
        throw ParseError("\"parents\" length disagrees with n");
    std::vector<int> parent(n);
    if (!pj[0].is_null()) throw ParseError("parents[0] must be null (the root)");
    parent[0] = -1;
    for (long long v = 1; v < n; ++v) {
        long long p = get_int(pj[v], "parent entry");
        if (p < 0 || p >= n) throw ParseError("parent out of range at vertex " +
                                              std::to_string(v));
        parent[v] = static_cast<int>(p);
    }
    try {
        doc.tree = build_tree(parent);
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("bad tree: ") + e.what());
    }

    if (doc.kind == "ff") {
        if (!j.contains("weights") || !j["weights"].is_array())
            throw ParseError("ff instance needs a \"weights\" array");
        const Json& wj = j["weights"];
        if (static_cast<long long>(wj.size()) != n)
            throw ParseError("\"weights\" length disagrees with n");
        doc.weights.assign(n, 0);
        for (long long v = 1; v < n; ++v) {
            doc.weights[v] = get_int(wj[v], "weight entry");
            if (doc.weights[v] < 0) throw ParseError("weights must be nonnegative");
        }
        if (!j.contains("budgets") || !j["budgets"].is_array())
            throw ParseError("ff instance needs a \"budgets\" array");
        const Json& bj = j["budgets"];
        if (static_cast<long long>(bj.size()) != doc.tree.max_depth)
            throw ParseError("\"budgets\" must list one budget per level 1..depth");
        doc.budgets.assign(doc.tree.max_depth + 1, 0);
        for (int l = 1; l <= doc.tree.max_depth; ++l) {
            doc.budgets[l] = get_int(bj[l - 1], "budget entry");
            if (doc.budgets[l] < 0) throw ParseError("budgets must be nonnegative");
        }
    } else {
        doc.budget_model = j.value("budget_model", std::string("uniform"));
        if (doc.budget_model != "uniform" && doc.budget_model != "pow2")
            throw ParseError("budget_model must be \"uniform\" or \"pow2\"");
    }
    return doc;
}

Json instance_to_json(const InstanceDoc& doc) {
    Json j;
    j["kind"] = doc.kind;
    j["n"] = doc.tree.n;
    Json parents = Json::array();
    parents.push_back(nullptr);
    for (int v = 1; v < doc.tree.n; ++v) parents.push_back(doc.tree.parent[v]);
    j["parents"] = parents;
    if (doc.kind == "ff") {
        Json weights = Json::array();
        for (int v = 0; v < doc.tree.n; ++v)
            weights.push_back(v == 0 ? 0 : doc.weights[v]);
        j["weights"] = weights;
        Json budgets = Json::array();
        for (int l = 1; l <= doc.tree.max_depth; ++l) budgets.push_back(doc.budgets[l]);
        j["budgets"] = budgets;
    } else {
        j["budget_model"] = doc.budget_model.empty() ? "uniform" : doc.budget_model;
    }
    return j;
}

PlanDoc plan_from_json(const Json& j, const RootedTree* tree) {
    if (!j.is_object() || !j.contains("protected") || !j["protected"].is_array())
        throw ParseError("plan needs a \"protected\" array");
    PlanDoc doc;
    for (const Json& e : j["protected"]) {
        long long v = get_int(e, "protected entry");
        if (v == 0) throw ParseError("the root cannot be protected");
        if (v < 1) throw ParseError("protected vertex out of range");
        if (tree && v >= tree->n) throw ParseError("protected vertex out of range");
        doc.plan.vertices.push_back(static_cast<int>(v));
    }
    doc.plan.normalize();
    if (j.contains("budget")) doc.budget = get_int(j["budget"], "\"budget\"");
    return doc;
}

Json plan_to_json(const Plan& plan, std::optional<long long> budget) {
    Json j;
    j["protected"] = plan.vertices;
    if (budget) j["budget"] = *budget;
    return j;
}

std::string transform_kind_name(TransformKind kind) {
    switch (kind) {
        case TransformKind::UnitBudget: return "unit_budget";
        case TransformKind::UnitWeight: return "unit_weight";
        case TransformKind::ContractZeroLevels: return "contract_zero_levels";
        case TransformKind::CompressFf: return "compress_ff";
        case TransformKind::CompressRmfc: return "compress_rmfc";
        case TransformKind::Prune: return "prune";
    }
    throw std::logic_error("unknown transform kind");
}

namespace {

TransformKind transform_kind_from_name(const std::string& name) {
    static const std::map<std::string, TransformKind> table = {
        {"unit_budget", TransformKind::UnitBudget},
        {"unit_weight", TransformKind::UnitWeight},
        {"contract_zero_levels", TransformKind::ContractZeroLevels},
        {"compress_ff", TransformKind::CompressFf},
        {"compress_rmfc", TransformKind::CompressRmfc},
        {"prune", TransformKind::Prune},
    };
    auto it = table.find(name);
    if (it == table.end()) throw ParseError("unknown transform kind: " + name);
    return it->second;
}

}  // namespace

Json trace_to_json(const TransformTrace& trace) {
    Json j;
    j["transform"] = transform_kind_name(trace.kind);
    j["vertex_map"] = trace.vertex_map;
    Json params = Json::object();
    for (const auto& [k, v] : trace.params) params[k] = v;
    j["params"] = params;
    return j;
}

TransformTrace trace_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("transform") || !j["transform"].is_string())
        throw ParseError("trace needs a \"transform\" string");
    TransformTrace trace;
    trace.kind = transform_kind_from_name(j["transform"].get<std::string>());
    if (!j.contains("vertex_map") || !j["vertex_map"].is_array())
        throw ParseError("trace needs a \"vertex_map\" array");
    for (const Json& e : j["vertex_map"]) {
        long long v = get_int(e, "vertex_map entry");
        trace.vertex_map.push_back(static_cast<int>(v));
    }
    if (j.contains("params")) {
        if (!j["params"].is_object()) throw ParseError("trace params must be an object");
        for (const auto& [k, v] : j["params"].items()) {
            if (!v.is_string()) throw ParseError("trace params must be strings");
            trace.params[k] = v.get<std::string>();
        }
    }
    return trace;
}

}  // namespace firetree

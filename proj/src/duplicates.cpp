#include "decomp/duplicates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace decomp::split {

namespace {

using ddg::Ddg;
using ddg::DdgNode;
using ddg::NodeKind;
using lang::BinOp;
using lang::CallExpr;
using lang::Comparison;
using lang::Expr;
using lang::NumLit;
using lang::StrLit;
using lang::VarRef;

struct Binding {
    int producer;
    std::string var;
    bool operator<(const Binding& other) const {
        return std::tie(producer, var) < std::tie(other.producer, other.var);
    }
    bool operator==(const Binding& other) const {
        return producer == other.producer && var == other.var;
    }
};

// Serialized tree shape with leaves abstracted to first-occurrence indices;
// literals stay concrete.
struct TreeKey {
    std::string key;
    std::vector<Binding> leaf_order;  // distinct leaves in first-occurrence order
    int operations = 0;
};

void build_key(const Expr& expr, const DdgNode& node, TreeKey& out, std::map<Binding, int>& seen) {
    if (expr.is<NumLit>()) {
        const auto& num = expr.as<NumLit>();
        out.key += "n" + std::to_string(num.value) + (num.is_int ? "i" : "f") + ";";
        return;
    }
    if (expr.is<StrLit>()) {
        out.key += "s" + expr.as<StrLit>().value + ";";
        return;
    }
    if (expr.is<VarRef>()) {
        const ddg::ReadBinding* read = node.binding_of(expr.as<VarRef>().name);
        Binding b{read ? read->producer : -1, read ? read->value : expr.as<VarRef>().name};
        auto it = seen.find(b);
        int index;
        if (it == seen.end()) {
            index = static_cast<int>(seen.size());
            seen[b] = index;
            out.leaf_order.push_back(b);
        } else {
            index = it->second;
        }
        out.key += "v" + std::to_string(index) + ";";
        return;
    }
    if (expr.is<lang::BinaryOp>()) {
        const auto& bin = expr.as<lang::BinaryOp>();
        ++out.operations;
        out.key += "(b" + std::string(lang::bin_op_text(bin.op));
        for (const auto& o : bin.operands) build_key(o, node, out, seen);
        out.key += ")";
        return;
    }
    if (expr.is<Comparison>()) {
        const auto& cmp = expr.as<Comparison>();
        ++out.operations;
        out.key += "(c" + std::string(lang::cmp_op_text(cmp.op));
        for (const auto& o : cmp.operands) build_key(o, node, out, seen);
        out.key += ")";
        return;
    }
    const auto& call = expr.as<CallExpr>();
    ++out.operations;
    out.key += "(f" + call.callee;
    for (const auto& a : call.args) build_key(a, node, out, seen);
    out.key += ")";
}

TreeKey key_of(const Expr& expr, const DdgNode& node) {
    TreeKey out;
    std::map<Binding, int> seen;
    build_key(expr, node, out, seen);
    return out;
}

struct Entry {
    int node;
    bool goal;
    TreeKey full;
    // Root-literal strip, when the tree is `lit * X`, `X * lit`, `X / lit`
    // or `X // lit`.
    bool strippable = false;
    TreeKey stripped;
    MemberFit fit;
};

std::optional<std::pair<const Expr*, MemberFit>> strip_root(const Expr& expr) {
    if (!expr.is<lang::BinaryOp>()) return std::nullopt;
    const auto& bin = expr.as<lang::BinaryOp>();
    const Expr& lhs = bin.operands[0];
    const Expr& rhs = bin.operands[1];
    MemberFit fit;
    fit.stripped = true;
    fit.root_op = bin.op;
    if (bin.op == BinOp::Mul) {
        if (lhs.is<NumLit>() && !rhs.is<NumLit>()) {
            fit.literal = lhs.as<NumLit>().value;
            fit.literal_lexeme = lhs.as<NumLit>().lexeme;
            return std::make_pair(&rhs, fit);
        }
        if (rhs.is<NumLit>() && !lhs.is<NumLit>()) {
            fit.literal = rhs.as<NumLit>().value;
            fit.literal_lexeme = rhs.as<NumLit>().lexeme;
            return std::make_pair(&lhs, fit);
        }
    } else if (bin.op == BinOp::Div || bin.op == BinOp::FloorDiv) {
        if (rhs.is<NumLit>() && rhs.as<NumLit>().value != 0) {
            fit.literal = rhs.as<NumLit>().value;
            fit.literal_lexeme = rhs.as<NumLit>().lexeme;
            return std::make_pair(&lhs, fit);
        }
    }
    return std::nullopt;
}

}  // namespace

std::vector<DuplicateGroup> find_duplicates(const ddg::Ddg& graph) {
    std::vector<Entry> entries;
    for (const auto& node : graph.nodes) {
        if (node.kind == NodeKind::Computation && node.expr && !node.block) {
            if (node.expr->is<VarRef>() || node.expr->is<NumLit>() || node.expr->is<StrLit>()) {
                continue;  // copies and bare literals never group
            }
            Entry e;
            e.node = node.id;
            e.goal = false;
            e.full = key_of(*node.expr, node);
            e.fit.node = node.id;
            if (auto stripped = strip_root(*node.expr)) {
                TreeKey inner = key_of(*stripped->first, node);
                if (inner.operations >= 1) {
                    e.strippable = true;
                    e.stripped = std::move(inner);
                    e.fit = stripped->second;
                    e.fit.node = node.id;
                }
            }
            entries.push_back(std::move(e));
        } else if (node.kind == NodeKind::Goal && !node.is_phantom_goal()) {
            Expr virtual_call{CallExpr{"print", node.goal_args}, node.span};
            Entry e;
            e.node = node.id;
            e.goal = true;
            e.full = key_of(virtual_call, node);
            e.full.operations -= 1;  // the print wrapper itself is not structure
            e.fit.node = node.id;
            entries.push_back(std::move(e));
        }
    }

    // Bucket by key. Constant-factor members join the bucket of their
    // stripped tree.
    struct Bucket {
        std::vector<const Entry*> plain;
        std::vector<const Entry*> stripped;
        bool goal = false;
    };
    std::map<std::string, Bucket> buckets;
    std::map<std::string, int> tree_ops;
    std::map<std::string, std::vector<std::vector<Binding>>> leaf_seqs;
    for (const auto& e : entries) {
        std::string tag = (e.goal ? "g|" : "c|") + e.full.key;
        buckets[tag].plain.push_back(&e);
        buckets[tag].goal = e.goal;
        tree_ops[tag] = e.full.operations;
        leaf_seqs[tag].push_back(e.full.leaf_order);
        if (e.strippable) {
            std::string stag = "c|" + e.stripped.key;
            buckets[stag].stripped.push_back(&e);
            if (!tree_ops.count(stag)) tree_ops[stag] = e.stripped.operations;
        }
    }

    std::vector<DuplicateGroup> groups;
    std::set<int> grouped;
    // Deterministic order: by smallest member id.
    std::vector<std::pair<int, std::string>> order;
    for (const auto& [tag, bucket] : buckets) {
        int min_id = std::numeric_limits<int>::max();
        for (const auto* e : bucket.plain) min_id = std::min(min_id, e->node);
        for (const auto* e : bucket.stripped) min_id = std::min(min_id, e->node);
        order.emplace_back(min_id, tag);
    }
    std::sort(order.begin(), order.end());

    for (const auto& [min_id, tag] : order) {
        const Bucket& bucket = buckets[tag];
        size_t total = bucket.plain.size() + bucket.stripped.size();
        if (total < 2) continue;

        bool has_stripped = !bucket.stripped.empty();
        if (!has_stripped) {
            // Pure alpha group: differing leaves need real structure, while
            // strictly identical statements may group at any size.
            bool identical = true;
            const auto& seqs = leaf_seqs[tag];
            for (size_t i = 1; i < seqs.size(); ++i) {
                if (!(seqs[i] == seqs[0])) identical = false;
            }
            if (!identical && tree_ops[tag] < 1) continue;
        } else {
            if (tree_ops[tag] < 1) continue;
            if (bucket.goal) continue;  // factor relations only make sense for values
        }

        DuplicateGroup group;
        group.goals = bucket.goal;
        group.constant_factor = has_stripped;
        std::vector<MemberFit> fits;
        for (const auto* e : bucket.plain) {
            MemberFit fit;
            fit.node = e->node;
            fits.push_back(fit);
        }
        for (const auto* e : bucket.stripped) fits.push_back(e->fit);
        std::sort(fits.begin(), fits.end(),
                  [](const MemberFit& a, const MemberFit& b) { return a.node < b.node; });

        bool overlap = false;
        for (const auto& fit : fits) {
            if (grouped.count(fit.node)) overlap = true;
        }
        if (overlap) continue;

        double max_scale = 0, min_scale = 1e300;
        for (const auto& fit : fits) {
            double scale = 1.0;
            if (fit.stripped) {
                scale = fit.root_op == BinOp::Mul ? fit.literal : 1.0 / fit.literal;
            }
            max_scale = std::max(max_scale, std::fabs(scale));
            min_scale = std::min(min_scale, std::fabs(scale));
        }
        group.factor = min_scale > 0 ? max_scale / min_scale : 1.0;
        for (const auto& fit : fits) {
            group.nodes.push_back(fit.node);
            grouped.insert(fit.node);
        }
        group.fits = std::move(fits);
        groups.push_back(std::move(group));
    }
    return groups;
}

}  // namespace decomp::split

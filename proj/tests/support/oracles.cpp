#include "support/oracles.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

#include "decomp/parser.hpp"
#include "decomp/pretty.hpp"
#include "decomp/rewrite.hpp"

namespace testsupport {

using namespace decomp;
using lang::Expr;
using lang::Stmt;

namespace {

void reads_of_expr(const Expr& expr, std::set<std::string>& out) {
    if (expr.is<lang::VarRef>()) {
        out.insert(expr.as<lang::VarRef>().name);
    } else if (expr.is<lang::BinaryOp>()) {
        for (const auto& o : expr.as<lang::BinaryOp>().operands) reads_of_expr(o, out);
    } else if (expr.is<lang::Comparison>()) {
        for (const auto& o : expr.as<lang::Comparison>().operands) reads_of_expr(o, out);
    } else if (expr.is<lang::CallExpr>()) {
        for (const auto& a : expr.as<lang::CallExpr>().args) reads_of_expr(a, out);
    }
}

}  // namespace

std::set<std::string> brute_force_reads(const Stmt& stmt) {
    std::set<std::string> out;
    if (stmt.is<lang::AssignStmt>()) {
        for (const auto& v : stmt.as<lang::AssignStmt>().values) reads_of_expr(v, out);
    } else if (stmt.is<lang::ExprStmt>()) {
        reads_of_expr(stmt.as<lang::ExprStmt>().expr, out);
    } else if (stmt.is<lang::ReturnStmt>()) {
        for (const auto& v : stmt.as<lang::ReturnStmt>().values) reads_of_expr(v, out);
    } else {
        const auto& block = stmt.as<lang::CompoundStmt>();
        out = block.used_vars;
    }
    return out;
}

// --- structural DAG equality oracle ----------------------------------------

namespace {

struct StructuralComparer {
    const ddg::Ddg& a;
    const ddg::Ddg& b;
    std::map<int, int> input_ordinal_a;
    std::map<int, int> input_ordinal_b;
    std::map<std::pair<std::string, std::string>, bool> memo;  // (a-key, b-key) -> equal

    StructuralComparer(const ddg::Ddg& ga, const ddg::Ddg& gb) : a(ga), b(gb) {
        int i = 0;
        for (const auto& n : a.nodes) {
            if (n.kind == ddg::NodeKind::Source && n.origin == ddg::SourceOrigin::Input) {
                input_ordinal_a[n.id] = i++;
            }
        }
        i = 0;
        for (const auto& n : b.nodes) {
            if (n.kind == ddg::NodeKind::Source && n.origin == ddg::SourceOrigin::Input) {
                input_ordinal_b[n.id] = i++;
            }
        }
    }

    static std::string value_key(int node, const std::string& var) {
        return std::to_string(node) + ":" + var;
    }

    bool values_equal(int na, const std::string& va, int nb, const std::string& vb) {
        auto key = std::make_pair(value_key(na, va), value_key(nb, vb));
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        memo[key] = true;  // provisional: DAGs are acyclic, cycles impossible
        bool result = values_equal_uncached(na, va, nb, vb);
        memo[key] = result;
        return result;
    }

    bool values_equal_uncached(int na, const std::string& va, int nb, const std::string& vb) {
        const auto& node_a = a.node(na);
        const auto& node_b = b.node(nb);
        bool a_input = node_a.kind == ddg::NodeKind::Source &&
                       node_a.origin == ddg::SourceOrigin::Input;
        bool b_input = node_b.kind == ddg::NodeKind::Source &&
                       node_b.origin == ddg::SourceOrigin::Input;
        if (a_input || b_input) {
            return a_input && b_input && input_ordinal_a.at(na) == input_ordinal_b.at(nb);
        }
        bool a_block = node_a.block.has_value();
        bool b_block = node_b.block.has_value();

        // Copy chains and named constants unfold transparently on either side.
        if (!a_block && node_a.expr) {
            if (node_a.expr->is<lang::VarRef>()) {
                const auto& name = node_a.expr->as<lang::VarRef>().name;
                return values_equal(node_a.producer_of(name), name, nb, vb);
            }
        }
        if (!b_block && node_b.expr) {
            if (node_b.expr->is<lang::VarRef>()) {
                const auto& name = node_b.expr->as<lang::VarRef>().name;
                return values_equal(na, va, node_b.producer_of(name), name);
            }
        }
        if (a_block != b_block) return false;
        if (a_block) {
            if (!blocks_equal(node_a, node_b)) return false;
            // Same output slot (first-write order).
            auto slot = [](const ddg::DdgNode& n, const std::string& v) {
                auto at = std::find(n.outputs.begin(), n.outputs.end(), v);
                return std::distance(n.outputs.begin(), at);
            };
            return slot(node_a, va) == slot(node_b, vb);
        }
        return exprs_equal(*node_a.expr, node_a, *node_b.expr, node_b);
    }

    bool exprs_equal(const Expr& ea, const ddg::DdgNode& na, const Expr& eb,
                     const ddg::DdgNode& nb) {
        // Variables unfold first: a literal may sit behind a named constant.
        if (ea.is<lang::VarRef>() || eb.is<lang::VarRef>()) {
            // Unfold the variable on the side that has it.
            if (ea.is<lang::VarRef>()) {
                const auto* read = na.binding_of(ea.as<lang::VarRef>().name);
                const auto& pa = a.node(read->producer);
                if (!pa.block && pa.expr && pa.kind != ddg::NodeKind::Source) {
                    return exprs_equal(*pa.expr, pa, eb, nb);
                }
                if (pa.kind == ddg::NodeKind::Source &&
                    pa.origin == ddg::SourceOrigin::Constant) {
                    return exprs_equal(*pa.expr, pa, eb, nb);
                }
                // input or block output: the other side must resolve to the
                // same value.
                if (!eb.is<lang::VarRef>()) return false;
                const auto* read_b = nb.binding_of(eb.as<lang::VarRef>().name);
                return values_equal(read->producer, read->value, read_b->producer, read_b->value);
            }
            const auto* read_b = nb.binding_of(eb.as<lang::VarRef>().name);
            const auto& pb = b.node(read_b->producer);
            if (!pb.block && pb.expr && pb.kind != ddg::NodeKind::Source) {
                return exprs_equal(ea, na, *pb.expr, pb);
            }
            if (pb.kind == ddg::NodeKind::Source && pb.origin == ddg::SourceOrigin::Constant) {
                return exprs_equal(ea, na, *pb.expr, pb);
            }
            return false;  // ea is not a VarRef here
        }
        if (ea.is<lang::NumLit>() || eb.is<lang::NumLit>()) {
            if (!ea.is<lang::NumLit>() || !eb.is<lang::NumLit>()) return false;
            return ea.as<lang::NumLit>().value == eb.as<lang::NumLit>().value &&
                   ea.as<lang::NumLit>().is_int == eb.as<lang::NumLit>().is_int;
        }
        if (ea.is<lang::StrLit>() || eb.is<lang::StrLit>()) {
            if (!ea.is<lang::StrLit>() || !eb.is<lang::StrLit>()) return false;
            return ea.as<lang::StrLit>().value == eb.as<lang::StrLit>().value;
        }
        if (ea.is<lang::BinaryOp>()) {
            if (!eb.is<lang::BinaryOp>()) return false;
            const auto& ba = ea.as<lang::BinaryOp>();
            const auto& bb = eb.as<lang::BinaryOp>();
            if (ba.op != bb.op) return false;
            return exprs_equal(ba.operands[0], na, bb.operands[0], nb) &&
                   exprs_equal(ba.operands[1], na, bb.operands[1], nb);
        }
        if (ea.is<lang::Comparison>()) {
            if (!eb.is<lang::Comparison>()) return false;
            const auto& ca = ea.as<lang::Comparison>();
            const auto& cb = eb.as<lang::Comparison>();
            if (ca.op != cb.op) return false;
            return exprs_equal(ca.operands[0], na, cb.operands[0], nb) &&
                   exprs_equal(ca.operands[1], na, cb.operands[1], nb);
        }
        if (!ea.is<lang::CallExpr>() || !eb.is<lang::CallExpr>()) return false;
        const auto& fa = ea.as<lang::CallExpr>();
        const auto& fb = eb.as<lang::CallExpr>();
        if (fa.callee != fb.callee || fa.args.size() != fb.args.size()) return false;
        for (size_t i = 0; i < fa.args.size(); ++i) {
            if (!exprs_equal(fa.args[i], na, fb.args[i], nb)) return false;
        }
        return true;
    }

    bool blocks_equal(const ddg::DdgNode& na, const ddg::DdgNode& nb) {
        // Rename-invariant body comparison via pretty-printing with
        // positional variable abstraction.
        auto abstract = [](const ddg::DdgNode& n, const ddg::Ddg&) {
            lang::CompoundStmt block = *n.block;
            std::map<std::string, std::string> names;
            lang::Stmt wrapped{block, {}};
            lang::rename_variables(wrapped, [&](const std::string& v) {
                auto it = names.find(v);
                if (it != names.end()) return it->second;
                std::string slot = "v" + std::to_string(names.size());
                names[v] = slot;
                return slot;
            });
            return lang::print_statement(wrapped, 0);
        };
        if (abstract(na, a) != abstract(nb, b)) return false;
        // External inputs must match pairwise by structural slot.
        if (na.reads.size() != nb.reads.size()) return false;
        // Align reads by first occurrence inside the abstracted body: both
        // summaries are std::set-ordered over names, so align by sorted
        // abstraction slots instead.
        auto slots = [](const ddg::DdgNode& n) {
            lang::CompoundStmt block = *n.block;
            std::map<std::string, int> order;
            lang::Stmt wrapped{block, {}};
            lang::rename_variables(wrapped, [&](const std::string& v) {
                if (!order.count(v)) {
                    int idx = static_cast<int>(order.size());
                    order[v] = idx;
                }
                return v;
            });
            std::vector<std::pair<int, std::pair<std::string, int>>> out;
            for (const auto& read : n.reads) {
                out.push_back({order.count(read.name) ? order[read.name] : -1,
                               {read.value, read.producer}});
            }
            std::sort(out.begin(), out.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
            return out;
        };
        auto sa = slots(na);
        auto sb = slots(nb);
        for (size_t i = 0; i < sa.size(); ++i) {
            if (sa[i].first != sb[i].first) return false;
            if (!values_equal(sa[i].second.second, sa[i].second.first, sb[i].second.second,
                              sb[i].second.first)) {
                return false;
            }
        }
        return true;
    }

    bool goals_equal(int ga, int gb) {
        const auto& node_a = a.node(ga);
        const auto& node_b = b.node(gb);
        if (node_a.is_phantom_goal() != node_b.is_phantom_goal()) return false;
        if (node_a.is_phantom_goal()) {
            return blocks_equal(a.node(node_a.block_goal_of), b.node(node_b.block_goal_of));
        }
        if (node_a.goal_args.size() != node_b.goal_args.size()) return false;
        for (size_t i = 0; i < node_a.goal_args.size(); ++i) {
            if (!exprs_equal(node_a.goal_args[i], node_a, node_b.goal_args[i], node_b)) {
                return false;
            }
        }
        return true;
    }
};

}  // namespace

bool goals_structurally_equal(const ddg::Ddg& a, const ddg::Ddg& b) {
    if (a.goal_order.size() != b.goal_order.size()) return false;
    // Multiset match: greedy bipartite matching is enough at corpus sizes.
    StructuralComparer comparer(a, b);
    std::vector<int> unmatched(b.goal_order.begin(), b.goal_order.end());
    for (int ga : a.goal_order) {
        bool matched = false;
        for (auto it = unmatched.begin(); it != unmatched.end(); ++it) {
            if (comparer.goals_equal(ga, *it)) {
                unmatched.erase(it);
                matched = true;
                break;
            }
        }
        if (!matched) return false;
    }
    return true;
}

std::vector<std::set<int>> reachable_goals(const ddg::Ddg& graph) {
    std::vector<std::set<int>> out(graph.nodes.size());
    std::set<int> goals(graph.goal_order.begin(), graph.goal_order.end());
    // Reverse topological accumulation; node ids are topologically ordered.
    for (size_t i = graph.nodes.size(); i-- > 0;) {
        int id = static_cast<int>(i);
        if (goals.count(id)) out[i].insert(id);
        for (int succ : graph.succs[i]) {
            out[i].insert(out[static_cast<size_t>(succ)].begin(),
                          out[static_cast<size_t>(succ)].end());
        }
    }
    return out;
}

// --- DOT checker -------------------------------------------------------------

namespace {

struct DotScanner {
    const std::string& text;
    size_t pos = 0;

    explicit DotScanner(const std::string& t) : text(t) {}

    void skip_space() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eat(const std::string& word) {
        skip_space();
        if (text.compare(pos, word.size(), word) == 0) {
            pos += word.size();
            return true;
        }
        return false;
    }
    bool eat_identifier() {
        skip_space();
        size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' ||
                text[pos] == '.')) {
            ++pos;
        }
        return pos > start;
    }
    bool eat_quoted() {
        skip_space();
        if (pos >= text.size() || text[pos] != '"') return false;
        ++pos;
        while (pos < text.size() && text[pos] != '"') {
            if (text[pos] == '\\') ++pos;
            ++pos;
        }
        if (pos >= text.size()) return false;
        ++pos;
        return true;
    }
    bool eat_value() { return eat_quoted() || eat_identifier(); }

    bool eat_attr_list() {
        skip_space();
        if (pos >= text.size() || text[pos] != '[') return true;  // optional
        ++pos;
        while (true) {
            skip_space();
            if (pos < text.size() && text[pos] == ']') {
                ++pos;
                return true;
            }
            if (!eat_identifier()) return false;
            skip_space();
            if (pos < text.size() && text[pos] == '=') {
                ++pos;
                if (!eat_value()) return false;
            }
            skip_space();
            if (pos < text.size() && text[pos] == ',') ++pos;
        }
    }
};

}  // namespace

bool dot_is_well_formed(const std::string& text, std::string* error) {
    DotScanner scan(text);
    auto fail = [&](const std::string& message) {
        if (error) *error = message + " near offset " + std::to_string(scan.pos);
        return false;
    };
    if (!scan.eat("digraph")) return fail("expected digraph");
    scan.eat_identifier();  // optional name
    scan.skip_space();
    if (scan.pos >= text.size() || text[scan.pos] != '{') return fail("expected {");
    ++scan.pos;
    while (true) {
        scan.skip_space();
        if (scan.pos >= text.size()) return fail("unterminated digraph");
        if (text[scan.pos] == '}') {
            ++scan.pos;
            break;
        }
        if (text[scan.pos] == '{') {  // rank subgraph
            ++scan.pos;
            while (true) {
                scan.skip_space();
                if (scan.pos >= text.size()) return fail("unterminated subgraph");
                if (text[scan.pos] == '}') {
                    ++scan.pos;
                    break;
                }
                if (text[scan.pos] == ';') {
                    ++scan.pos;
                    continue;
                }
                if (!scan.eat_identifier()) return fail("bad subgraph entry");
                scan.skip_space();
                if (scan.pos < text.size() && text[scan.pos] == '=') {
                    ++scan.pos;
                    if (!scan.eat_value()) return fail("bad rank value");
                }
            }
            scan.skip_space();
            if (scan.pos < text.size() && text[scan.pos] == ';') ++scan.pos;
            continue;
        }
        if (!scan.eat_identifier()) return fail("expected node id or keyword");
        scan.skip_space();
        if (scan.pos < text.size() && text[scan.pos] == '=') {
            // top-level attribute like rankdir=TB
            ++scan.pos;
            if (!scan.eat_value()) return fail("bad attribute value");
        } else if (scan.pos + 1 < text.size() && text[scan.pos] == '-' &&
                   text[scan.pos + 1] == '>') {
            scan.pos += 2;
            if (!scan.eat_identifier()) return fail("bad edge target");
            if (!scan.eat_attr_list()) return fail("bad edge attributes");
        } else {
            if (!scan.eat_attr_list()) return fail("bad node attributes");
        }
        scan.skip_space();
        if (scan.pos < text.size() && text[scan.pos] == ';') ++scan.pos;
    }
    scan.skip_space();
    if (scan.pos != text.size()) return fail("trailing content");
    return true;
}

// --- renaming ----------------------------------------------------------------

std::string rename_source_variables(const std::string& source, const std::string& prefix) {
    lang::Program program = lang::parse(source);
    auto mapper = [&](const std::string& name) { return prefix + name; };
    for (auto& item : program.items) {
        if (item.is_function()) {
            auto& def = item.function();
            for (auto& p : def.params) p = mapper(p);
            for (auto& stmt : def.body) lang::rename_variables(stmt, mapper);
        } else {
            lang::rename_variables(item.statement(), mapper);
        }
    }
    return lang::pretty_print(program);
}

// --- random DAGs ---------------------------------------------------------------

RandomDag random_dag(std::mt19937& rng) {
    while (true) {
        std::uniform_int_distribution<int> size_dist(2, 12);
        int n = size_dist(rng);
        ddg::Ddg graph;
        std::uniform_int_distribution<int> sources_dist(1, std::max(1, n / 3));
        int n_sources = sources_dist(rng);

        for (int i = 0; i < n; ++i) {
            ddg::DdgNode node;
            node.id = i;
            node.label = "n" + std::to_string(i);
            node.span = {i + 1, 1, 1};
            if (i < n_sources) {
                node.kind = ddg::NodeKind::Source;
                node.origin = ddg::SourceOrigin::Input;
                node.outputs = {node.label};
            } else {
                node.kind = ddg::NodeKind::Computation;
                node.outputs = {node.label};
                std::uniform_int_distribution<int> deg_dist(1, std::min(3, i));
                int deg = deg_dist(rng);
                std::set<int> preds;
                std::uniform_int_distribution<int> pred_dist(0, i - 1);
                while (static_cast<int>(preds.size()) < deg) preds.insert(pred_dist(rng));
                for (int p : preds) {
                    const std::string& label = graph.nodes[static_cast<size_t>(p)].label;
                    node.reads.push_back(ddg::ReadBinding{label, p, label});
                }
                // Give the node a real expression over its reads.
                lang::Expr acc{lang::VarRef{node.reads[0].name}, {}};
                for (size_t k = 1; k < node.reads.size(); ++k) {
                    lang::BinaryOp bin{lang::BinOp::Add, {}};
                    bin.operands.push_back(std::move(acc));
                    bin.operands.push_back(lang::Expr{lang::VarRef{node.reads[k].name}, {}});
                    acc = lang::Expr{std::move(bin), {}};
                }
                node.expr = std::move(acc);
            }
            graph.nodes.push_back(std::move(node));
        }
        graph.rebuild_adjacency();

        // Sinks become goal candidates.
        std::vector<int> sinks;
        for (const auto& node : graph.nodes) {
            if (node.kind == ddg::NodeKind::Computation &&
                graph.succs[static_cast<size_t>(node.id)].empty()) {
                sinks.push_back(node.id);
            }
        }
        if (sinks.empty()) continue;
        std::shuffle(sinks.begin(), sinks.end(), rng);
        std::uniform_int_distribution<int> goal_dist(1, std::min<int>(3, static_cast<int>(sinks.size())));
        int n_goals = goal_dist(rng);
        std::vector<int> goals(sinks.begin(), sinks.begin() + n_goals);
        std::sort(goals.begin(), goals.end());
        for (int g : goals) {
            auto& node = graph.nodes[static_cast<size_t>(g)];
            node.kind = ddg::NodeKind::Goal;
            node.goal_args.clear();
            for (const auto& read : node.reads) {
                node.goal_args.push_back(lang::Expr{lang::VarRef{read.name}, {}});
            }
            node.outputs.clear();
            node.expr.reset();
            graph.goal_order.push_back(g);
        }
        return RandomDag{std::move(graph)};
    }
}

std::vector<std::string> make_inputs(const std::vector<std::string>& spec, std::mt19937& rng) {
    std::vector<std::string> out;
    std::uniform_real_distribution<double> real_dist(0.5, 99.5);
    std::uniform_int_distribution<int> int_dist(1, 500);
    std::uniform_int_distribution<int> count_dist(1, 6);
    for (const auto& kind : spec) {
        if (kind == "int") {
            out.push_back(std::to_string(int_dist(rng)));
        } else if (kind == "number") {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.3f", real_dist(rng));
            out.push_back(buf);
        } else {  // "floats": one line of several floats
            int k = count_dist(rng);
            std::string line;
            for (int i = 0; i < k; ++i) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.2f", real_dist(rng));
                if (i) line += " ";
                line += buf;
            }
            out.push_back(line);
        }
    }
    return out;
}

std::string random_program(std::mt19937& rng) {
    std::uniform_int_distribution<int> const_count(2, 5);
    std::uniform_int_distribution<int> comp_count(3, 10);
    std::uniform_int_distribution<int> lit_dist(1, 9);
    std::uniform_int_distribution<int> pick_op(0, 5);
    std::uniform_int_distribution<int> coin(0, 1);

    std::vector<std::string> defined;
    std::ostringstream out;
    int name_counter = 0;
    auto fresh_name = [&]() { return "v" + std::to_string(name_counter++); };
    auto any_var = [&]() {
        std::uniform_int_distribution<size_t> pick(0, defined.size() - 1);
        return defined[pick(rng)];
    };

    int constants = const_count(rng);
    for (int i = 0; i < constants; ++i) {
        std::string name = fresh_name();
        out << name << " = ";
        if (coin(rng)) {
            out << lit_dist(rng);
        } else {
            out << lit_dist(rng) << "." << lit_dist(rng);
        }
        out << "\n";
        defined.push_back(name);
    }
    int computations = comp_count(rng);
    int prints = 0;
    for (int i = 0; i < computations; ++i) {
        // Reassign an existing name occasionally to exercise versioning.
        std::string name = coin(rng) == 0 && !defined.empty() && i % 3 == 0 ? any_var() : fresh_name();
        if (i % 7 == 6 && defined.size() >= 2) {
            // Occasional simultaneous assignment (sometimes a swap).
            std::string a = any_var();
            std::string b = any_var();
            out << a << ", " << b << " = " << b << ", " << a << "\n";
        } else {
            out << name << " = ";
            switch (pick_op(rng)) {
                case 0: out << any_var() << " + " << any_var(); break;
                case 1: out << any_var() << " - " << any_var(); break;
                case 2: out << any_var() << " * " << any_var(); break;
                case 3: out << any_var() << " // " << (1 + lit_dist(rng)); break;
                case 4: out << any_var() << " % " << (1 + lit_dist(rng)); break;
                default: out << any_var(); break;  // a pure copy
            }
            out << "\n";
            if (std::find(defined.begin(), defined.end(), name) == defined.end()) {
                defined.push_back(name);
            }
        }
        if (coin(rng)) {
            if (coin(rng)) {
                out << "print(" << any_var() << ")\n";
            } else {
                out << "print(" << any_var() << " + " << any_var() << ")\n";
            }
            ++prints;
        }
    }
    if (prints == 0) out << "print(" << any_var() << ")\n";
    return out.str();
}

}  // namespace testsupport

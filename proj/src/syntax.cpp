#include "argstruct/syntax.hpp"

#include <algorithm>
#include <map>

#include "argstruct/errors.hpp"

namespace argstruct::syntax {

int ParseTree::depth() const {
    int best = 0;
    for (int leaf : leaves) best = std::max(best, node_depth(leaf));
    return best;
}

int ParseTree::node_depth(int node) const {
    int d = 0;
    while (node >= 0) {
        ++d;
        node = nodes[static_cast<size_t>(node)].parent;
    }
    return d;
}

int ParseTree::lca(int a, int b) const {
    std::vector<bool> mark(nodes.size(), false);
    for (int n = a; n >= 0; n = nodes[static_cast<size_t>(n)].parent)
        mark[static_cast<size_t>(n)] = true;
    for (int n = b; n >= 0; n = nodes[static_cast<size_t>(n)].parent)
        if (mark[static_cast<size_t>(n)]) return n;
    return 0;
}

namespace {

std::string decode_word(std::string w) {
    if (w == "-LRB-") return "(";
    if (w == "-RRB-") return ")";
    return w;
}

struct Parser {
    std::string_view text;
    size_t pos = 0;
    ParseTree tree;

    void skip_space() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' ||
                                     text[pos] == '\n' || text[pos] == '\r'))
            ++pos;
    }

    std::string atom() {
        size_t start = pos;
        while (pos < text.size() && text[pos] != '(' && text[pos] != ')' &&
               text[pos] != ' ' && text[pos] != '\t' && text[pos] != '\n' &&
               text[pos] != '\r')
            ++pos;
        if (start == pos) throw ParseError("constituency tree: expected a symbol");
        return std::string(text.substr(start, pos - start));
    }

    int node(int parent) {
        skip_space();
        if (pos >= text.size() || text[pos] != '(')
            throw ParseError("constituency tree: expected '('");
        ++pos;
        skip_space();
        const int id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[static_cast<size_t>(id)].parent = parent;
        tree.nodes[static_cast<size_t>(id)].label = atom();
        skip_space();
        if (pos < text.size() && text[pos] == '(') {
            while (pos < text.size() && text[pos] == '(') {
                int child = node(id);
                tree.nodes[static_cast<size_t>(id)].children.push_back(child);
                skip_space();
            }
        } else {
            tree.nodes[static_cast<size_t>(id)].word = decode_word(atom());
            tree.nodes[static_cast<size_t>(id)].leaf_index =
                static_cast<int>(tree.leaves.size());
            tree.leaves.push_back(id);
            skip_space();
        }
        if (pos >= text.size() || text[pos] != ')')
            throw ParseError("constituency tree: expected ')'");
        ++pos;
        return id;
    }
};

}  // namespace

ParseTree parse_tree(std::string_view text) {
    Parser p;
    p.text = text;
    p.skip_space();
    if (p.pos >= text.size()) throw ParseError("constituency tree: empty input");
    p.node(-1);
    p.skip_space();
    if (p.pos != text.size())
        throw ParseError("constituency tree: trailing characters after the root");
    return p.tree;
}

std::vector<std::string> production_rules(const ParseTree& tree) {
    std::vector<std::string> out;
    for (const auto& n : tree.nodes) {
        if (n.children.empty()) continue;
        std::string rule = n.label + " ->";
        for (int c : n.children) rule += " " + tree.nodes[static_cast<size_t>(c)].label;
        out.push_back(std::move(rule));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Collins head rules
// ---------------------------------------------------------------------------
namespace {

struct HeadRule {
    bool from_left;  // search direction for the priority list
    std::vector<std::string> priority;
};

const std::map<std::string, HeadRule>& head_rules() {
    static const std::map<std::string, HeadRule> rules = {
        {"ADJP", {true, {"NNS", "QP", "NN", "$", "ADVP", "JJ", "VBN", "VBG", "ADJP",
                         "JJR", "NP", "JJS", "DT", "FW", "RBR", "RBS", "SBAR", "RB"}}},
        {"ADVP", {false, {"RB", "RBR", "RBS", "FW", "ADVP", "TO", "CD", "JJR", "JJ",
                          "IN", "NP", "JJS", "NN"}}},
        {"CONJP", {false, {"CC", "RB", "IN"}}},
        {"FRAG", {false, {}}},
        {"INTJ", {true, {}}},
        {"LST", {false, {"LS", ":"}}},
        {"NAC", {true, {"NN", "NNS", "NNP", "NNPS", "NP", "NAC", "EX", "$", "CD", "QP",
                        "PRP", "VBG", "JJ", "JJS", "JJR", "ADJP", "FW"}}},
        {"PP", {false, {"IN", "TO", "VBG", "VBN", "RP", "FW"}}},
        {"PRN", {true, {}}},
        {"PRT", {false, {"RP"}}},
        {"QP", {true, {"$", "IN", "NNS", "NN", "JJ", "RB", "DT", "CD", "NCD", "QP",
                       "JJR", "JJS"}}},
        {"RRC", {false, {"VP", "NP", "ADVP", "ADJP", "PP"}}},
        {"S", {true, {"TO", "IN", "VP", "S", "SBAR", "ADJP", "UCP", "NP"}}},
        {"SBAR", {true, {"WHNP", "WHPP", "WHADVP", "WHADJP", "IN", "DT", "S", "SQ",
                         "SINV", "SBAR", "FRAG"}}},
        {"SBARQ", {true, {"SQ", "S", "SINV", "SBARQ", "FRAG"}}},
        {"SINV", {true, {"VBZ", "VBD", "VBP", "VB", "MD", "VP", "S", "SINV", "ADJP",
                         "NP"}}},
        {"SQ", {true, {"VBZ", "VBD", "VBP", "VB", "MD", "VP", "SQ"}}},
        {"UCP", {false, {}}},
        {"VP", {true, {"TO", "VBD", "VBN", "MD", "VBZ", "VB", "VBG", "VBP", "VP",
                       "ADJP", "NN", "NNS", "NP"}}},
        {"WHADJP", {true, {"CC", "WRB", "JJ", "ADJP"}}},
        {"WHADVP", {false, {"CC", "WRB"}}},
        {"WHNP", {true, {"WDT", "WP", "WP$", "WHADJP", "WHPP", "WHNP"}}},
        {"WHPP", {false, {"IN", "TO", "FW"}}},
    };
    return rules;
}

bool np_label(const std::string& l) {
    return l == "NN" || l == "NNP" || l == "NNPS" || l == "NNS" || l == "NX" ||
           l == "POS" || l == "JJR";
}

int np_head_child(const ParseTree& tree, const TreeNode& n) {
    auto label_of = [&](int c) { return tree.nodes[static_cast<size_t>(c)].label; };
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it)
        if (np_label(label_of(*it))) return *it;
    for (int c : n.children)
        if (label_of(c) == "NP") return c;
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) {
        const auto& l = label_of(*it);
        if (l == "$" || l == "ADJP" || l == "PRN") return *it;
    }
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it)
        if (label_of(*it) == "CD") return *it;
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) {
        const auto& l = label_of(*it);
        if (l == "JJ" || l == "JJS" || l == "RB" || l == "QP") return *it;
    }
    return n.children.back();
}

int head_child(const ParseTree& tree, int node) {
    const auto& n = tree.nodes[static_cast<size_t>(node)];
    if (n.label == "NP" || n.label == "WHNP" || n.label == "NX")
        return np_head_child(tree, n);
    auto it = head_rules().find(n.label);
    auto label_of = [&](int c) { return tree.nodes[static_cast<size_t>(c)].label; };
    if (it != head_rules().end()) {
        const auto& rule = it->second;
        for (const auto& want : rule.priority) {
            if (rule.from_left) {
                for (int c : n.children)
                    if (label_of(c) == want) return c;
            } else {
                for (auto r = n.children.rbegin(); r != n.children.rend(); ++r)
                    if (label_of(*r) == want) return *r;
            }
        }
        return rule.from_left ? n.children.front() : n.children.back();
    }
    return n.children.front();
}

}  // namespace

int head_leaf(const ParseTree& tree, int node) {
    while (!tree.nodes[static_cast<size_t>(node)].is_leaf())
        node = head_child(tree, node);
    return node;
}

int head_projection(const ParseTree& tree, int leaf_node) {
    int best = leaf_node;
    int cur = tree.nodes[static_cast<size_t>(leaf_node)].parent;
    while (cur >= 0 && head_leaf(tree, cur) == leaf_node) {
        best = cur;
        cur = tree.nodes[static_cast<size_t>(cur)].parent;
    }
    return best;
}

}  // namespace argstruct::syntax

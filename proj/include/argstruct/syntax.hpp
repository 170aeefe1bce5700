#pragma once

// Constituency tree utilities: parsing bracketed trees, depth and lowest
// common ancestor queries, production rule extraction, and a Collins-style
// lexical head finder.

#include <string>
#include <string_view>
#include <vector>

namespace argstruct::syntax {

struct TreeNode {
    std::string label;        // constituent label, or POS tag for leaves
    std::string word;         // leaf word; empty for internal nodes
    std::vector<int> children;
    int parent = -1;
    int leaf_index = -1;      // surface position for leaves, -1 otherwise

    bool is_leaf() const { return !word.empty(); }
};

struct ParseTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    std::vector<int> leaves;      // leaf node ids in surface order

    bool empty() const { return nodes.empty(); }
    // number of nodes on the longest root-to-leaf path (a lone leaf has depth 1)
    int depth() const;
    // number of nodes on the path from the root down to `node`, inclusive
    int node_depth(int node) const;
    int lca(int a, int b) const;
};

// Parses one bracketed tree like "(S (NP (DT the) (NN dog)) (VP (VBZ barks)))".
// -LRB- and -RRB- in words decode to parentheses. Throws ParseError on
// malformed input.
ParseTree parse_tree(std::string_view text);

// "LABEL -> CHILD1 CHILD2" strings for every internal node except
// preterminals; lexical rules such as "DT -> the" are not productions.
std::vector<std::string> production_rules(const ParseTree& tree);

// Leaf node id of the lexical head of `node`, found by walking Collins' head
// rules downward.
int head_leaf(const ParseTree& tree, int node);

// Uppermost ancestor of the leaf's preterminal whose lexical head is this
// leaf (the maximal head projection).
int head_projection(const ParseTree& tree, int leaf_node);

}  // namespace argstruct::syntax

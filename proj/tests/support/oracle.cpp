#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dftsafe/marking.hpp"

namespace dftsafe::tests {

namespace {

struct TreeNode {
    std::vector<std::pair<std::size_t, double>> edges;
    double exit = 0.0;
};

struct SequenceTree {
    std::vector<TreeNode> nodes;  // node 0: initial, node 1: shared failure leaf
};

constexpr std::size_t kFailureLeaf = 1;
constexpr std::size_t kNodeCap = 4'000'000;

std::size_t expandNode(SequenceTree& tree, MarkingEvaluator const& evaluator, Marking const& marking,
                       std::map<std::string, double> const& valuation) {
    std::size_t index = tree.nodes.size();
    tree.nodes.emplace_back();
    if (tree.nodes.size() > kNodeCap) {
        throw std::runtime_error("oracle sequence tree too large");
    }
    std::vector<std::pair<std::size_t, double>> edges;
    double exit = 0.0;
    for (auto const& [be, rate] : evaluator.enabledFailures(marking, valuation)) {
        Marking next = marking;
        evaluator.failBasicEvent(next, be);
        bool fatal = evaluator.topFailed(next);
        if (evaluator.dft().basicEvent(be).transient && !fatal) {
            continue;  // vanished transient fault
        }
        std::size_t target = fatal ? kFailureLeaf : expandNode(tree, evaluator, next, valuation);
        edges.push_back({target, rate});
        exit += rate;
    }
    tree.nodes[index].edges = std::move(edges);
    tree.nodes[index].exit = exit;
    return index;
}

SequenceTree buildTree(Dft const& dft, std::map<std::string, double> const& valuation) {
    MarkingEvaluator evaluator(dft);
    SequenceTree tree;
    tree.nodes.emplace_back();  // placeholder, replaced below
    tree.nodes.emplace_back();  // failure leaf (absorbing)
    tree.nodes.clear();
    // Rebuild with the initial node first so indices stay [initial, leaf, ...].
    tree.nodes.resize(2);
    Marking initial = evaluator.initialMarking();
    std::vector<std::pair<std::size_t, double>> edges;
    double exit = 0.0;
    for (auto const& [be, rate] : evaluator.enabledFailures(initial, valuation)) {
        Marking next = initial;
        evaluator.failBasicEvent(next, be);
        bool fatal = evaluator.topFailed(next);
        if (evaluator.dft().basicEvent(be).transient && !fatal) {
            continue;
        }
        std::size_t target = fatal ? kFailureLeaf : expandNode(tree, evaluator, next, valuation);
        edges.push_back({target, rate});
        exit += rate;
    }
    tree.nodes[0].edges = std::move(edges);
    tree.nodes[0].exit = exit;
    return tree;
}

std::vector<double> derivative(SequenceTree const& tree, std::vector<double> const& pi) {
    std::vector<double> d(pi.size(), 0.0);
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        if (pi[i] == 0.0) {
            continue;
        }
        d[i] -= pi[i] * tree.nodes[i].exit;
        for (auto const& [target, rate] : tree.nodes[i].edges) {
            d[target] += pi[i] * rate;
        }
    }
    return d;
}

double integrateFailureProbability(SequenceTree const& tree, double horizon) {
    double maxExit = 0.0;
    for (TreeNode const& node : tree.nodes) {
        maxExit = std::max(maxExit, node.exit);
    }
    std::size_t steps = 512 + static_cast<std::size_t>(64.0 * maxExit * horizon);
    steps = std::min<std::size_t>(steps, 200'000);
    double h = horizon / static_cast<double>(steps);
    std::vector<double> pi(tree.nodes.size(), 0.0);
    pi[0] = 1.0;
    for (std::size_t step = 0; step < steps; ++step) {
        std::vector<double> k1 = derivative(tree, pi);
        std::vector<double> mid(pi.size());
        for (std::size_t i = 0; i < pi.size(); ++i) {
            mid[i] = pi[i] + 0.5 * h * k1[i];
        }
        std::vector<double> k2 = derivative(tree, mid);
        for (std::size_t i = 0; i < pi.size(); ++i) {
            mid[i] = pi[i] + 0.5 * h * k2[i];
        }
        std::vector<double> k3 = derivative(tree, mid);
        for (std::size_t i = 0; i < pi.size(); ++i) {
            mid[i] = pi[i] + h * k3[i];
        }
        std::vector<double> k4 = derivative(tree, mid);
        for (std::size_t i = 0; i < pi.size(); ++i) {
            pi[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    return pi[kFailureLeaf];
}

void accumulateExpectedTime(SequenceTree const& tree, std::size_t node, double probability, double& mttf,
                            double& failureMass) {
    if (node == kFailureLeaf) {
        failureMass += probability;
        return;
    }
    if (tree.nodes[node].exit <= 0.0) {
        return;  // operational absorbing: this mass never fails
    }
    mttf += probability / tree.nodes[node].exit;
    for (auto const& [target, rate] : tree.nodes[node].edges) {
        accumulateExpectedTime(tree, target, probability * rate / tree.nodes[node].exit, mttf, failureMass);
    }
}

}  // namespace

OracleResult oracleAnalyze(Dft const& dft, double horizon, std::map<std::string, double> const& valuation) {
    SequenceTree tree = buildTree(dft, dft.valuation(valuation));
    OracleResult result;
    result.unreliability = integrateFailureProbability(tree, horizon);
    double mttf = 0.0;
    double failureMass = 0.0;
    accumulateExpectedTime(tree, 0, 1.0, mttf, failureMass);
    result.failureProbability = failureMass;
    result.mttfDefined = failureMass >= 1.0 - 1e-9;
    result.mttf = result.mttfDefined ? mttf : 0.0;
    return result;
}

}  // namespace dftsafe::tests

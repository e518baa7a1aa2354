#include "dftsafe/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dftsafe/errors.hpp"

namespace dftsafe {

namespace {

struct PoissonWindow {
    std::size_t left = 0;
    std::vector<double> weights;  // normalized, tail mass <= epsilon split evenly
};

PoissonWindow poissonWindow(double q, double epsilon) {
    if (q <= 0.0) {
        return {0, {1.0}};
    }
    std::size_t mode = static_cast<std::size_t>(q);
    constexpr double kCutoff = 1e-40;

    std::vector<double> rightTerms{1.0};
    double term = 1.0;
    for (std::size_t k = mode + 1; term > kCutoff; ++k) {
        term *= q / static_cast<double>(k);
        rightTerms.push_back(term);
    }
    std::vector<double> leftTerms;  // mode-1 downwards
    term = 1.0;
    for (std::size_t k = mode; k > 0; --k) {
        term *= static_cast<double>(k) / q;
        if (term <= kCutoff) {
            break;
        }
        leftTerms.push_back(term);
    }

    std::size_t first = mode - leftTerms.size();
    std::vector<double> weights;
    weights.reserve(leftTerms.size() + rightTerms.size());
    for (auto it = leftTerms.rbegin(); it != leftTerms.rend(); ++it) {
        weights.push_back(*it);
    }
    for (double w : rightTerms) {
        weights.push_back(w);
    }
    double total = 0.0;
    for (double w : weights) {
        total += w;
    }
    for (double& w : weights) {
        w /= total;
    }

    // Trim both tails, each up to epsilon/2 of probability mass.
    double cut = epsilon / 2.0;
    std::size_t begin = 0;
    double acc = 0.0;
    while (begin + 1 < weights.size() && acc + weights[begin] <= cut) {
        acc += weights[begin];
        ++begin;
    }
    std::size_t end = weights.size();
    acc = 0.0;
    while (end > begin + 1 && acc + weights[end - 1] <= cut) {
        acc += weights[end - 1];
        --end;
    }
    return {first + begin, std::vector<double>(weights.begin() + begin, weights.begin() + end)};
}

double maxExit(Ctmc const& ctmc, std::vector<char> const& absorbingOverride) {
    double result = 0.0;
    for (StateIndex s = 0; s < ctmc.numStates(); ++s) {
        if (!absorbingOverride[s]) {
            result = std::max(result, ctmc.exitRate[s]);
        }
    }
    return result;
}

void applyBackward(Ctmc const& ctmc, std::vector<char> const& absorbingOverride, double uniformizationRate,
                   std::vector<double> const& x, std::vector<double>& out) {
    for (StateIndex s = 0; s < ctmc.numStates(); ++s) {
        if (absorbingOverride[s]) {
            out[s] = x[s];
            continue;
        }
        double value = (1.0 - ctmc.exitRate[s] / uniformizationRate) * x[s];
        for (auto const& [target, rate] : ctmc.transitions[s]) {
            value += rate / uniformizationRate * x[target];
        }
        out[s] = value;
    }
}

void applyForward(Ctmc const& ctmc, std::vector<char> const& absorbingOverride, double uniformizationRate,
                  std::vector<double> const& pi, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (StateIndex s = 0; s < ctmc.numStates(); ++s) {
        double mass = pi[s];
        if (mass == 0.0) {
            continue;
        }
        if (absorbingOverride[s]) {
            out[s] += mass;
            continue;
        }
        out[s] += (1.0 - ctmc.exitRate[s] / uniformizationRate) * mass;
        for (auto const& [target, rate] : ctmc.transitions[s]) {
            out[target] += rate / uniformizationRate * mass;
        }
    }
}

std::vector<double> uniformize(Ctmc const& ctmc, std::vector<char> const& absorbingOverride, double t,
                               std::vector<double> vec, bool backward, AnalysisOptions const& options) {
    double rateBound = maxExit(ctmc, absorbingOverride);
    if (t <= 0.0 || rateBound == 0.0) {
        return vec;
    }
    double uniformizationRate = 1.02 * rateBound;
    PoissonWindow window = poissonWindow(uniformizationRate * t, options.uniformizationEpsilon);

    std::vector<double> accumulated(vec.size(), 0.0);
    std::vector<double> scratch(vec.size(), 0.0);
    std::size_t last = window.left + window.weights.size() - 1;
    for (std::size_t k = 0; k <= last; ++k) {
        if (k >= window.left) {
            double w = window.weights[k - window.left];
            for (std::size_t i = 0; i < vec.size(); ++i) {
                accumulated[i] += w * vec[i];
            }
        }
        if (k < last) {
            if (backward) {
                applyBackward(ctmc, absorbingOverride, uniformizationRate, vec, scratch);
            } else {
                applyForward(ctmc, absorbingOverride, uniformizationRate, vec, scratch);
            }
            vec.swap(scratch);
        }
    }
    return accumulated;
}

/// Solves x_s = b_s + sum_{s'} P(s,s') x_{s'} for all s with solve[s];
/// other entries of x are fixed boundary values. P(s,s') = rate/exit(s).
void solveEmbedded(Ctmc const& ctmc, std::vector<char> const& solve, std::vector<double>& x,
                   std::vector<double> const& b, AnalysisOptions const& options) {
    std::size_t n = ctmc.numStates();
    std::vector<StateIndex> unknowns;
    for (StateIndex s = 0; s < n; ++s) {
        if (solve[s]) {
            unknowns.push_back(s);
        }
    }
    if (unknowns.empty()) {
        return;
    }

    // Attempt a topological order over the unknown-to-unknown subgraph: the chains
    // produced from fault trees are acyclic, making back-substitution exact.
    std::vector<std::uint32_t> indegree(n, 0);
    bool selfLoop = false;
    for (StateIndex s : unknowns) {
        for (auto const& [target, rate] : ctmc.transitions[s]) {
            if (target == s) {
                selfLoop = true;
            } else if (solve[target]) {
                ++indegree[target];
            }
        }
    }
    std::vector<StateIndex> order;
    if (!selfLoop) {
        order.reserve(unknowns.size());
        std::vector<StateIndex> stack;
        for (StateIndex s : unknowns) {
            if (indegree[s] == 0) {
                stack.push_back(s);
            }
        }
        while (!stack.empty()) {
            StateIndex s = stack.back();
            stack.pop_back();
            order.push_back(s);
            for (auto const& [target, rate] : ctmc.transitions[s]) {
                if (solve[target] && --indegree[target] == 0) {
                    stack.push_back(target);
                }
            }
        }
    }
    if (!selfLoop && order.size() == unknowns.size()) {
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            StateIndex s = *it;
            double value = b[s];
            for (auto const& [target, rate] : ctmc.transitions[s]) {
                value += rate / ctmc.exitRate[s] * x[target];
            }
            x[s] = value;
        }
        return;
    }

    if (unknowns.size() <= 512) {
        // Dense Gaussian elimination with partial pivoting on (I - P) restricted
        // to the unknowns.
        std::size_t m = unknowns.size();
        std::vector<std::uint32_t> position(n, UINT32_MAX);
        for (std::size_t i = 0; i < m; ++i) {
            position[unknowns[i]] = static_cast<std::uint32_t>(i);
        }
        std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
        for (std::size_t i = 0; i < m; ++i) {
            StateIndex s = unknowns[i];
            a[i][i] = 1.0;
            a[i][m] = b[s];
            for (auto const& [target, rate] : ctmc.transitions[s]) {
                double p = rate / ctmc.exitRate[s];
                if (position[target] != UINT32_MAX) {
                    a[i][position[target]] -= p;
                } else {
                    a[i][m] += p * x[target];
                }
            }
        }
        for (std::size_t col = 0; col < m; ++col) {
            std::size_t pivot = col;
            for (std::size_t row = col + 1; row < m; ++row) {
                if (std::abs(a[row][col]) > std::abs(a[pivot][col])) {
                    pivot = row;
                }
            }
            std::swap(a[col], a[pivot]);
            if (a[col][col] == 0.0) {
                throw DftError("singular embedded-chain system");
            }
            for (std::size_t row = col + 1; row < m; ++row) {
                double factor = a[row][col] / a[col][col];
                if (factor == 0.0) {
                    continue;
                }
                for (std::size_t j = col; j <= m; ++j) {
                    a[row][j] -= factor * a[col][j];
                }
            }
        }
        for (std::size_t i = m; i-- > 0;) {
            double value = a[i][m];
            for (std::size_t j = i + 1; j < m; ++j) {
                value -= a[i][j] * x[unknowns[j]];
            }
            x[unknowns[i]] = value / a[i][i];
        }
        return;
    }

    // Gauss-Seidel sweep for large cyclic systems.
    constexpr std::size_t kMaxIterations = 500000;
    for (std::size_t iteration = 0; iteration < kMaxIterations; ++iteration) {
        double maxChange = 0.0;
        for (StateIndex s : unknowns) {
            double value = b[s];
            double selfCoefficient = 1.0;
            for (auto const& [target, rate] : ctmc.transitions[s]) {
                double p = rate / ctmc.exitRate[s];
                if (target == s) {
                    selfCoefficient -= p;
                } else {
                    value += p * x[target];
                }
            }
            value /= selfCoefficient;
            maxChange = std::max(maxChange, std::abs(value - x[s]) / std::max(std::abs(value), 1.0));
            x[s] = value;
        }
        if (maxChange <= options.linearEpsilon) {
            return;
        }
    }
    throw DftError("embedded-chain linear solve did not converge");
}

}  // namespace

std::vector<double> transientDistribution(Ctmc const& ctmc, double t, std::vector<double> initial,
                                          AnalysisOptions const& options) {
    std::vector<char> noOverride(ctmc.numStates(), 0);
    return uniformize(ctmc, noOverride, t, std::move(initial), /*backward=*/false, options);
}

std::vector<double> boundedReachBackward(Ctmc const& ctmc, std::vector<char> const& bad,
                                         std::vector<char> const& target, double t,
                                         AnalysisOptions const& options) {
    std::size_t n = ctmc.numStates();
    std::vector<char> absorbingOverride(n, 0);
    std::vector<double> x(n, 0.0);
    for (StateIndex s = 0; s < n; ++s) {
        // Target priority: a state in both sets counts as target.
        if (target[s]) {
            absorbingOverride[s] = 1;
            x[s] = 1.0;
        } else if (bad[s]) {
            absorbingOverride[s] = 1;
        }
    }
    return uniformize(ctmc, absorbingOverride, t, std::move(x), /*backward=*/true, options);
}

std::vector<double> boundedFirstPassageForward(Ctmc const& ctmc, std::vector<char> const& absorbing, double t,
                                               StateIndex from, AnalysisOptions const& options) {
    std::size_t n = ctmc.numStates();
    std::vector<double> pi(n, 0.0);
    pi[from] = 1.0;
    return uniformize(ctmc, absorbing, t, std::move(pi), /*backward=*/false, options);
}

std::vector<double> unboundedReachAvoid(Ctmc const& ctmc, std::vector<char> const& bad,
                                        std::vector<char> const& target, AnalysisOptions const& options) {
    std::size_t n = ctmc.numStates();
    std::vector<double> x(n, 0.0);
    std::vector<double> b(n, 0.0);
    std::vector<char> solve(n, 0);
    for (StateIndex s = 0; s < n; ++s) {
        if (target[s]) {
            x[s] = 1.0;
        } else if (!bad[s] && ctmc.exitRate[s] > 0.0) {
            solve[s] = 1;
        }
    }
    solveEmbedded(ctmc, solve, x, b, options);
    return x;
}

ExpectedTimeResult expectedTime(Ctmc const& ctmc, std::vector<char> const& target, AnalysisOptions const& options) {
    std::size_t n = ctmc.numStates();
    ExpectedTimeResult result;
    result.reachProbability = unboundedReachAvoid(ctmc, std::vector<char>(n, 0), target, options);
    result.value.assign(n, std::numeric_limits<double>::infinity());

    std::vector<char> solve(n, 0);
    std::vector<double> b(n, 0.0);
    for (StateIndex s = 0; s < n; ++s) {
        if (target[s]) {
            result.value[s] = 0.0;
        } else if (result.definedAt(s) && ctmc.exitRate[s] > 0.0) {
            solve[s] = 1;
            b[s] = 1.0 / ctmc.exitRate[s];
        }
    }
    // Defined states only reach defined states (almost surely), so undefined
    // boundary entries are never mixed in; they stay at value 0 during the solve
    // and are reported as +infinity.
    std::vector<double> x(n, 0.0);
    for (StateIndex s = 0; s < n; ++s) {
        if (target[s]) {
            x[s] = 0.0;
        }
    }
    solveEmbedded(ctmc, solve, x, b, options);
    for (StateIndex s = 0; s < n; ++s) {
        if (solve[s]) {
            result.value[s] = x[s];
        }
    }
    return result;
}

std::vector<double> forwardAbsorption(Ctmc const& ctmc, std::vector<char> const& absorbing, StateIndex from,
                                      AnalysisOptions const& options) {
    std::size_t n = ctmc.numStates();
    std::vector<double> result(n, 0.0);
    if (absorbing[from]) {
        result[from] = 1.0;
        return result;
    }
    if (ctmc.exitRate[from] == 0.0) {
        return result;
    }

    std::vector<char> transient(n, 0);
    std::vector<StateIndex> transientStates;
    for (StateIndex s = 0; s < n; ++s) {
        if (!absorbing[s] && ctmc.exitRate[s] > 0.0) {
            transient[s] = 1;
            transientStates.push_back(s);
        }
    }

    // Topological forward propagation (exact for the acyclic chains of fault trees).
    std::vector<std::uint32_t> indegree(n, 0);
    bool cyclic = false;
    for (StateIndex s : transientStates) {
        for (auto const& [target, rate] : ctmc.transitions[s]) {
            if (target == s) {
                cyclic = true;
            } else if (transient[target]) {
                ++indegree[target];
            }
        }
    }
    std::vector<StateIndex> order;
    if (!cyclic) {
        std::vector<StateIndex> stack;
        for (StateIndex s : transientStates) {
            if (indegree[s] == 0) {
                stack.push_back(s);
            }
        }
        while (!stack.empty()) {
            StateIndex s = stack.back();
            stack.pop_back();
            order.push_back(s);
            for (auto const& [target, rate] : ctmc.transitions[s]) {
                if (transient[target] && --indegree[target] == 0) {
                    stack.push_back(target);
                }
            }
        }
        cyclic = order.size() != transientStates.size();
    }

    std::vector<double> visits(n, 0.0);
    visits[from] = 1.0;
    if (!cyclic) {
        for (StateIndex s : order) {
            double mass = visits[s];
            if (mass == 0.0) {
                continue;
            }
            for (auto const& [target, rate] : ctmc.transitions[s]) {
                double p = rate / ctmc.exitRate[s];
                if (transient[target]) {
                    visits[target] += mass * p;
                }
            }
        }
    } else {
        // Gauss-Seidel on expected visit counts: v = e_from + P^T v over transient states.
        std::vector<std::vector<std::pair<StateIndex, double>>> predecessors(n);
        for (StateIndex s : transientStates) {
            for (auto const& [target, rate] : ctmc.transitions[s]) {
                if (transient[target]) {
                    predecessors[target].push_back({s, rate / ctmc.exitRate[s]});
                }
            }
        }
        constexpr std::size_t kMaxIterations = 500000;
        bool converged = false;
        for (std::size_t iteration = 0; iteration < kMaxIterations && !converged; ++iteration) {
            double maxChange = 0.0;
            for (StateIndex s : transientStates) {
                double value = s == from ? 1.0 : 0.0;
                double selfCoefficient = 1.0;
                for (auto const& [pred, p] : predecessors[s]) {
                    if (pred == s) {
                        selfCoefficient -= p;
                    } else {
                        value += p * visits[pred];
                    }
                }
                value /= selfCoefficient;
                maxChange = std::max(maxChange, std::abs(value - visits[s]) / std::max(std::abs(value), 1.0));
                visits[s] = value;
            }
            converged = maxChange <= options.linearEpsilon;
        }
        if (!converged) {
            throw DftError("forward absorption solve did not converge");
        }
    }

    for (StateIndex s : transientStates) {
        double mass = visits[s];
        if (mass == 0.0) {
            continue;
        }
        for (auto const& [target, rate] : ctmc.transitions[s]) {
            if (absorbing[target]) {
                result[target] += mass * rate / ctmc.exitRate[s];
            }
        }
    }
    return result;
}

}  // namespace dftsafe

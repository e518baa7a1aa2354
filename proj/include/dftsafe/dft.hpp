#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "dftsafe/rate_expression.hpp"

namespace dftsafe {

using ElementIndex = std::uint32_t;
inline constexpr ElementIndex kNoElement = UINT32_MAX;

enum class GateKind { And, Or, Vot, Pand, Seq, Spare };
enum class DependencyKind { Fdep, Adep };

struct BasicEvent {
    RateExpr rate;
    double dormancy = 1.0;
    bool transient = false;
    bool dummy = false;
};

struct Gate {
    GateKind kind = GateKind::And;
    std::uint32_t threshold = 0;  // only meaningful for Vot
    std::vector<ElementIndex> children;
};

struct Dependency {
    DependencyKind kind = DependencyKind::Fdep;
    ElementIndex trigger = kNoElement;  // activation source for ADEPs
    std::vector<ElementIndex> targets;
};

struct Diagnostic {
    std::string element;
    std::string message;
};

class Dft;

/// Boolean predicate over element-failed atoms, used for user-declared state labels.
class LabelExpr {
   public:
    static LabelExpr failed(ElementIndex element);
    static LabelExpr negation(LabelExpr operand);
    static LabelExpr conjunction(LabelExpr lhs, LabelExpr rhs);
    static LabelExpr disjunction(LabelExpr lhs, LabelExpr rhs);

    template <typename FailedPred>
    bool evaluate(FailedPred const& isFailed) const {
        switch (node_->kind) {
            case Kind::Failed:
                return isFailed(node_->element);
            case Kind::Not:
                return !LabelExpr(node_->lhs).evaluate(isFailed);
            case Kind::And:
                return LabelExpr(node_->lhs).evaluate(isFailed) && LabelExpr(node_->rhs).evaluate(isFailed);
            case Kind::Or:
                return LabelExpr(node_->lhs).evaluate(isFailed) || LabelExpr(node_->rhs).evaluate(isFailed);
        }
        return false;
    }

    void collectAtoms(std::vector<ElementIndex>& out) const;

    /// Rewrites every atom through `map` (old index -> new index). Atoms must be mapped.
    LabelExpr remapped(std::vector<ElementIndex> const& map) const;

    std::string str(Dft const& dft) const;

    /// Parses `expr := or; or := and ('|' and)*; and := unary ('&' unary)*; unary := '!' unary | '(' expr ')' | failed(<id>)`.
    static LabelExpr parse(std::string_view text, Dft const& dft);

   private:
    enum class Kind { Failed, Not, And, Or };

    struct Node {
        Kind kind;
        ElementIndex element = kNoElement;
        std::shared_ptr<Node const> lhs;
        std::shared_ptr<Node const> rhs;
    };

    explicit LabelExpr(std::shared_ptr<Node const> node) : node_(std::move(node)) {}

    std::shared_ptr<Node const> node_;
};

struct Label {
    std::string name;
    LabelExpr condition;
};

/// A dynamic fault tree: typed DAG of basic events, gates, and dependencies with
/// a designated top-level element, declared rate parameters, and state labels.
class Dft {
   public:
    ElementIndex addBasicEvent(std::string name, BasicEvent be);
    ElementIndex addGate(std::string name, GateKind kind, std::vector<ElementIndex> children,
                         std::uint32_t threshold = 0);
    ElementIndex addDependency(std::string name, DependencyKind kind, ElementIndex trigger,
                               std::vector<ElementIndex> targets);

    void setTop(ElementIndex top) { top_ = top; }
    void declareParameter(std::string name, double defaultValue);
    void addLabel(Label label) { labels_.push_back(std::move(label)); }

    // Mutators used by the parser (references may appear before their declaration).
    void setGateChildren(ElementIndex gate, std::vector<ElementIndex> children);
    void setDependencyWiring(ElementIndex dep, ElementIndex trigger, std::vector<ElementIndex> targets);

    std::size_t size() const { return elements_.size(); }
    ElementIndex top() const { return top_; }

    bool isBasicEvent(ElementIndex i) const { return std::holds_alternative<BasicEvent>(elements_[i].data); }
    bool isGate(ElementIndex i) const { return std::holds_alternative<Gate>(elements_[i].data); }
    bool isDependency(ElementIndex i) const { return std::holds_alternative<Dependency>(elements_[i].data); }

    BasicEvent const& basicEvent(ElementIndex i) const { return std::get<BasicEvent>(elements_[i].data); }
    Gate const& gate(ElementIndex i) const { return std::get<Gate>(elements_[i].data); }
    Dependency const& dependency(ElementIndex i) const { return std::get<Dependency>(elements_[i].data); }

    std::string const& name(ElementIndex i) const { return elements_[i].name; }
    std::optional<ElementIndex> find(std::string_view name) const;
    /// Like find, but throws UnknownElementError.
    ElementIndex require(std::string_view name) const;

    std::map<std::string, double> const& parameters() const { return parameters_; }
    std::vector<Label> const& labels() const { return labels_; }

    /// Declared parameter defaults overridden by `overrides`.
    std::map<std::string, double> valuation(std::map<std::string, double> const& overrides = {}) const;

    /// Returns the set of elements reachable from `root` via gate->child edges (the module of root).
    std::vector<ElementIndex> moduleOf(ElementIndex root) const;

    std::vector<Diagnostic> validate() const;
    /// Throws ValidationError listing all diagnostics if validate() is non-empty.
    void requireValid() const;

   private:
    struct Element {
        std::string name;
        std::variant<BasicEvent, Gate, Dependency> data;
    };

    std::vector<Element> elements_;
    std::unordered_map<std::string, ElementIndex> byName_;
    ElementIndex top_ = kNoElement;
    std::map<std::string, double> parameters_;
    std::vector<Label> labels_;
};

}  // namespace dftsafe

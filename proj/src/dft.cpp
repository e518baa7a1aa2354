#include "dftsafe/dft.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "dftsafe/errors.hpp"

namespace dftsafe {

// --- LabelExpr -------------------------------------------------------------

LabelExpr LabelExpr::failed(ElementIndex element) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Failed;
    node->element = element;
    return LabelExpr(std::move(node));
}

LabelExpr LabelExpr::negation(LabelExpr operand) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Not;
    node->lhs = operand.node_;
    return LabelExpr(std::move(node));
}

LabelExpr LabelExpr::conjunction(LabelExpr lhs, LabelExpr rhs) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::And;
    node->lhs = lhs.node_;
    node->rhs = rhs.node_;
    return LabelExpr(std::move(node));
}

LabelExpr LabelExpr::disjunction(LabelExpr lhs, LabelExpr rhs) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Or;
    node->lhs = lhs.node_;
    node->rhs = rhs.node_;
    return LabelExpr(std::move(node));
}

void LabelExpr::collectAtoms(std::vector<ElementIndex>& out) const {
    switch (node_->kind) {
        case Kind::Failed:
            out.push_back(node_->element);
            break;
        case Kind::Not:
            LabelExpr(node_->lhs).collectAtoms(out);
            break;
        case Kind::And:
        case Kind::Or:
            LabelExpr(node_->lhs).collectAtoms(out);
            LabelExpr(node_->rhs).collectAtoms(out);
            break;
    }
}

LabelExpr LabelExpr::remapped(std::vector<ElementIndex> const& map) const {
    switch (node_->kind) {
        case Kind::Failed:
            return failed(map[node_->element]);
        case Kind::Not:
            return negation(LabelExpr(node_->lhs).remapped(map));
        case Kind::And:
            return conjunction(LabelExpr(node_->lhs).remapped(map), LabelExpr(node_->rhs).remapped(map));
        case Kind::Or:
            return disjunction(LabelExpr(node_->lhs).remapped(map), LabelExpr(node_->rhs).remapped(map));
    }
    return *this;
}

std::string LabelExpr::str(Dft const& dft) const {
    switch (node_->kind) {
        case Kind::Failed:
            return "failed(" + dft.name(node_->element) + ")";
        case Kind::Not:
            return "!(" + LabelExpr(node_->lhs).str(dft) + ")";
        case Kind::And:
            return "(" + LabelExpr(node_->lhs).str(dft) + " & " + LabelExpr(node_->rhs).str(dft) + ")";
        case Kind::Or:
            return "(" + LabelExpr(node_->lhs).str(dft) + " | " + LabelExpr(node_->rhs).str(dft) + ")";
    }
    return "";
}

namespace {

class LabelParser {
   public:
    LabelParser(std::string_view text, Dft const& dft) : text_(text), dft_(dft) {}

    LabelExpr parse() {
        LabelExpr result = orExpr();
        skipSpace();
        if (pos_ != text_.size()) {
            fail("trailing characters");
        }
        return result;
    }

   private:
    LabelExpr orExpr() {
        LabelExpr result = andExpr();
        skipSpace();
        while (peek() == '|') {
            ++pos_;
            result = LabelExpr::disjunction(result, andExpr());
            skipSpace();
        }
        return result;
    }

    LabelExpr andExpr() {
        LabelExpr result = unary();
        skipSpace();
        while (peek() == '&') {
            ++pos_;
            result = LabelExpr::conjunction(result, unary());
            skipSpace();
        }
        return result;
    }

    LabelExpr unary() {
        skipSpace();
        char c = peek();
        if (c == '!') {
            ++pos_;
            return LabelExpr::negation(unary());
        }
        if (c == '(') {
            ++pos_;
            LabelExpr inner = orExpr();
            skipSpace();
            expect(')');
            return inner;
        }
        // failed(<id>)
        static constexpr std::string_view kFailed = "failed";
        if (text_.substr(pos_).starts_with(kFailed)) {
            pos_ += kFailed.size();
            skipSpace();
            expect('(');
            skipSpace();
            std::string id;
            if (peek() == '"') {
                ++pos_;
                while (pos_ < text_.size() && text_[pos_] != '"') {
                    id += text_[pos_++];
                }
                expect('"');
            } else {
                while (pos_ < text_.size() && text_[pos_] != ')' &&
                       !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                    id += text_[pos_++];
                }
            }
            skipSpace();
            expect(')');
            return LabelExpr::failed(dft_.require(id));
        }
        fail("expected 'failed(<id>)', '!', or '('");
        return LabelExpr::failed(kNoElement);
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void expect(char c) {
        if (peek() != c) {
            fail(std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    void skipSpace() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    [[noreturn]] void fail(std::string const& message) {
        throw DftError("label expression error: " + message + " in '" + std::string(text_) + "'");
    }

    std::string_view text_;
    Dft const& dft_;
    std::size_t pos_ = 0;
};

}  // namespace

LabelExpr LabelExpr::parse(std::string_view text, Dft const& dft) {
    return LabelParser(text, dft).parse();
}

// --- Dft -------------------------------------------------------------------

ElementIndex Dft::addBasicEvent(std::string name, BasicEvent be) {
    if (byName_.contains(name)) {
        throw ValidationError("duplicate element id '" + name + "'");
    }
    ElementIndex index = static_cast<ElementIndex>(elements_.size());
    byName_.emplace(name, index);
    elements_.push_back({std::move(name), std::move(be)});
    return index;
}

ElementIndex Dft::addGate(std::string name, GateKind kind, std::vector<ElementIndex> children,
                          std::uint32_t threshold) {
    if (byName_.contains(name)) {
        throw ValidationError("duplicate element id '" + name + "'");
    }
    ElementIndex index = static_cast<ElementIndex>(elements_.size());
    byName_.emplace(name, index);
    elements_.push_back({std::move(name), Gate{kind, threshold, std::move(children)}});
    return index;
}

ElementIndex Dft::addDependency(std::string name, DependencyKind kind, ElementIndex trigger,
                                std::vector<ElementIndex> targets) {
    if (byName_.contains(name)) {
        throw ValidationError("duplicate element id '" + name + "'");
    }
    ElementIndex index = static_cast<ElementIndex>(elements_.size());
    byName_.emplace(name, index);
    elements_.push_back({std::move(name), Dependency{kind, trigger, std::move(targets)}});
    return index;
}

void Dft::declareParameter(std::string name, double defaultValue) {
    parameters_[std::move(name)] = defaultValue;
}

void Dft::setGateChildren(ElementIndex gate, std::vector<ElementIndex> children) {
    std::get<Gate>(elements_[gate].data).children = std::move(children);
}

void Dft::setDependencyWiring(ElementIndex dep, ElementIndex trigger, std::vector<ElementIndex> targets) {
    auto& d = std::get<Dependency>(elements_[dep].data);
    d.trigger = trigger;
    d.targets = std::move(targets);
}

std::optional<ElementIndex> Dft::find(std::string_view name) const {
    auto it = byName_.find(std::string(name));
    if (it == byName_.end()) {
        return std::nullopt;
    }
    return it->second;
}

ElementIndex Dft::require(std::string_view name) const {
    auto found = find(name);
    if (!found) {
        throw UnknownElementError("unknown element '" + std::string(name) + "'");
    }
    return *found;
}

std::map<std::string, double> Dft::valuation(std::map<std::string, double> const& overrides) const {
    std::map<std::string, double> result = parameters_;
    for (auto const& [key, value] : overrides) {
        result[key] = value;
    }
    return result;
}

std::vector<ElementIndex> Dft::moduleOf(ElementIndex root) const {
    std::vector<char> seen(size(), 0);
    std::vector<ElementIndex> stack{root};
    std::vector<ElementIndex> result;
    seen[root] = 1;
    while (!stack.empty()) {
        ElementIndex current = stack.back();
        stack.pop_back();
        result.push_back(current);
        if (isGate(current)) {
            for (ElementIndex child : gate(current).children) {
                if (!seen[child]) {
                    seen[child] = 1;
                    stack.push_back(child);
                }
            }
        }
    }
    std::sort(result.begin(), result.end());
    return result;
}

namespace {

char const* gateKindName(GateKind kind) {
    switch (kind) {
        case GateKind::And:
            return "AND";
        case GateKind::Or:
            return "OR";
        case GateKind::Vot:
            return "VOT";
        case GateKind::Pand:
            return "PAND";
        case GateKind::Seq:
            return "SEQ";
        case GateKind::Spare:
            return "SPARE";
    }
    return "?";
}

}  // namespace

std::vector<Diagnostic> Dft::validate() const {
    std::vector<Diagnostic> diagnostics;
    auto report = [&](ElementIndex element, std::string message) {
        diagnostics.push_back({elements_[element].name, std::move(message)});
    };

    if (top_ == kNoElement || top_ >= size()) {
        diagnostics.push_back({"<top>", "no top-level element designated"});
        return diagnostics;
    }
    if (isDependency(top_)) {
        report(top_, "top-level element must be a gate or basic event");
    }
    if (isGate(top_) && gate(top_).kind == GateKind::Seq) {
        report(top_, "top-level element must not be a SEQ");
    }

    std::set<std::string> usedParameters;
    std::vector<char> isGateChild(size(), 0);
    std::vector<char> spareChild(size(), 0);

    for (ElementIndex i = 0; i < size(); ++i) {
        if (isBasicEvent(i)) {
            BasicEvent const& be = basicEvent(i);
            if (be.dormancy < 0.0 || be.dormancy > 1.0) {
                report(i, "dormancy outside [0,1]");
            }
            if (be.dummy && !be.rate.isLiteralZero()) {
                report(i, "dummy basic event must have the zero rate");
            }
            if (be.transient && be.dummy) {
                report(i, "transient basic event cannot be dummy");
            }
            be.rate.collectParameters(usedParameters);
        } else if (isGate(i)) {
            Gate const& g = gate(i);
            if (g.children.empty()) {
                report(i, std::string(gateKindName(g.kind)) + " gate has no children");
                continue;
            }
            for (ElementIndex child : g.children) {
                if (child >= size()) {
                    report(i, "child reference out of range");
                    continue;
                }
                if (isDependency(child)) {
                    report(i, "dependency '" + elements_[child].name + "' used as a gate child");
                }
                if (isGate(child) && gate(child).kind == GateKind::Seq) {
                    report(i, "SEQ '" + elements_[child].name + "' used as a gate child");
                }
                isGateChild[child] = 1;
            }
            if (g.kind == GateKind::Vot) {
                if (g.threshold < 1) {
                    report(i, "VOT threshold must be at least 1");
                }
                if (g.threshold > g.children.size()) {
                    report(i, "VOT threshold exceeds child count");
                }
            }
            if (g.kind == GateKind::Seq) {
                for (ElementIndex child : g.children) {
                    if (child < size() && !isBasicEvent(child)) {
                        report(i, "SEQ child '" + elements_[child].name + "' is not a basic event");
                    }
                }
            }
            if (g.kind == GateKind::Spare) {
                // Spare children must be roots of pairwise independent modules,
                // and no element may serve as a child of two SPAREs.
                std::vector<std::vector<ElementIndex>> modules;
                for (ElementIndex child : g.children) {
                    if (child >= size()) {
                        continue;
                    }
                    if (spareChild[child]) {
                        report(i, "element '" + elements_[child].name + "' is a child of two SPAREs");
                    }
                    spareChild[child] = 1;
                    modules.push_back(moduleOf(child));
                }
                for (std::size_t a = 0; a < modules.size(); ++a) {
                    for (std::size_t b = a + 1; b < modules.size(); ++b) {
                        std::vector<ElementIndex> common;
                        std::set_intersection(modules[a].begin(), modules[a].end(), modules[b].begin(),
                                              modules[b].end(), std::back_inserter(common));
                        if (!common.empty()) {
                            report(i, "SPARE children share element '" + elements_[common.front()].name + "'");
                        }
                    }
                }
            }
        } else {
            Dependency const& d = dependency(i);
            if (d.trigger >= size()) {
                report(i, "dependency trigger out of range");
            } else if (isDependency(d.trigger)) {
                report(i, "dependency trigger must be a gate or basic event");
            }
            if (d.targets.empty()) {
                report(i, "dependency has no targets");
            }
            for (ElementIndex target : d.targets) {
                if (target >= size()) {
                    report(i, "dependency target out of range");
                    continue;
                }
                if (d.kind == DependencyKind::Fdep && !isBasicEvent(target)) {
                    report(i, "FDEP target '" + elements_[target].name + "' is not a basic event");
                }
                if (d.kind == DependencyKind::Adep && isDependency(target)) {
                    report(i, "ADEP destination must not be a dependency");
                }
            }
        }
    }

    // Cycle detection over gate->child edges.
    std::vector<int> color(size(), 0);  // 0 new, 1 on stack, 2 done
    bool cycle = false;
    auto dfs = [&](auto&& self, ElementIndex node) -> void {
        color[node] = 1;
        if (isGate(node)) {
            for (ElementIndex child : gate(node).children) {
                if (child >= size()) {
                    continue;
                }
                if (color[child] == 1) {
                    cycle = true;
                } else if (color[child] == 0) {
                    self(self, child);
                }
            }
        }
        color[node] = 2;
    };
    for (ElementIndex i = 0; i < size(); ++i) {
        if (color[i] == 0) {
            dfs(dfs, i);
        }
    }
    if (cycle) {
        diagnostics.push_back({"<graph>", "cycle detected over gate->child edges"});
    }

    for (auto const& label : labels_) {
        std::vector<ElementIndex> atoms;
        label.condition.collectAtoms(atoms);
        for (ElementIndex atom : atoms) {
            if (atom >= size()) {
                diagnostics.push_back({label.name, "label references unknown element"});
            }
        }
        if (label.name == "failed") {
            diagnostics.push_back({label.name, "'failed' is a reserved label name"});
        }
    }

    for (auto const& parameter : usedParameters) {
        if (!parameters_.contains(parameter)) {
            diagnostics.push_back({parameter, "rate parameter used but not declared"});
        }
    }

    return diagnostics;
}

void Dft::requireValid() const {
    auto diagnostics = validate();
    if (diagnostics.empty()) {
        return;
    }
    std::ostringstream message;
    message << "invalid fault tree:";
    for (auto const& d : diagnostics) {
        message << "\n  " << d.element << ": " << d.message;
    }
    throw ValidationError(message.str());
}

}  // namespace dftsafe

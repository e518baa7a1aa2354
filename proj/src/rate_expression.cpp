#include "dftsafe/rate_expression.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

#include "dftsafe/errors.hpp"

namespace dftsafe {

RateExpr::RateExpr() : node_(nullptr) {}

RateExpr RateExpr::constant(double value) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Constant;
    node->value = value;
    return RateExpr(std::move(node));
}

RateExpr RateExpr::parameter(std::string name) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Parameter;
    node->param = std::move(name);
    return RateExpr(std::move(node));
}

RateExpr RateExpr::operator+(RateExpr const& other) const {
    if (isLiteralZero()) {
        return other;
    }
    if (other.isLiteralZero()) {
        return *this;
    }
    auto node = std::make_shared<Node>();
    node->kind = Kind::Add;
    node->lhs = node_;
    node->rhs = other.node_;
    return RateExpr(std::move(node));
}

RateExpr RateExpr::operator*(RateExpr const& other) const {
    if (isLiteralZero() || other.isLiteralZero()) {
        return RateExpr();
    }
    auto node = std::make_shared<Node>();
    node->kind = Kind::Mul;
    node->lhs = node_;
    node->rhs = other.node_;
    return RateExpr(std::move(node));
}

double RateExpr::evaluate(std::map<std::string, double> const& valuation) const {
    if (!node_) {
        return 0.0;
    }
    switch (node_->kind) {
        case Kind::Constant:
            return node_->value;
        case Kind::Parameter: {
            auto it = valuation.find(node_->param);
            if (it == valuation.end()) {
                throw MissingParameterError("undeclared parameter '" + node_->param + "'");
            }
            return it->second;
        }
        case Kind::Add:
            return RateExpr(node_->lhs).evaluate(valuation) + RateExpr(node_->rhs).evaluate(valuation);
        case Kind::Mul:
            return RateExpr(node_->lhs).evaluate(valuation) * RateExpr(node_->rhs).evaluate(valuation);
    }
    return 0.0;
}

bool RateExpr::isLiteralZero() const {
    return !node_ || (node_->kind == Kind::Constant && node_->value == 0.0);
}

void RateExpr::collectParameters(std::set<std::string>& out) const {
    if (!node_) {
        return;
    }
    switch (node_->kind) {
        case Kind::Constant:
            break;
        case Kind::Parameter:
            out.insert(node_->param);
            break;
        case Kind::Add:
        case Kind::Mul:
            RateExpr(node_->lhs).collectParameters(out);
            RateExpr(node_->rhs).collectParameters(out);
            break;
    }
}

void RateExpr::print(Node const& node, std::string& out, bool parenthesizeAdd) {
    switch (node.kind) {
        case Kind::Constant: {
            char buffer[32];
            auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), node.value);
            out.append(buffer, end);
            break;
        }
        case Kind::Parameter:
            out += node.param;
            break;
        case Kind::Add:
            if (parenthesizeAdd) {
                out += '(';
            }
            print(*node.lhs, out, false);
            out += '+';
            print(*node.rhs, out, false);
            if (parenthesizeAdd) {
                out += ')';
            }
            break;
        case Kind::Mul:
            print(*node.lhs, out, true);
            out += '*';
            print(*node.rhs, out, true);
            break;
    }
}

std::string RateExpr::str() const {
    if (!node_) {
        return "0";
    }
    std::string out;
    print(*node_, out, false);
    return out;
}

namespace {

class ExprParser {
   public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    RateExpr parse() {
        RateExpr result = expression();
        skipSpace();
        if (pos_ != text_.size()) {
            fail("trailing characters in rate expression");
        }
        return result;
    }

   private:
    RateExpr expression() {
        RateExpr result = term();
        skipSpace();
        while (pos_ < text_.size() && text_[pos_] == '+') {
            ++pos_;
            result = result + term();
            skipSpace();
        }
        return result;
    }

    RateExpr term() {
        RateExpr result = factor();
        skipSpace();
        while (pos_ < text_.size() && text_[pos_] == '*') {
            ++pos_;
            result = result * factor();
            skipSpace();
        }
        return result;
    }

    RateExpr factor() {
        skipSpace();
        if (pos_ >= text_.size()) {
            fail("unexpected end of rate expression");
        }
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            RateExpr inner = expression();
            skipSpace();
            if (pos_ >= text_.size() || text_[pos_] != ')') {
                fail("missing ')' in rate expression");
            }
            ++pos_;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            char const* begin = text_.data() + pos_;
            char* end = nullptr;
            double value = std::strtod(begin, &end);
            if (end == begin) {
                fail("malformed number in rate expression");
            }
            pos_ += static_cast<std::size_t>(end - begin);
            return RateExpr::constant(value);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '.')) {
                ++pos_;
            }
            return RateExpr::parameter(std::string(text_.substr(start, pos_ - start)));
        }
        fail("unexpected character in rate expression");
        return RateExpr();
    }

    void skipSpace() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    [[noreturn]] void fail(std::string const& message) {
        throw DftError(message + " in '" + std::string(text_) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

RateExpr RateExpr::parse(std::string_view text) {
    return ExprParser(text).parse();
}

}  // namespace dftsafe

#include "dftsafe/text_format.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <vector>

#include "dftsafe/errors.hpp"

namespace dftsafe {

namespace {

struct Token {
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;
    std::size_t end = 0;  // byte offset one past the token in the source
    bool quoted = false;
    bool semicolon = false;
};

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t i = 0;
    auto advance = [&](char c) {
        if (c == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
        ++i;
    };
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(c);
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n') {
                advance(text[i]);
            }
            continue;
        }
        if (c == ';') {
            tokens.push_back({";", line, column, i + 1, false, true});
            advance(c);
            continue;
        }
        Token token;
        token.line = line;
        token.column = column;
        if (c == '"') {
            token.quoted = true;
            advance(c);
            while (i < text.size() && text[i] != '"') {
                token.text += text[i];
                advance(text[i]);
            }
            if (i >= text.size()) {
                throw ParseError("unterminated quoted id", token.line, token.column);
            }
            advance('"');
        } else {
            while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != ';') {
                token.text += text[i];
                advance(text[i]);
            }
        }
        token.end = i;
        tokens.push_back(std::move(token));
    }
    return tokens;
}

struct Statement {
    std::vector<Token> tokens;
    std::size_t sourceEnd = 0;  // byte offset of the terminating ';'
};

std::vector<Statement> splitStatements(std::vector<Token> tokens) {
    std::vector<Statement> statements;
    Statement current;
    for (auto& token : tokens) {
        if (token.semicolon) {
            if (!current.tokens.empty()) {
                current.sourceEnd = token.end - 1;
                statements.push_back(std::move(current));
                current = {};
            }
            continue;
        }
        current.tokens.push_back(std::move(token));
    }
    if (!current.tokens.empty()) {
        Token const& first = current.tokens.front();
        throw ParseError("statement not terminated by ';'", first.line, first.column);
    }
    return statements;
}

std::optional<std::pair<std::uint32_t, std::uint32_t>> parseVotKeyword(std::string const& text) {
    std::size_t at = text.find("of");
    if (at == std::string::npos || at == 0 || at + 2 >= text.size()) {
        return std::nullopt;
    }
    std::uint32_t k = 0;
    std::uint32_t n = 0;
    auto kResult = std::from_chars(text.data(), text.data() + at, k);
    auto nResult = std::from_chars(text.data() + at + 2, text.data() + text.size(), n);
    if (kResult.ec != std::errc{} || kResult.ptr != text.data() + at || nResult.ec != std::errc{} ||
        nResult.ptr != text.data() + text.size()) {
        return std::nullopt;
    }
    return std::make_pair(k, n);
}

double parseDouble(Token const& token, std::string_view text) {
    char const* begin = text.data();
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end != begin + text.size() || text.empty()) {
        throw ParseError("malformed number '" + std::string(text) + "'", token.line, token.column);
    }
    return value;
}

bool isBareSafe(std::string const& id) {
    if (id.empty()) {
        return false;
    }
    static std::vector<std::string> const keywords = {"toplevel", "param", "label", "when",  "and",  "or",
                                                      "pand",     "seq",   "wsp",  "fdep",  "adep", "transient",
                                                      "dummy"};
    for (auto const& keyword : keywords) {
        if (id == keyword) {
            return false;
        }
    }
    if (parseVotKeyword(id)) {
        return false;
    }
    if (id.starts_with("lambda=") || id.starts_with("dorm=")) {
        return false;
    }
    for (char c : id) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.' && c != ':' && c != '-') {
            return false;
        }
    }
    return true;
}

std::string quoteId(std::string const& id) {
    if (isBareSafe(id)) {
        return id;
    }
    return '"' + id + '"';
}

std::string formatDouble(double value) {
    char buffer[32];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, end);
}

}  // namespace

Dft parseDft(std::string_view text) {
    auto statements = splitStatements(lex(text));
    Dft dft;

    // First pass: declare all elements and parameters so that references may
    // appear before their definitions.
    for (auto const& statement : statements) {
        auto const& tokens = statement.tokens;
        Token const& head = tokens.front();
        auto fail = [&](std::string const& message, Token const& at) -> void {
            throw ParseError(message, at.line, at.column);
        };
        if (!head.quoted && (head.text == "toplevel" || head.text == "label")) {
            continue;
        }
        if (!head.quoted && head.text == "param") {
            if (tokens.size() != 2) {
                fail("expected 'param <name>=<float>;'", head);
            }
            std::string const& assignment = tokens[1].text;
            std::size_t eq = assignment.find('=');
            if (eq == std::string::npos || eq == 0) {
                fail("expected '<name>=<float>' after 'param'", tokens[1]);
            }
            dft.declareParameter(assignment.substr(0, eq), parseDouble(tokens[1], assignment.substr(eq + 1)));
            continue;
        }
        if (tokens.size() < 2) {
            fail("incomplete statement", head);
        }
        Token const& kind = tokens[1];
        try {
            if (!kind.quoted && kind.text.starts_with("lambda=")) {
                BasicEvent be;
                be.rate = RateExpr::parse(kind.text.substr(7));
                for (std::size_t i = 2; i < tokens.size(); ++i) {
                    std::string const& option = tokens[i].text;
                    if (option.starts_with("dorm=")) {
                        be.dormancy = parseDouble(tokens[i], std::string_view(option).substr(5));
                    } else if (option == "transient") {
                        be.transient = true;
                    } else if (option == "dummy") {
                        be.dummy = true;
                    } else {
                        fail("unknown basic-event option '" + option + "'", tokens[i]);
                    }
                }
                dft.addBasicEvent(head.text, std::move(be));
            } else if (!kind.quoted && (kind.text == "fdep" || kind.text == "adep")) {
                dft.addDependency(head.text, kind.text == "fdep" ? DependencyKind::Fdep : DependencyKind::Adep,
                                  kNoElement, {});
            } else if (!kind.quoted &&
                       (kind.text == "and" || kind.text == "or" || kind.text == "pand" || kind.text == "seq" ||
                        kind.text == "wsp")) {
                GateKind gateKind = GateKind::And;
                if (kind.text == "or") {
                    gateKind = GateKind::Or;
                } else if (kind.text == "pand") {
                    gateKind = GateKind::Pand;
                } else if (kind.text == "seq") {
                    gateKind = GateKind::Seq;
                } else if (kind.text == "wsp") {
                    gateKind = GateKind::Spare;
                }
                dft.addGate(head.text, gateKind, {});
            } else if (auto vot = !kind.quoted ? parseVotKeyword(kind.text) : std::nullopt) {
                if (tokens.size() - 2 != vot->second) {
                    fail("VOT declares " + std::to_string(vot->second) + " children but lists " +
                             std::to_string(tokens.size() - 2),
                         kind);
                }
                dft.addGate(head.text, GateKind::Vot, {}, vot->first);
            } else {
                fail("unknown statement kind '" + kind.text + "'", kind);
            }
        } catch (ValidationError const& error) {
            fail(error.what(), head);
        } catch (DftError const& error) {
            if (dynamic_cast<ParseError const*>(&error)) {
                throw;
            }
            fail(error.what(), kind);
        }
    }

    // Second pass: resolve references, the top-level marker, and labels.
    auto resolve = [&](Token const& token) -> ElementIndex {
        auto found = dft.find(token.text);
        if (!found) {
            throw ParseError("unknown element '" + token.text + "'", token.line, token.column);
        }
        return *found;
    };
    bool haveTop = false;
    for (auto const& statement : statements) {
        auto const& tokens = statement.tokens;
        Token const& head = tokens.front();
        if (!head.quoted && head.text == "param") {
            continue;
        }
        if (!head.quoted && head.text == "toplevel") {
            if (tokens.size() != 2) {
                throw ParseError("expected 'toplevel <id>;'", head.line, head.column);
            }
            if (haveTop) {
                throw ParseError("duplicate 'toplevel' statement", head.line, head.column);
            }
            haveTop = true;
            dft.setTop(resolve(tokens[1]));
            continue;
        }
        if (!head.quoted && head.text == "label") {
            if (tokens.size() < 4 || tokens[2].quoted || tokens[2].text != "when") {
                throw ParseError("expected 'label <name> when <expr>;'", head.line, head.column);
            }
            std::string_view raw = text.substr(tokens[2].end, statement.sourceEnd - tokens[2].end);
            try {
                dft.addLabel({tokens[1].text, LabelExpr::parse(raw, dft)});
            } catch (DftError const& error) {
                throw ParseError(error.what(), tokens[3].line, tokens[3].column);
            }
            continue;
        }
        Token const& kind = tokens[1];
        ElementIndex self = *dft.find(head.text);
        if (dft.isGate(self)) {
            std::vector<ElementIndex> children;
            for (std::size_t i = 2; i < tokens.size(); ++i) {
                children.push_back(resolve(tokens[i]));
            }
            if (children.empty()) {
                throw ParseError("gate '" + head.text + "' has no children", kind.line, kind.column);
            }
            dft.setGateChildren(self, std::move(children));
        } else if (dft.isDependency(self)) {
            if (tokens.size() < 4) {
                throw ParseError("dependency '" + head.text + "' needs a trigger and at least one target",
                                 kind.line, kind.column);
            }
            std::vector<ElementIndex> targets;
            for (std::size_t i = 3; i < tokens.size(); ++i) {
                targets.push_back(resolve(tokens[i]));
            }
            dft.setDependencyWiring(self, resolve(tokens[2]), std::move(targets));
        }
    }
    return dft;
}

std::string serializeDft(Dft const& dft) {
    std::ostringstream out;
    if (dft.top() != kNoElement) {
        out << "toplevel " << quoteId(dft.name(dft.top())) << ";\n";
    }
    for (auto const& [name, value] : dft.parameters()) {
        out << "param " << name << "=" << formatDouble(value) << ";\n";
    }
    for (ElementIndex i = 0; i < dft.size(); ++i) {
        out << quoteId(dft.name(i));
        if (dft.isBasicEvent(i)) {
            BasicEvent const& be = dft.basicEvent(i);
            out << " lambda=" << be.rate.str();
            if (be.dormancy != 1.0) {
                out << " dorm=" << formatDouble(be.dormancy);
            }
            if (be.transient) {
                out << " transient";
            }
            if (be.dummy) {
                out << " dummy";
            }
        } else if (dft.isGate(i)) {
            Gate const& g = dft.gate(i);
            switch (g.kind) {
                case GateKind::And:
                    out << " and";
                    break;
                case GateKind::Or:
                    out << " or";
                    break;
                case GateKind::Pand:
                    out << " pand";
                    break;
                case GateKind::Seq:
                    out << " seq";
                    break;
                case GateKind::Spare:
                    out << " wsp";
                    break;
                case GateKind::Vot:
                    out << " " << g.threshold << "of" << g.children.size();
                    break;
            }
            for (ElementIndex child : g.children) {
                out << " " << quoteId(dft.name(child));
            }
        } else {
            Dependency const& d = dft.dependency(i);
            out << (d.kind == DependencyKind::Fdep ? " fdep " : " adep ") << quoteId(dft.name(d.trigger));
            for (ElementIndex target : d.targets) {
                out << " " << quoteId(dft.name(target));
            }
        }
        out << ";\n";
    }
    for (auto const& label : dft.labels()) {
        out << "label " << label.name << " when " << label.condition.str(dft) << ";\n";
    }
    return out.str();
}

}  // namespace dftsafe

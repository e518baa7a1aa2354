#pragma once

#include <string>

#include "dftsafe/text_format.hpp"

namespace dftsafe::tests {

/// Canonical hand-analyzable fault trees used across the test suites.
inline Dft fixtureOr() {
    return parseDft("toplevel T; T or A B; A lambda=0.001; B lambda=0.002;");
}

inline Dft fixtureAnd() {
    return parseDft("toplevel T; T and A B; A lambda=1; B lambda=2;");
}

inline Dft fixturePand() {
    return parseDft("toplevel T; T pand A B; A lambda=1; B lambda=1;");
}

inline Dft fixtureColdSpare() {
    return parseDft("toplevel T; T wsp P S; P lambda=1; S lambda=1 dorm=0;");
}

inline Dft fixtureWarmSpare() {
    return parseDft("toplevel T; T wsp P S; P lambda=1; S lambda=1 dorm=0.5;");
}

inline Dft fixtureVot() {
    return parseDft("toplevel T; T 2of3 A B C; A lambda=1; B lambda=1; C lambda=1;");
}

inline Dft fixtureTransient(bool transientFlag = true) {
    std::string text = "toplevel T; T and P X; P lambda=1; X lambda=1";
    if (transientFlag) {
        text += " transient";
    }
    return parseDft(text + ";");
}

inline Dft fixtureDegradedAnd() {
    return parseDft(
        "toplevel T; T and A B; A lambda=1; B lambda=2;"
        "label degraded when failed(A) | failed(B);");
}

inline Dft fixtureDegradedWarmSpare() {
    return parseDft(
        "toplevel T; T wsp P S; P lambda=1; S lambda=1 dorm=0.5;"
        "label degraded when failed(P);");
}

}  // namespace dftsafe::tests

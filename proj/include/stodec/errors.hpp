#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace stodec {

// Base for all library errors. `code()` is a stable machine-readable tag,
// `what()` carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct GraphError : Error {
    explicit GraphError(const std::string& m) : Error("graph_invalid", m) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& m) : Error("parse_error", m) {}
};

struct DegenerateMass : Error {
    explicit DegenerateMass(const std::string& m) : Error("degenerate_mass", m) {}
};

struct BetaOutOfRange : Error {
    explicit BetaOutOfRange(const std::string& m) : Error("beta_out_of_range", m) {}
};

struct EmptyHistogram : Error {
    explicit EmptyHistogram(const std::string& m) : Error("empty_histogram", m) {}
};

struct IncompletePacket : Error {
    explicit IncompletePacket(const std::string& m) : Error("incomplete_packet", m) {}
};

struct UncoveredCycle : Error {
    explicit UncoveredCycle(const std::string& m) : Error("uncovered_cycle", m) {}
};

struct CodebookTooLarge : Error {
    explicit CodebookTooLarge(const std::string& m) : Error("codebook_too_large", m) {}
};

struct LengthMismatch : Error {
    explicit LengthMismatch(const std::string& m) : Error("length_mismatch", m) {}
};

struct ConfigInvalid : Error {
    explicit ConfigInvalid(const std::string& m) : Error("config_invalid", m) {}
};

}  // namespace stodec

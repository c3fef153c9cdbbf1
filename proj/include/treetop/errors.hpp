#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace treetop {

/// Base of every error the library raises for a violated contract.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed JSON input or a payload of the wrong shape.
class SchemaError : public Error {
public:
    using Error::Error;
};

class BadParams : public Error {
public:
    using Error::Error;
};

class UnknownNode : public Error {
public:
    explicit UnknownNode(std::uint64_t id)
        : Error("unknown node " + std::to_string(id)), id_(id) {}
    std::uint64_t id() const { return id_; }

private:
    std::uint64_t id_;
};

class NotAnExtension : public Error {
public:
    using Error::Error;
};

class PayloadMismatch : public Error {
public:
    using Error::Error;
};

class PartialLabel : public Error {
public:
    using Error::Error;
};

/// An order-preservation failure carrying the offending comparable pair (lower, upper).
class OrderViolation : public Error {
public:
    OrderViolation(const std::string& what, std::uint64_t lower, std::uint64_t upper)
        : Error(what + " at pair (" + std::to_string(lower) + ", " + std::to_string(upper) + ")"),
          pair_(lower, upper) {}
    std::pair<std::uint64_t, std::uint64_t> pair() const { return pair_; }

private:
    std::pair<std::uint64_t, std::uint64_t> pair_;
};

class NotStrict : public OrderViolation {
public:
    NotStrict(std::uint64_t lower, std::uint64_t upper)
        : OrderViolation("label is not strictly order preserving", lower, upper) {}
};

class NotLexStrict : public OrderViolation {
public:
    NotLexStrict(std::uint64_t lower, std::uint64_t upper)
        : OrderViolation("label is not lexicographically strict", lower, upper) {}
};

class NotMonotone : public OrderViolation {
public:
    NotMonotone(std::uint64_t lower, std::uint64_t upper)
        : OrderViolation("label is not order preserving", lower, upper) {}
};

class PreconditionFailed : public OrderViolation {
public:
    PreconditionFailed(std::uint64_t lower, std::uint64_t upper)
        : OrderViolation("h(s) >= h(t) + eps(t) fails", lower, upper) {}
    explicit PreconditionFailed(std::uint64_t node)
        : OrderViolation("eps must be positive", node, node) {}
};

class NotContinuous : public Error {
public:
    explicit NotContinuous(std::uint64_t node)
        : Error("label is not continuous at limit node " + std::to_string(node)), node_(node) {}
    std::uint64_t node() const { return node_; }

private:
    std::uint64_t node_;
};

class NotBaseLabeled : public Error {
public:
    using Error::Error;
};

class InvalidScheme : public Error {
public:
    using Error::Error;
};

class CandidateNotRational : public Error {
public:
    using Error::Error;
};

class UnknownPoint : public Error {
public:
    using Error::Error;
};

class PickExhausted : public Error {
public:
    using Error::Error;
};

}  // namespace treetop

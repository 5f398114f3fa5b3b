#pragma once

#include <stdexcept>
#include <string>

namespace crn {

/// Root of every error raised by the engine.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define CRN_DEFINE_ERROR(Name, Base)          \
  class Name : public Base {                  \
  public:                                     \
    using Base::Base;                         \
  }

// rulecore
CRN_DEFINE_ERROR(InvalidSymbol, Error);
CRN_DEFINE_ERROR(RuleTooLong, Error);
CRN_DEFINE_ERROR(DuplicateSymbol, Error);
CRN_DEFINE_ERROR(MissingScore, Error);
CRN_DEFINE_ERROR(UnknownLabel, Error);
CRN_DEFINE_ERROR(SchemaError, Error);

class ParseError : public Error {
public:
  ParseError(const std::string& what, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

// agents
CRN_DEFINE_ERROR(UnboundPlaceholder, Error);
CRN_DEFINE_ERROR(EmptyConceptList, Error);
CRN_DEFINE_ERROR(AmbiguousEntailment, Error);
CRN_DEFINE_ERROR(VerifierUnusable, Error);
CRN_DEFINE_ERROR(UnparseableReply, Error);
CRN_DEFINE_ERROR(AgentError, Error);
CRN_DEFINE_ERROR(MalformedReply, AgentError);
CRN_DEFINE_ERROR(MalformedRequest, AgentError);
CRN_DEFINE_ERROR(TimeoutError, AgentError);

class TransportError : public AgentError {
public:
  TransportError(const std::string& what, int status) : AgentError(what), status_(status) {}
  /// HTTP status, or 0 when no response arrived.
  int status() const { return status_; }

private:
  int status_;
};

// pipeline / metrics
CRN_DEFINE_ERROR(StageFailure, Error);
CRN_DEFINE_ERROR(VerificationFailure, StageFailure);
CRN_DEFINE_ERROR(MetricFailure, Error);
CRN_DEFINE_ERROR(DegenerateVariance, MetricFailure);
CRN_DEFINE_ERROR(ConfigError, Error);

#undef CRN_DEFINE_ERROR

}  // namespace crn

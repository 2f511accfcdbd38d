#pragma once

#include <stdexcept>
#include <string>

namespace isowill {

enum class ErrorKind {
  NotUnipotent,
  DegreeOverflow,
  NonintegrableResidue,
  PoleOfPotential,
  IntegrationDivergence,
  OutsideBigCell,
  StencilCrossesBigCellBoundary,
  PatternViolation,
  NonIsotropicPotential,
  DegenerateB1,
  NullOutput,
  DivideByZero,
  UnsupportedFormat,
  ParseError,
};

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotUnipotent: return "NotUnipotent";
    case ErrorKind::DegreeOverflow: return "DegreeOverflow";
    case ErrorKind::NonintegrableResidue: return "NonintegrableResidue";
    case ErrorKind::PoleOfPotential: return "PoleOfPotential";
    case ErrorKind::IntegrationDivergence: return "IntegrationDivergence";
    case ErrorKind::OutsideBigCell: return "OutsideBigCell";
    case ErrorKind::StencilCrossesBigCellBoundary: return "StencilCrossesBigCellBoundary";
    case ErrorKind::PatternViolation: return "PatternViolation";
    case ErrorKind::NonIsotropicPotential: return "NonIsotropicPotential";
    case ErrorKind::DegenerateB1: return "DegenerateB1";
    case ErrorKind::NullOutput: return "NullOutput";
    case ErrorKind::DivideByZero: return "DivideByZero";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind k, const std::string& msg)
      : std::runtime_error(std::string(kind_name(k)) + ": " + msg), kind_(k) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& msg)
      : Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace isowill

#pragma once

#include <stdexcept>
#include <string>

namespace ctd {

/// Base class for all engine errors. Carries the machine-readable code used
/// by the CLI to pick an exit status.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), m_code(std::move(code)) {}

  const std::string& code() const { return m_code; }

private:
  std::string m_code;
};

struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error("ParseError", what) {}
};

struct NonConstantTauContent : Error {
  explicit NonConstantTauContent(const std::string& what)
      : Error("NonConstantTauContent", what) {}
};

struct NoWittBasis : Error {
  explicit NoWittBasis(const std::string& what) : Error("NoWittBasis", what) {}
};

struct NotSkew : Error {
  explicit NotSkew(const std::string& what) : Error("NotSkew", what) {}
};

struct NotNilpotent : Error {
  explicit NotNilpotent(const std::string& what) : Error("NotNilpotent", what) {}
};

struct AdNotIso : Error {
  explicit AdNotIso(const std::string& what) : Error("AdNotIso", what) {}
};

struct ReducedRelationsViolated : Error {
  explicit ReducedRelationsViolated(const std::string& what)
      : Error("ReducedRelationsViolated", what) {}
};

struct UnsupportedK : Error {
  explicit UnsupportedK(const std::string& what) : Error("UnsupportedK", what) {}
};

struct NotInvariantInput : Error {
  explicit NotInvariantInput(const std::string& what)
      : Error("NotInvariantInput", what) {}
};

struct SingularSystem : Error {
  explicit SingularSystem(const std::string& what)
      : Error("SingularSystem", what) {}
};

struct NotClosed : Error {
  explicit NotClosed(const std::string& what) : Error("NotClosed", what) {}
};

struct NotIntegral : Error {
  explicit NotIntegral(const std::string& what) : Error("NotIntegral", what) {}
};

}  // namespace ctd

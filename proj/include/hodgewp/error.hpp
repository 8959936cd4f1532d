#pragma once

#include <stdexcept>
#include <string>

namespace hodgewp {

enum class ErrorKind {
  Input,
  Domain,
  Degeneracy,
  Parameter,
  Convergence,
  Ambiguity,
  Order,
  Singularity,
  HodgeRiemann,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Input: return "input";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Degeneracy: return "degeneracy";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::Ambiguity: return "ambiguity";
    case ErrorKind::Order: return "order";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::HodgeRiemann: return "hodge-riemann";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hodgewp

#pragma once

#include <stdexcept>
#include <string>

namespace conelift {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CONELIFT_ERROR(Name)                                  \
  class Name : public GeometryError {                         \
   public:                                                    \
    explicit Name(const std::string& what)                    \
        : GeometryError(std::string(#Name ": ") + what) {}    \
  };

CONELIFT_ERROR(SingularMetric)
CONELIFT_ERROR(DerivativeError)
CONELIFT_ERROR(DomainError)
CONELIFT_ERROR(RankDeficient)
CONELIFT_ERROR(NotNormal)
CONELIFT_ERROR(DimensionMismatch)
CONELIFT_ERROR(NotLegendrian)
CONELIFT_ERROR(NotSphereAmbient)
CONELIFT_ERROR(DegenerateCurve)
CONELIFT_ERROR(NoDescentStep)
CONELIFT_ERROR(ConfigError)

#undef CONELIFT_ERROR

}  // namespace conelift

#pragma once

#include <stdexcept>
#include <string>

namespace wrapnet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define WRAPNET_DEFINE_ERROR(Name)     \
  class Name : public Error {          \
   public:                             \
    using Error::Error;                \
  }

WRAPNET_DEFINE_ERROR(ParseError);
WRAPNET_DEFINE_ERROR(NonTriangleFace);
WRAPNET_DEFINE_ERROR(NonManifold);
WRAPNET_DEFINE_ERROR(InconsistentWinding);
WRAPNET_DEFINE_ERROR(DegenerateFace);
WRAPNET_DEFINE_ERROR(BoundaryEdge);
WRAPNET_DEFINE_ERROR(IsolatedVertex);
WRAPNET_DEFINE_ERROR(MissingDirection);
WRAPNET_DEFINE_ERROR(InvalidCutSet);
WRAPNET_DEFINE_ERROR(DisconnectedMesh);
WRAPNET_DEFINE_ERROR(InvalidNet);
WRAPNET_DEFINE_ERROR(InvalidConfig);
WRAPNET_DEFINE_ERROR(IOError);

#undef WRAPNET_DEFINE_ERROR

}  // namespace wrapnet

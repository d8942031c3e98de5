#pragma once

#include <stdexcept>
#include <string>

namespace aniso {

// Base class for all failures raised by the toolkit.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// dilation
struct NotExpansive : Error { using Error::Error; };
struct SingularInput : Error { using Error::Error; };
struct PowerOutOfRange : Error { using Error::Error; };

// quasinorm
struct ContractionFailed : Error { using Error::Error; };
struct BadRatio : Error { using Error::Error; };
struct ZeroVector : Error { using Error::Error; };
struct EmptySamples : Error { using Error::Error; };

// atoms
struct BadExponent : Error { using Error::Error; };
struct NotAdmissible : Error { using Error::Error; };
struct DegenerateProjection : Error { using Error::Error; };
struct TooCoarse : Error { using Error::Error; };

// fourier / verify
struct OrderTooHigh : Error { using Error::Error; };
struct EmptyAnnuli : Error { using Error::Error; };
struct ScaleMismatch : Error { using Error::Error; };

// rearrange
struct GridMismatch : Error { using Error::Error; };
struct NonpositiveThreshold : Error { using Error::Error; };

// cli / io
struct ConfigParse : Error { using Error::Error; };
struct FileFormat : Error { using Error::Error; };

}  // namespace aniso

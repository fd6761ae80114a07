#pragma once

#include <stdexcept>
#include <string>

namespace dicke {

// Base for every library error; the C API maps subclasses to status codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonHermitianInput : Error {
  using Error::Error;
};
struct MaskLengthMismatch : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct AlphaOutOfRange : Error {
  using Error::Error;
};
struct MissingSetting : Error {
  using Error::Error;
};
struct InvalidDistribution : Error {
  using Error::Error;
};
struct TooFewShots : Error {
  using Error::Error;
};
struct DesignMismatch : Error {
  using Error::Error;
};
struct EmptyDataset : Error {
  using Error::Error;
};
struct SampleTooSmall : Error {
  using Error::Error;
};
struct AllPointsUnphysical : Error {
  using Error::Error;
};
struct NegativeProbability : Error {
  using Error::Error;
};
struct InvalidPartition : Error {
  using Error::Error;
};
struct NoSignChange : Error {
  using Error::Error;
};
struct AllZeroWeights : Error {
  using Error::Error;
};
struct ConfigInvalid : Error {
  using Error::Error;
};

}  // namespace dicke

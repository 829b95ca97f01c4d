#pragma once

#include <stdexcept>
#include <string>

namespace lattherm {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A local operator's support is not contained in the target volume.
class SupportNotContained : public Error {
 public:
  using Error::Error;
};

// Two objects live on different volumes (or site spaces) where they must agree.
class VolumeMismatch : public Error {
 public:
  using Error::Error;
};

// The requested state dimension exceeds the configured cap.
class VolumeTooLarge : public Error {
 public:
  using Error::Error;
};

// Ambient volume does not leave enough room around the window for the
// interaction range; surface terms would be truncated.
class MarginTooSmall : public Error {
 public:
  using Error::Error;
};

// log/power of an operator whose spectrum is not strictly positive.
class NonPositiveSpectrum : public Error {
 public:
  using Error::Error;
};

// A density matrix with (numerically) vanishing eigenvalues was passed where
// a faithful state is required.
class StateNotFaithful : public Error {
 public:
  using Error::Error;
};

// Fit requested on fewer points than the model supports.
class TooFewPoints : public Error {
 public:
  using Error::Error;
};

// Series truncation could not reach the requested tail bound.
class TruncationNotConverged : public Error {
 public:
  using Error::Error;
};

// Imaginary-time argument too large for a stable evaluation.
class OverflowRisk : public Error {
 public:
  using Error::Error;
};

// Operation defined only for certain lattice dimensions.
class DimensionNotSupported : public Error {
 public:
  using Error::Error;
};

// Experiment configuration failed schema or semantic validation; the message
// carries the offending field or line.
class ConfigInvalid : public Error {
 public:
  using Error::Error;
};

// A report was requested for a manifest that does not exist or that points at
// missing result files.
class ManifestMissing : public Error {
 public:
  using Error::Error;
};

}  // namespace lattherm

#pragma once

#include <stdexcept>
#include <string>

namespace posekit {

// Base of every failure the toolkit raises.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A file could not be parsed; the message carries path and line/field.
struct ParseError : Error {
  using Error::Error;
};

// A domain invariant or precondition was violated; the message names it.
struct ValidationError : Error {
  using Error::Error;
};

// Missing, unreadable or unwritable files.
struct IoError : Error {
  using Error::Error;
};

// Pose estimation could not produce an answer (degenerate correspondences,
// no valid depth under the mask, all hypothesis scores zero).
struct EstimationError : Error {
  using Error::Error;
};

}  // namespace posekit

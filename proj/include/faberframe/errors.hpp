#pragma once

#include <stdexcept>

namespace faberframe {

// Requested size exceeds what a structure was built for, or the hard
// level-24 grid ceiling.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// A lambda schedule produced a value outside [0,1] or ran out of entries.
class ScheduleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace faberframe

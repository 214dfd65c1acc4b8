#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "evchain/types.hpp"

namespace evchain {

/// Raised when the input stream violates the windowing preconditions.
/// `position` is the index of the offending tweet.
class WindowError : public std::runtime_error {
 public:
  WindowError(std::size_t position, const std::string& message)
      : std::runtime_error(message), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Midnight UTC of the first tweet, or 0 for an empty stream.
std::int64_t default_origin(const std::vector<Tweet>& tweets);

/// Assigns each tweet to frame floor((timestamp - origin) / window_seconds).
/// Frames are contiguous from index 0 through the last occupied index, so
/// gaps appear as empty TimeFrames.
std::vector<TimeFrame> window_stream(const std::vector<Tweet>& tweets,
                                     std::int64_t window_seconds,
                                     std::int64_t origin);

}  // namespace evchain

#include "evchain/windowing.hpp"

#include <string>

namespace evchain {

std::int64_t default_origin(const std::vector<Tweet>& tweets) {
  if (tweets.empty()) return 0;
  std::int64_t ts = tweets.front().timestamp;
  std::int64_t day = 86400;
  std::int64_t floored = ts / day;
  if (ts < 0 && ts % day != 0) --floored;
  return floored * day;
}

std::vector<TimeFrame> window_stream(const std::vector<Tweet>& tweets,
                                     std::int64_t window_seconds,
                                     std::int64_t origin) {
  if (window_seconds <= 0) {
    throw std::invalid_argument("window_seconds must be positive");
  }
  std::vector<TimeFrame> frames;
  if (tweets.empty()) return frames;

  for (std::size_t i = 0; i < tweets.size(); ++i) {
    if (i > 0 && tweets[i].timestamp < tweets[i - 1].timestamp) {
      throw WindowError(i, "tweet stream not sorted by timestamp at position " +
                               std::to_string(i) + " (id " + tweets[i].id + ")");
    }
    if (tweets[i].timestamp < origin) {
      throw WindowError(i, "tweet at position " + std::to_string(i) +
                               " precedes the window origin");
    }
  }

  std::int64_t last_index = (tweets.back().timestamp - origin) / window_seconds;
  frames.reserve(static_cast<std::size_t>(last_index) + 1);
  for (std::int64_t idx = 0; idx <= last_index; ++idx) {
    TimeFrame frame;
    frame.index = static_cast<int>(idx);
    frame.start = origin + idx * window_seconds;
    frame.end = frame.start + window_seconds;
    frames.push_back(std::move(frame));
  }
  for (const auto& tweet : tweets) {
    std::int64_t idx = (tweet.timestamp - origin) / window_seconds;
    frames[static_cast<std::size_t>(idx)].tweets.push_back(tweet);
  }
  return frames;
}

}  // namespace evchain

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace mpllab {

/// Indexed binary min-heap of (time, channel) with O(log n) update and removal
/// by channel id. Ties are broken by the smaller channel id.
class EventQueue {
 public:
  explicit EventQueue(std::size_t channels) : position_(channels, kAbsent) {}

  bool empty() const noexcept { return heap_.empty(); }
  std::size_t size() const noexcept { return heap_.size(); }
  bool contains(std::size_t channel) const noexcept { return position_[channel] != kAbsent; }

  double top_time() const noexcept { return heap_.front().time; }
  std::size_t top_channel() const noexcept { return heap_.front().channel; }

  /// Inserts or reschedules.
  void schedule(std::size_t channel, double time) {
    if (contains(channel)) {
      const std::size_t i = position_[channel];
      const double old = heap_[i].time;
      heap_[i].time = time;
      if (time < old) {
        sift_up(i);
      } else {
        sift_down(i);
      }
      return;
    }
    heap_.push_back({time, channel});
    position_[channel] = heap_.size() - 1;
    sift_up(heap_.size() - 1);
  }

  void remove(std::size_t channel) {
    if (!contains(channel)) return;
    const std::size_t i = position_[channel];
    position_[channel] = kAbsent;
    if (i + 1 == heap_.size()) {
      heap_.pop_back();
      return;
    }
    heap_[i] = heap_.back();
    heap_.pop_back();
    const std::size_t moved = heap_[i].channel;
    position_[moved] = i;
    sift_up(i);
    sift_down(position_[moved]);
  }

 private:
  struct Entry {
    double time;
    std::size_t channel;
  };
  static constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();

  static bool before(const Entry& a, const Entry& b) noexcept {
    return a.time < b.time || (a.time == b.time && a.channel < b.channel);
  }

  void place(std::size_t i, const Entry& e) {
    heap_[i] = e;
    position_[e.channel] = i;
  }

  void sift_up(std::size_t i) {
    const Entry e = heap_[i];
    while (i > 0) {
      const std::size_t parent = (i - 1) / 2;
      if (!before(e, heap_[parent])) break;
      place(i, heap_[parent]);
      i = parent;
    }
    place(i, e);
  }

  void sift_down(std::size_t i) {
    const Entry e = heap_[i];
    const std::size_t n = heap_.size();
    for (;;) {
      std::size_t child = 2 * i + 1;
      if (child >= n) break;
      if (child + 1 < n && before(heap_[child + 1], heap_[child])) ++child;
      if (!before(heap_[child], e)) break;
      place(i, heap_[child]);
      i = child;
    }
    place(i, e);
  }

  std::vector<Entry> heap_;
  std::vector<std::size_t> position_;
};

}  // namespace mpllab

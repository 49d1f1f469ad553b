#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

namespace perclab {

// Dense 2D bit array, row-major.
class Bitfield2D {
 public:
  Bitfield2D() : nx_(0), ny_(0) {}
  Bitfield2D(int nx, int ny, bool fill = false)
      : nx_(nx), ny_(ny), words_((static_cast<std::size_t>(nx) * ny + 63) / 64,
                                 fill ? ~0ULL : 0ULL) {
    assert(nx >= 0 && ny >= 0);
  }

  int nx() const { return nx_; }
  int ny() const { return ny_; }

  bool get(int x, int y) const {
    std::size_t i = idx(x, y);
    return (words_[i >> 6] >> (i & 63)) & 1;
  }

  void set(int x, int y, bool v) {
    std::size_t i = idx(x, y);
    if (v)
      words_[i >> 6] |= 1ULL << (i & 63);
    else
      words_[i >> 6] &= ~(1ULL << (i & 63));
  }

  std::size_t count() const {
    std::size_t n = 0;
    std::size_t total = static_cast<std::size_t>(nx_) * ny_;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t word = words_[w];
      if ((w + 1) * 64 > total && total > w * 64)
        word &= (total % 64) ? ((1ULL << (total % 64)) - 1) : ~0ULL;
      n += static_cast<std::size_t>(__builtin_popcountll(word));
    }
    return n;
  }

  bool operator==(const Bitfield2D& o) const {
    if (nx_ != o.nx_ || ny_ != o.ny_) return false;
    for (int y = 0; y < ny_; ++y)
      for (int x = 0; x < nx_; ++x)
        if (get(x, y) != o.get(x, y)) return false;
    return true;
  }

 private:
  std::size_t idx(int x, int y) const {
    assert(x >= 0 && x < nx_ && y >= 0 && y < ny_);
    return static_cast<std::size_t>(y) * nx_ + x;
  }

  int nx_, ny_;
  std::vector<std::uint64_t> words_;
};

}  // namespace perclab

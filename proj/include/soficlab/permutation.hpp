#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace soficlab {

/// Permutation of {0, ..., N-1} in one-line form: image[i] is where i goes.
class Permutation {
 public:
  Permutation() = default;
  /// Identity on n points.
  explicit Permutation(std::size_t n);
  /// Throws InvalidInput unless `images` is a bijection of {0..N-1}.
  explicit Permutation(std::vector<std::uint32_t> images);

  std::size_t size() const noexcept { return images_.size(); }
  std::uint32_t operator()(std::uint32_t i) const { return images_[i]; }
  std::span<const std::uint32_t> images() const noexcept { return images_; }

  Permutation inverse() const;
  bool is_identity() const noexcept;
  std::size_t fixed_points() const noexcept;

  /// (a * b)(i) = a(b(i)): apply b first.
  friend Permutation operator*(const Permutation& a, const Permutation& b);
  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::uint32_t> images_;
};

bool is_bijection(std::span<const std::uint32_t> images) noexcept;

}  // namespace soficlab

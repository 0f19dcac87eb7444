#include "soficlab/permutation.hpp"

#include <numeric>
#include <string>

#include "soficlab/error.hpp"

namespace soficlab {

bool is_bijection(std::span<const std::uint32_t> images) noexcept {
  std::vector<bool> seen(images.size(), false);
  for (std::uint32_t x : images) {
    if (x >= images.size() || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

Permutation::Permutation(std::size_t n) : images_(n) {
  std::iota(images_.begin(), images_.end(), std::uint32_t{0});
}

Permutation::Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
  if (!is_bijection(images_))
    throw InvalidInput("not a permutation of {0.." + std::to_string(images_.size()) + "-1}");
}

Permutation Permutation::inverse() const {
  Permutation out(size());
  for (std::uint32_t i = 0; i < size(); ++i) out.images_[images_[i]] = i;
  return out;
}

bool Permutation::is_identity() const noexcept { return fixed_points() == size(); }

std::size_t Permutation::fixed_points() const noexcept {
  std::size_t n = 0;
  for (std::uint32_t i = 0; i < size(); ++i) n += images_[i] == i;
  return n;
}

Permutation operator*(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw InvalidInput("composing permutations of different degree");
  Permutation out(a.size());
  for (std::uint32_t i = 0; i < a.size(); ++i) out.images_[i] = a.images_[b.images_[i]];
  return out;
}

}  // namespace soficlab

#include "urysohn/permutation.hpp"

#include <numeric>
#include <string>

#include "urysohn/error.hpp"

namespace urysohn {

bool is_bijection(std::span<const std::size_t> image) {
  std::vector<bool> seen(image.size(), false);
  for (std::size_t v : image) {
    if (v >= image.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

Permutation::Permutation(std::vector<std::size_t> image) : image_(std::move(image)) {
  if (!is_bijection(image_)) fail_precondition("image table is not a bijection");
}

Permutation Permutation::identity(std::size_t size) {
  std::vector<std::size_t> image(size);
  std::iota(image.begin(), image.end(), std::size_t{0});
  Permutation p;
  p.image_ = std::move(image);
  return p;
}

Permutation Permutation::cycle(std::size_t size, std::span<const std::size_t> points) {
  auto image = identity(size).image_;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] >= size) fail_precondition("cycle point out of range");
    image[points[i]] = points[(i + 1) % points.size()];
  }
  return Permutation(std::move(image));
}

bool Permutation::is_identity() const noexcept {
  for (std::size_t i = 0; i < image_.size(); ++i) {
    if (image_[i] != i) return false;
  }
  return true;
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = i;
  Permutation p;
  p.image_ = std::move(inv);
  return p;
}

std::vector<std::vector<std::size_t>> Permutation::cycles() const {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> seen(image_.size(), false);
  for (std::size_t start = 0; start < image_.size(); ++start) {
    if (seen[start]) continue;
    auto& cyc = out.emplace_back();
    for (std::size_t x = start; !seen[x]; x = image_[x]) {
      seen[x] = true;
      cyc.push_back(x);
    }
  }
  return out;
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
  if (outer.size() != inner.size()) fail_precondition("composing permutations of different sizes");
  std::vector<std::size_t> image(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) image[i] = outer(inner(i));
  return Permutation(std::move(image));
}

Permutation permutation_power(const Permutation& p, std::int64_t k) {
  std::vector<std::size_t> image(p.size());
  for (const auto& cyc : p.cycles()) {
    const auto len = static_cast<std::int64_t>(cyc.size());
    const std::int64_t shift = ((k % len) + len) % len;
    for (std::int64_t i = 0; i < len; ++i) {
      image[cyc[static_cast<std::size_t>(i)]] = cyc[static_cast<std::size_t>((i + shift) % len)];
    }
  }
  return Permutation(std::move(image));
}

std::uint64_t permutation_order(const Permutation& p) {
  std::uint64_t order = 1;
  for (const auto& cyc : p.cycles()) {
    order = std::lcm(order, static_cast<std::uint64_t>(cyc.size()));
  }
  return order;
}

}  // namespace urysohn
